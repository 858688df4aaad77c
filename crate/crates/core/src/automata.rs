//! Symmetric-difference automata (XNFA), their determinization into XDFA,
//! word weights over GF(2), and minimization.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, BitVec};

/// Default bound on the number of reachable XDFA states.
pub const DEFAULT_MAX_STATES: usize = 1 << 20;
/// Word-length bound for [`path_parity_oracle`].
pub const ORACLE_MAX_WORD_LEN: usize = 16;
/// State-count bound for [`path_parity_oracle`].
pub const ORACLE_MAX_STATES: usize = 8;

/// How an XDFA state (or a word) fails the SV-condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// Odd overlap with both the accept and the reject set.
    BothOdd,
    /// Even overlap with both sets.
    NeitherOdd,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::BothOdd => "both accept and reject parities are odd",
            Violation::NeitherOdd => "neither accept nor reject parity is odd",
        })
    }
}

/// Parity classification of an XDFA state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateClass {
    Accept,
    Reject,
    Invalid(Violation),
}

impl StateClass {
    /// Classifies from the two parities `⟨d, F^a⟩` and `⟨d, F^r⟩`.
    pub fn from_parities(accept: bool, reject: bool) -> Self {
        match (accept, reject) {
            (true, false) => StateClass::Accept,
            (false, true) => StateClass::Reject,
            (true, true) => StateClass::Invalid(Violation::BothOdd),
            (false, false) => StateClass::Invalid(Violation::NeitherOdd),
        }
    }

    pub fn of(d: &BitVec, fa: &BitVec, fr: &BitVec) -> Result<Self> {
        Ok(StateClass::from_parities(d.dot(fa)?, d.dot(fr)?))
    }

    pub fn is_valid(self) -> bool {
        !matches!(self, StateClass::Invalid(_))
    }
}

/// Outcome of running a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordClass {
    Accepted,
    Rejected,
    SvViolation(Violation),
}

impl From<StateClass> for WordClass {
    fn from(c: StateClass) -> Self {
        match c {
            StateClass::Accept => WordClass::Accepted,
            StateClass::Reject => WordClass::Rejected,
            StateClass::Invalid(v) => WordClass::SvViolation(v),
        }
    }
}

/// A self-verifying symmetric-difference NFA, held as one GF(2) matrix per
/// symbol plus initial, accept and reject vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Xnfa {
    alphabet: Vec<char>,
    matrices: Vec<BitMatrix>,
    q0: BitVec,
    fa: BitVec,
    fr: BitVec,
    allow_singular: bool,
}

impl Xnfa {
    /// Builds a machine whose transition matrices must all be non-singular.
    pub fn new(
        alphabet: Vec<char>,
        matrices: Vec<BitMatrix>,
        q0: BitVec,
        fa: BitVec,
        fr: BitVec,
    ) -> Result<Self> {
        Xnfa::build(alphabet, matrices, q0, fa, fr, false)
    }

    /// As [`Xnfa::new`] but tolerating singular matrices. The state-complexity
    /// guarantees of this crate do not hold for such machines.
    pub fn allowing_singular(
        alphabet: Vec<char>,
        matrices: Vec<BitMatrix>,
        q0: BitVec,
        fa: BitVec,
        fr: BitVec,
    ) -> Result<Self> {
        Xnfa::build(alphabet, matrices, q0, fa, fr, true)
    }

    pub(crate) fn build(
        alphabet: Vec<char>,
        matrices: Vec<BitMatrix>,
        q0: BitVec,
        fa: BitVec,
        fr: BitVec,
        allow_singular: bool,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::Malformed("alphabet is empty".into()));
        }
        if alphabet.len() != matrices.len() {
            return Err(Error::Malformed(format!(
                "{} symbols but {} matrices",
                alphabet.len(),
                matrices.len()
            )));
        }
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(c) {
                return Err(Error::Malformed(format!("symbol {c:?} appears twice")));
            }
        }
        let n = q0.len();
        if n == 0 {
            return Err(Error::Malformed("machine has no states".into()));
        }
        for v in [&fa, &fr] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: v.len(),
                });
            }
        }
        for (c, m) in alphabet.iter().zip(&matrices) {
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: m.n(),
                });
            }
            if !allow_singular && !m.is_nonsingular() {
                return Err(Error::Malformed(format!(
                    "transition matrix for {c:?} is singular (pass allow_singular to override)"
                )));
            }
        }
        if q0.is_zero() {
            return Err(Error::Malformed("initial state set is empty".into()));
        }
        Ok(Xnfa {
            alphabet,
            matrices,
            q0,
            fa,
            fr,
            allow_singular,
        })
    }

    pub fn n(&self) -> usize {
        self.q0.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    pub fn q0(&self) -> &BitVec {
        &self.q0
    }

    pub fn fa(&self) -> &BitVec {
        &self.fa
    }

    pub fn fr(&self) -> &BitVec {
        &self.fr
    }

    pub fn allow_singular(&self) -> bool {
        self.allow_singular
    }

    pub fn symbol_index(&self, c: char) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|&s| s == c)
            .ok_or(Error::UnknownSymbol(c))
    }

    pub fn matrix(&self, c: char) -> Result<&BitMatrix> {
        Ok(&self.matrices[self.symbol_index(c)?])
    }

    /// Same transitions, new accept and reject sets.
    pub fn with_assignment(&self, fa: BitVec, fr: BitVec) -> Result<Xnfa> {
        Xnfa::build(
            self.alphabet.clone(),
            self.matrices.clone(),
            self.q0.clone(),
            fa,
            fr,
            self.allow_singular,
        )
    }

    pub fn with_initial(&self, q0: BitVec) -> Result<Xnfa> {
        Xnfa::build(
            self.alphabet.clone(),
            self.matrices.clone(),
            q0,
            self.fa.clone(),
            self.fr.clone(),
            self.allow_singular,
        )
    }

    /// The sub-machine over the given symbols only.
    pub fn restrict(&self, symbols: &[char]) -> Result<Xnfa> {
        let matrices = symbols
            .iter()
            .map(|&c| self.matrix(c).cloned())
            .collect::<Result<Vec<_>>>()?;
        Xnfa::build(
            symbols.to_vec(),
            matrices,
            self.q0.clone(),
            self.fa.clone(),
            self.fr.clone(),
            self.allow_singular,
        )
    }

    /// Successor of the subset `d` on `c`: `d · M_c`.
    pub fn step(&self, d: &BitVec, c: char) -> Result<BitVec> {
        d.mul_matrix(self.matrix(c)?)
    }

    /// Subset reached from the initial vector after reading `word`.
    pub fn run(&self, word: &str) -> Result<BitVec> {
        let mut d = self.q0.clone();
        for c in word.chars() {
            d = self.step(&d, c)?;
        }
        Ok(d)
    }
}

/// The deterministic automaton produced by the symmetric-difference subset
/// construction. State 0 is the initial state and every state is reachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xdfa {
    alphabet: Vec<char>,
    states: Vec<BitVec>,
    trans: Vec<Vec<usize>>,
    classes: Vec<StateClass>,
}

impl Xdfa {
    /// Assembles an XDFA from parts, checking completeness and reachability.
    pub fn from_parts(
        alphabet: Vec<char>,
        states: Vec<BitVec>,
        trans: Vec<Vec<usize>>,
        classes: Vec<StateClass>,
    ) -> Result<Self> {
        let k = states.len();
        if k == 0 {
            return Err(Error::Malformed("XDFA has no states".into()));
        }
        if trans.len() != k || classes.len() != k {
            return Err(Error::Malformed(format!(
                "{k} states but {} transition rows and {} classes",
                trans.len(),
                classes.len()
            )));
        }
        for (i, row) in trans.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::Malformed(format!(
                    "state {i} has {} transitions for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= k) {
                return Err(Error::Malformed(format!(
                    "state {i} targets missing state {t}"
                )));
            }
        }
        let d = Xdfa {
            alphabet,
            states,
            trans,
            classes,
        };
        if d.bfs_order().len() != k {
            return Err(Error::Malformed("XDFA has unreachable states".into()));
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn states(&self) -> &[BitVec] {
        &self.states
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.trans
    }

    pub fn classes(&self) -> &[StateClass] {
        &self.classes
    }

    pub fn next(&self, state: usize, c: char) -> Result<usize> {
        let s = self
            .alphabet
            .iter()
            .position(|&a| a == c)
            .ok_or(Error::UnknownSymbol(c))?;
        Ok(self.trans[state][s])
    }

    /// Index of the state reached from the initial state on `word`.
    pub fn run(&self, word: &str) -> Result<usize> {
        word.chars().try_fold(0, |s, c| self.next(s, c))
    }

    pub fn classify_word(&self, word: &str) -> Result<WordClass> {
        Ok(self.classes[self.run(word)?].into())
    }

    /// First state (in index order) violating the SV-condition.
    pub fn first_invalid(&self) -> Option<(usize, Violation)> {
        self.classes.iter().enumerate().find_map(|(i, c)| match c {
            StateClass::Invalid(v) => Some((i, *v)),
            _ => None,
        })
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = vec![0];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for &t in &self.trans[s] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Transition table and classes relabelled in BFS order from the
    /// initial state, alphabet order breaking ties.
    fn canonical_form(&self) -> (Vec<Vec<usize>>, Vec<StateClass>) {
        let order = self.bfs_order();
        let mut relabel = vec![usize::MAX; self.states.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let trans = order
            .iter()
            .map(|&old| self.trans[old].iter().map(|&t| relabel[t]).collect())
            .collect();
        let classes = order.iter().map(|&old| self.classes[old]).collect();
        (trans, classes)
    }
}

/// Options for [`determinize_with`].
#[derive(Debug, Clone, Copy)]
pub struct DeterminizeOptions {
    pub max_states: usize,
}

impl Default for DeterminizeOptions {
    fn default() -> Self {
        DeterminizeOptions {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

/// Symmetric-difference subset construction with the default state cap.
pub fn determinize(n: &Xnfa) -> Result<Xdfa> {
    determinize_with(n, DeterminizeOptions::default())
}

/// Breadth-first closure of `q0` under `d ↦ d · M_σ`, symbols in alphabet
/// order. States are numbered in discovery order.
pub fn determinize_with(n: &Xnfa, opts: DeterminizeOptions) -> Result<Xdfa> {
    let mut index: HashMap<BitVec, usize> = HashMap::new();
    let mut states = vec![n.q0.clone()];
    let mut trans: Vec<Vec<usize>> = Vec::new();
    index.insert(n.q0.clone(), 0);
    let mut queue = VecDeque::from([0usize]);

    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(n.alphabet.len());
        for m in &n.matrices {
            let next = states[s].mul_matrix(m)?;
            assert!(
                n.allow_singular || !next.is_zero(),
                "non-singular transitions reached the empty subset"
            );
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= opts.max_states {
                        return Err(Error::CapExceeded {
                            what: "reachable XDFA states",
                            value: states.len() + 1,
                            cap: opts.max_states,
                        });
                    }
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    queue.push_back(t);
                    t
                }
            };
            row.push(t);
        }
        trans.push(row);
    }

    let classes = states
        .iter()
        .map(|d| StateClass::of(d, &n.fa, &n.fr))
        .collect::<Result<Vec<_>>>()?;
    Ok(Xdfa {
        alphabet: n.alphabet.clone(),
        states,
        trans,
        classes,
    })
}

/// `M_w = ∏ M_{σ_i}` in word order; the empty word gives the identity.
pub fn word_matrix(n: &Xnfa, word: &str) -> Result<BitMatrix> {
    word.chars()
        .try_fold(BitMatrix::identity(n.n()), |acc, c| acc.mul(n.matrix(c)?))
}

/// `Δ(w) = v(Q_0) · M_w · v(F)ᵀ` over GF(2).
pub fn weight(n: &Xnfa, word: &str, final_states: &BitVec) -> Result<bool> {
    n.q0.mul_matrix(&word_matrix(n, word)?)?.dot(final_states)
}

/// Parity classification of `word` from its accept and reject weights.
pub fn classify_word(n: &Xnfa, word: &str) -> Result<WordClass> {
    let accept = weight(n, word, &n.fa)?;
    let reject = weight(n, word, &n.fr)?;
    Ok(StateClass::from_parities(accept, reject).into())
}

/// Counts, by explicit enumeration, the nondeterministic paths on `word` that
/// start in an initial state and end in `final_states`, returning the count
/// mod 2. Exponential; limited to [`ORACLE_MAX_STATES`] states and words of
/// at most [`ORACLE_MAX_WORD_LEN`] symbols.
pub fn path_parity_oracle(n: &Xnfa, word: &str, final_states: &BitVec) -> Result<bool> {
    let symbols: Vec<usize> = word
        .chars()
        .map(|c| n.symbol_index(c))
        .collect::<Result<_>>()?;
    if symbols.len() > ORACLE_MAX_WORD_LEN {
        return Err(Error::CapExceeded {
            what: "oracle word length",
            value: symbols.len(),
            cap: ORACLE_MAX_WORD_LEN,
        });
    }
    if n.n() > ORACLE_MAX_STATES {
        return Err(Error::CapExceeded {
            what: "oracle state count",
            value: n.n(),
            cap: ORACLE_MAX_STATES,
        });
    }
    if final_states.len() != n.n() {
        return Err(Error::DimensionMismatch {
            expected: n.n(),
            actual: final_states.len(),
        });
    }

    fn walk(n: &Xnfa, symbols: &[usize], state: usize, final_states: &BitVec, count: &mut u64) {
        match symbols.split_first() {
            None => {
                if final_states.get(state) {
                    *count += 1;
                }
            }
            Some((&s, rest)) => {
                for next in n.matrices[s].row(state).iter_ones() {
                    walk(n, rest, next, final_states, count);
                }
            }
        }
    }

    let mut count = 0u64;
    for start in n.q0.iter_ones() {
        walk(n, &symbols, start, final_states, &mut count);
    }
    Ok(count % 2 == 1)
}

/// Moore partition refinement starting from `{accept states, reject states}`.
/// Fails if any state is [`StateClass::Invalid`].
pub fn minimize(d: &Xdfa) -> Result<Xdfa> {
    if let Some((state, violation)) = d.first_invalid() {
        return Err(Error::SvViolation {
            state,
            subset: d.states[state].to_string(),
            violation,
        });
    }
    let k = d.len();
    let mut block: Vec<usize> = d
        .classes
        .iter()
        .map(|c| usize::from(*c == StateClass::Reject))
        .collect();
    let mut blocks = renumber(&mut block);
    loop {
        let mut signatures: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![0; k];
        for s in 0..k {
            let sig = (block[s], d.trans[s].iter().map(|&t| block[t]).collect());
            let next_id = signatures.len();
            refined[s] = *signatures.entry(sig).or_insert(next_id);
        }
        let count = signatures.len();
        block = refined;
        if count == blocks {
            break;
        }
        blocks = count;
    }

    // Quotient over block representatives, renumbered in BFS order from the
    // initial state's block.
    let mut rep = vec![usize::MAX; blocks];
    for s in 0..k {
        if rep[block[s]] == usize::MAX {
            rep[block[s]] = s;
        }
    }
    let mut relabel = vec![usize::MAX; blocks];
    let mut order = vec![block[0]];
    relabel[block[0]] = 0;
    let mut head = 0;
    while head < order.len() {
        let b = order[head];
        head += 1;
        for &t in &d.trans[rep[b]] {
            if relabel[block[t]] == usize::MAX {
                relabel[block[t]] = order.len();
                order.push(block[t]);
            }
        }
    }
    Ok(Xdfa {
        alphabet: d.alphabet.clone(),
        states: order.iter().map(|&b| d.states[rep[b]].clone()).collect(),
        trans: order
            .iter()
            .map(|&b| d.trans[rep[b]].iter().map(|&t| relabel[block[t]]).collect())
            .collect(),
        classes: order.iter().map(|&b| d.classes[rep[b]]).collect(),
    })
}

/// Relabels block ids to 0..k in first-appearance order; returns k.
fn renumber(block: &mut [usize]) -> usize {
    let mut map = HashMap::new();
    for b in block.iter_mut() {
        let next = map.len();
        *b = *map.entry(*b).or_insert(next);
    }
    map.len()
}

/// Structural identity of two XDFAs up to relabelling of states, including
/// the accept/reject classification. State subsets are not compared.
pub fn xdfa_isomorphic(a: &Xdfa, b: &Xdfa) -> Result<bool> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet.clone(),
            right: b.alphabet.clone(),
        });
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(a.canonical_form() == b.canonical_form())
}

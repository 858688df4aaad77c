//! Checking and solving the self-verifying condition.
//!
//! A reachable XDFA state `d` is valid iff exactly one of `⟨d, F^a⟩` and
//! `⟨d, F^r⟩` is 1, i.e. iff `⟨d, F^a ⊕ F^r⟩ = 1`. The condition is linear
//! in `u = F^a ⊕ F^r`, so all SV-assignments of a machine are the affine
//! space `{u : ⟨d, u⟩ = 1 for every reachable d}`, split in any way into
//! an accept and a reject set.

use crate::automata::{determinize, StateClass, Violation, Xnfa};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, BitVec, EchelonBasis};
use crate::poly::{char_poly, companion_polynomial, has_factor_x_plus_1};

/// Outcome of [`check_sv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SvReport {
    Ok,
    /// First reachable state, in BFS order, failing the condition.
    Counterexample {
        index: usize,
        state: BitVec,
        violation: Violation,
    },
}

impl SvReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, SvReport::Ok)
    }
}

/// Determinizes `n` and checks every reachable state.
pub fn check_sv(n: &Xnfa) -> Result<SvReport> {
    let d = determinize(n)?;
    Ok(match d.first_invalid() {
        None => SvReport::Ok,
        Some((index, violation)) => SvReport::Counterexample {
            index,
            state: d.states()[index].clone(),
            violation,
        },
    })
}

/// A choice of accept and reject sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvAssignment {
    pub fa: BitVec,
    pub fr: BitVec,
    /// One of the two sets is empty.
    pub trivial: bool,
}

impl SvAssignment {
    pub fn new(fa: BitVec, fr: BitVec) -> Self {
        let trivial = fa.is_zero() || fr.is_zero();
        SvAssignment { fa, fr, trivial }
    }

    /// `n` with this assignment installed.
    pub fn apply(&self, n: &Xnfa) -> Result<Xnfa> {
        n.with_assignment(self.fa.clone(), self.fr.clone())
    }
}

/// Every `u = F^a ⊕ F^r` making a machine self-verifying.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvSolutionSpace {
    pub satisfiable: bool,
    /// Meaningful only when `satisfiable`.
    pub particular: BitVec,
    pub homogeneous_basis: Vec<BitVec>,
}

impl SvSolutionSpace {
    pub fn dimension(&self) -> usize {
        self.homogeneous_basis.len()
    }

    pub fn contains(&self, u: &BitVec) -> bool {
        if !self.satisfiable || u.len() != self.particular.len() {
            return false;
        }
        let mut basis = EchelonBasis::new(u.len());
        for b in &self.homogeneous_basis {
            basis.insert(b);
        }
        basis.contains(&u.xor(&self.particular).expect("lengths checked"))
    }

    /// Up to `limit` solutions: `particular` XOR each subset of the basis,
    /// in binary-counter order over the basis.
    pub fn enumerate(&self, limit: usize) -> Vec<BitVec> {
        if !self.satisfiable {
            return Vec::new();
        }
        let k = self.homogeneous_basis.len();
        let total = if k >= usize::BITS as usize {
            usize::MAX
        } else {
            1usize << k
        };
        (0..total.min(limit))
            .map(|mask| {
                let mut u = self.particular.clone();
                for (i, b) in self.homogeneous_basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        u.xor_assign(b);
                    }
                }
                u
            })
            .collect()
    }
}

/// Solves `⟨d, u⟩ = 1` over all reachable XDFA states `d`. The machine's own
/// accept and reject sets are ignored.
pub fn solve_sv(n: &Xnfa) -> Result<SvSolutionSpace> {
    let d = determinize(n)?;
    // Reachable states are distinct, so there are no duplicate constraints.
    let rhs = vec![true; d.len()];
    Ok(match solve_affine(n.n(), d.states(), &rhs)? {
        Some(sol) => SvSolutionSpace {
            satisfiable: true,
            particular: sol.particular,
            homogeneous_basis: sol.kernel,
        },
        None => SvSolutionSpace {
            satisfiable: false,
            particular: BitVec::zeros(n.n()),
            homogeneous_basis: Vec::new(),
        },
    })
}

/// `F^a = mask`, `F^r = mask ⊕ u`.
pub fn split_assignment(u: &BitVec, mask: &BitVec) -> Result<SvAssignment> {
    let fr = mask.xor(u)?;
    Ok(SvAssignment::new(mask.clone(), fr))
}

/// For a machine with normal-form matrices whose characteristic polynomials
/// all have `X + 1` as a factor and with an odd-sized initial set, every
/// reachable state is odd-sized, so any partition `(F^a, Q ∖ F^a)` is an
/// SV-assignment.
pub fn odd_closure_assignment(n: &Xnfa, fa: &BitVec) -> Result<SvAssignment> {
    if fa.len() != n.n() {
        return Err(Error::DimensionMismatch {
            expected: n.n(),
            actual: fa.len(),
        });
    }
    for (c, m) in n.alphabet().iter().zip(n.matrices()) {
        if companion_polynomial(m).is_none() {
            return Err(Error::Hypothesis(format!(
                "transition matrix for {c:?} is not in normal (companion) form"
            )));
        }
        let cp = char_poly(m);
        if !has_factor_x_plus_1(&cp) {
            return Err(Error::Hypothesis(format!(
                "characteristic polynomial {cp} of {c:?} does not have X+1 as a factor"
            )));
        }
    }
    if n.q0().popcount().is_multiple_of(2) {
        return Err(Error::Hypothesis(format!(
            "initial set {} has even size",
            n.q0()
        )));
    }
    Ok(SvAssignment::new(fa.clone(), fa.complement()))
}

/// Whether `(fa, fr)` classifies every reachable state of `n` validly,
/// regardless of the machine's own assignment.
pub fn is_valid_assignment(n: &Xnfa, fa: &BitVec, fr: &BitVec) -> Result<bool> {
    let d = determinize(n)?;
    for s in d.states() {
        if !StateClass::of(s, fa, fr)?.is_valid() {
            return Ok(false);
        }
    }
    Ok(true)
}

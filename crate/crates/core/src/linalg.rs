//! Exact linear algebra over GF(2).
//!
//! Vectors are row vectors throughout: a state subset `d` evolves as
//! `d' = d · M`, and row `q` of a transition matrix lists the successor set
//! of state `q`. Bits are packed into `u64` words; bit `i` of a [`BitVec`]
//! stands for state `q_i`.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Largest `n` for which [`enumerate_gl`] walks the whole group by default.
pub const DEFAULT_GL_ENUMERATION_CAP: usize = 4;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A length-`n` vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// The singleton `{q_i}`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self> {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            if i >= len {
                return Err(Error::InvalidArgument(format!(
                    "state index {i} out of range for {len} states"
                )));
            }
            v.set(i, true);
        }
        Ok(v)
    }

    /// Builds a vector from 0/1 entries; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.set(i, true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "entry {i} is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` for state `q_i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len.min(WORD) {
            if value >> i & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Number of 1-bits, i.e. the cardinality of the encoded subset.
    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn check_len(&self, other: &BitVec) -> Result<()> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(())
    }

    /// In-place symmetric difference. Panics on a length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Complement within `{q_0, ..., q_{n-1}}`.
    pub fn complement(&self) -> BitVec {
        let mut out = self.clone();
        for i in 0..self.len {
            out.toggle(i);
        }
        out
    }

    /// Inner product over GF(2): parity of `|self ∩ other|`.
    pub fn dot(&self, other: &BitVec) -> Result<bool> {
        self.check_len(other)?;
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| u8::from(self.get(i))).collect()
    }

    /// Row-vector product `self · m`: the XOR of the rows of `m` selected by
    /// the 1-bits of `self`.
    pub fn mul_matrix(&self, m: &BitMatrix) -> Result<BitVec> {
        if self.len != m.n {
            return Err(Error::DimensionMismatch {
                expected: m.n,
                actual: self.len,
            });
        }
        let mut out = BitVec::zeros(m.n);
        for i in self.iter_ones() {
            out.xor_assign(&m.rows[i]);
        }
        Ok(out)
    }

    /// `0/1` string with `q_0` first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    /// Index of the lowest set bit.
    fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }
}

impl fmt::Display for BitVec {
    /// Set notation, e.g. `{q0,q2,q3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter_ones().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "q{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}]", self.to_bit_string())
    }
}

/// An `n × n` matrix over GF(2), stored as rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        BitMatrix {
            n,
            rows: vec![BitVec::zeros(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix must have at least one row".into(),
            ));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: bad.len(),
            });
        }
        Ok(BitMatrix { n, rows })
    }

    /// Row-major 0/1 entries.
    pub fn from_bits<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| BitVec::from_bits(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(BitVec::to_bits).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| *r == BitVec::unit(self.n, i))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in self.rows[i].iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.mul_matrix(other))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix { n: self.n, rows })
    }

    /// Column-vector product `self · vᵀ`, returned as a row vector.
    pub fn mul_column(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.n);
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v)? {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.n);
        self.rows.iter().filter(|r| basis.insert(r)).count()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rank() == self.n
    }

    /// Gauss–Jordan inverse. The pivot for each column is the first
    /// available row with a 1 in that column.
    pub fn inverse(&self) -> Result<BitMatrix> {
        let n = self.n;
        let mut work = self.rows.clone();
        let mut aug: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, p);
            aug.swap(rank, p);
            for r in 0..n {
                if r != rank && work[r].get(col) {
                    let (pw, pa) = (work[rank].clone(), aug[rank].clone());
                    work[r].xor_assign(&pw);
                    aug[r].xor_assign(&pa);
                }
            }
            rank += 1;
        }
        if rank < n {
            // work[rank] is zero; aug[rank] records which original rows cancel.
            return Err(Error::SingularMatrix {
                dependent_rows: aug[rank].iter_ones().collect(),
            });
        }
        Ok(BitMatrix { n, rows: aug })
    }

    /// Conjugation `a⁻¹ · self · a`.
    pub fn conjugate(&self, a: &BitMatrix) -> Result<BitMatrix> {
        a.inverse()?.mul(self)?.mul(a)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(BitVec::to_bit_string).collect();
        write!(f, "BitMatrix[{}]", rows.join("/"))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<&str> = (0..self.n)
                .map(|j| if r.get(j) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Incrementally built row-echelon basis, used for rank and span tests.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    len: usize,
    // (pivot column, reduced row); each pivot column is cleared in every other row.
    rows: Vec<(usize, BitVec)>,
}

impl EchelonBasis {
    pub(crate) fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            rows: Vec::new(),
        }
    }

    pub(crate) fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub(crate) fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was added.
    pub(crate) fn insert(&mut self, v: &BitVec) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let r = self.reduce(v);
        let Some(pivot) = r.first_one() else {
            return false;
        };
        for (_, row) in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&r);
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

/// Solution set of an affine system over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    /// One solution; free variables set to zero.
    pub particular: BitVec,
    /// Basis of the homogeneous solution space.
    pub kernel: Vec<BitVec>,
}

/// Solves `⟨rows[i], u⟩ = rhs[i]` for every `i` by Gauss–Jordan elimination.
/// Returns `Ok(None)` when the system is inconsistent.
pub fn solve_affine(n: usize, rows: &[BitVec], rhs: &[bool]) -> Result<Option<AffineSolution>> {
    if rows.len() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            actual: rhs.len(),
        });
    }
    // (pivot column, row, right-hand side), kept in reduced form.
    let mut reduced: Vec<(usize, BitVec, bool)> = Vec::new();
    for (row, &b) in rows.iter().zip(rhs) {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: row.len(),
            });
        }
        let (mut r, mut b) = (row.clone(), b);
        for (p, prow, pb) in &reduced {
            if r.get(*p) {
                r.xor_assign(prow);
                b ^= pb;
            }
        }
        match r.first_one() {
            None if b => return Ok(None),
            None => {}
            Some(pivot) => {
                for (_, prow, pb) in &mut reduced {
                    if prow.get(pivot) {
                        prow.xor_assign(&r);
                        *pb ^= b;
                    }
                }
                reduced.push((pivot, r, b));
            }
        }
    }
    let mut particular = BitVec::zeros(n);
    let mut is_pivot = vec![false; n];
    for (p, _, b) in &reduced {
        particular.set(*p, *b);
        is_pivot[*p] = true;
    }
    let kernel = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut k = BitVec::unit(n, f);
            for (p, prow, _) in &reduced {
                if prow.get(f) {
                    k.set(*p, true);
                }
            }
            k
        })
        .collect();
    Ok(Some(AffineSolution { particular, kernel }))
}

/// `|GL(n, Z_2)| = ∏_{k=0}^{n-1} (2^n − 2^k)`, exact.
pub fn gl_order(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("gl_order requires n >= 1".into()));
    }
    let two_n = BigUint::from(1u8) << n;
    Ok((0..n).map(|k| &two_n - (BigUint::from(1u8) << k)).product())
}

/// A uniformly random non-singular `n × n` matrix, deterministic in `seed`.
///
/// Rows are drawn one at a time, rejecting any row already in the span of
/// the previous ones.
pub fn random_gl(n: usize, seed: u64) -> Result<BitMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_gl_with(n, &mut rng)
}

/// As [`random_gl`], drawing from a caller-supplied generator.
pub fn random_gl_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BitMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("random_gl requires n >= 1".into()));
    }
    let mut basis = EchelonBasis::new(n);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let bools: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let candidate = BitVec::from_bools(&bools);
        if basis.insert(&candidate) {
            rows.push(candidate);
        }
    }
    BitMatrix::from_rows(rows)
}

/// Every non-singular `n × n` matrix exactly once, for `n` up to
/// [`DEFAULT_GL_ENUMERATION_CAP`].
pub fn enumerate_gl(n: usize) -> Result<GlEnumerator> {
    enumerate_gl_with_cap(n, DEFAULT_GL_ENUMERATION_CAP)
}

pub fn enumerate_gl_with_cap(n: usize, cap: usize) -> Result<GlEnumerator> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "enumerate_gl requires n >= 1".into(),
        ));
    }
    if n > cap || n > 16 {
        return Err(Error::InvalidArgument(format!(
            "enumerating GL({n}, Z_2) exceeds the enumeration cap of {cap}; use random_gl instead"
        )));
    }
    Ok(GlEnumerator {
        n,
        rows: Vec::with_capacity(n),
        done: false,
    })
}

/// Lazy walk over `GL(n, Z_2)`: rows as integers, in lexicographic order,
/// each row independent of the rows above it.
#[derive(Debug, Clone)]
pub struct GlEnumerator {
    n: usize,
    rows: Vec<u64>,
    done: bool,
}

impl GlEnumerator {
    fn as_vec(&self, value: u64) -> BitVec {
        BitVec::from_u64(self.n, value)
    }

    /// Smallest row value `>= start` independent of `self.rows`.
    fn next_independent(&self, start: u64) -> Option<u64> {
        let mut basis = EchelonBasis::new(self.n);
        for &r in &self.rows {
            basis.insert(&self.as_vec(r));
        }
        (start..1u64 << self.n).find(|&v| !basis.contains(&self.as_vec(v)))
    }

    fn fill(&mut self) {
        while self.rows.len() < self.n {
            let v = self
                .next_independent(1)
                .expect("a proper subspace always has a complement vector");
            self.rows.push(v);
        }
    }

    fn current(&self) -> BitMatrix {
        BitMatrix::from_rows(self.rows.iter().map(|&r| self.as_vec(r)).collect())
            .expect("enumerator rows are square")
    }
}

impl Iterator for GlEnumerator {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        if self.done {
            return None;
        }
        if self.rows.is_empty() {
            self.fill();
            return Some(self.current());
        }
        while let Some(last) = self.rows.pop() {
            if let Some(v) = self.next_independent(last + 1) {
                self.rows.push(v);
                self.fill();
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(n: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), n).prop_map(|rows| {
            BitMatrix::from_rows(rows.iter().map(|r| BitVec::from_bools(r)).collect()).unwrap()
        })
    }

    fn vec_and_matrix() -> impl Strategy<Value = (BitVec, BitMatrix)> {
        (1usize..=10).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n).prop_map(|b| BitVec::from_bools(&b)),
                matrix(n),
            )
        })
    }

    proptest! {
        #[test]
        fn product_is_xor_of_selected_rows((v, m) in vec_and_matrix()) {
            let mut expected = vec![false; m.n()];
            for i in 0..m.n() {
                if v.get(i) {
                    for (j, e) in expected.iter_mut().enumerate() {
                        *e ^= m.get(i, j);
                    }
                }
            }
            prop_assert_eq!(v.mul_matrix(&m).unwrap(), BitVec::from_bools(&expected));
        }

        #[test]
        fn nonsingular_maps_are_injective(n in 1usize..=8, seed in any::<u64>(), bits in any::<u64>()) {
            let m = random_gl(n, seed).unwrap();
            let v = BitVec::from_u64(n, bits);
            prop_assume!(!v.is_zero());
            prop_assert!(!v.mul_matrix(&m).unwrap().is_zero());
        }

        #[test]
        fn affine_solutions_satisfy_system(n in 1usize..=8, seeds in proptest::collection::vec(any::<u64>(), 1..12), rhs_bits in any::<u64>()) {
            let rows: Vec<BitVec> = seeds.iter().map(|&s| BitVec::from_u64(n, s)).collect();
            let rhs: Vec<bool> = (0..rows.len()).map(|i| rhs_bits >> i & 1 == 1).collect();
            let brute: Vec<u64> = (0..1u64 << n)
                .filter(|&u| {
                    let u = BitVec::from_u64(n, u);
                    rows.iter().zip(&rhs).all(|(r, &b)| r.dot(&u).unwrap() == b)
                })
                .collect();
            match solve_affine(n, &rows, &rhs).unwrap() {
                None => prop_assert!(brute.is_empty()),
                Some(sol) => {
                    prop_assert_eq!(brute.len(), 1 << sol.kernel.len());
                    for (r, &b) in rows.iter().zip(&rhs) {
                        prop_assert_eq!(r.dot(&sol.particular).unwrap(), b);
                        for k in &sol.kernel {
                            prop_assert!(!r.dot(k).unwrap());
                        }
                    }
                }
            }
        }

        #[test]
        fn rank_matches_invertibility((_, m) in vec_and_matrix()) {
            prop_assert_eq!(m.is_nonsingular(), m.inverse().is_ok());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}

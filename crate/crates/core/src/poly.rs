//! Polynomials over GF(2), companion matrices, and the correspondence between
//! XDFA states and residues modulo a characteristic polynomial.
//!
//! A state `d ⊆ Q` maps to `f(d) = Σ d_i X^i`. With a transition matrix in
//! companion form for `c(X)`, one step `d · M` corresponds to `X · f(d) mod c`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, BitVec};

const WORD: usize = 64;

/// Highest degree accepted by [`is_primitive`].
pub const MAX_PRIMITIVE_DEGREE: usize = 32;
/// Highest degree accepted by [`enumerate_primitive`].
pub const MAX_ENUMERATION_DEGREE: usize = 16;

/// A polynomial over GF(2); bit `i` is the coefficient of `X^i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Poly {
    // No trailing zero words; the zero polynomial is an empty vector.
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly::monomial(0)
    }

    pub fn x() -> Self {
        Gf2Poly::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Gf2Poly::zero();
        p.toggle(k);
        p
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Gf2Poly { words: vec![bits] };
        p.normalize();
        p
    }

    /// Coefficient list, index `i` for `X^i`.
    pub fn from_coeffs(coeffs: &[u8]) -> Result<Self> {
        let mut p = Gf2Poly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 => p.toggle(i),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "coefficient of X^{i} is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(p)
    }

    /// Sum of `X^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = Gf2Poly::zero();
        for &e in exponents {
            p.toggle(e);
        }
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn toggle(&mut self, i: usize) {
        let w = i / WORD;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % WORD);
        self.normalize();
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| w >> (i % WORD) & 1 == 1)
    }

    /// Coefficients `c_0 ..= c_deg`; empty for the zero polynomial.
    pub fn coeffs(&self) -> Vec<u8> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| u8::from(self.coeff(i))).collect(),
        }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Number of nonzero terms.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `p(1)`, the parity of the weight.
    pub fn eval_at_one(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn shl(&self, k: usize) -> Gf2Poly {
        if self.is_zero() {
            return Gf2Poly::zero();
        }
        let (ws, bs) = (k / WORD, k % WORD);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] |= w << bs;
            if bs > 0 {
                words[i + ws + 1] |= w >> (WORD - bs);
            }
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        p
    }

    fn xor_assign(&mut self, other: &Gf2Poly) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        self.normalize();
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        let Some(d) = self.degree() else {
            return out;
        };
        for i in (0..=d).filter(|&i| self.coeff(i)) {
            out.xor_assign(&other.shl(i));
        }
        out
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, m: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let dm = m.degree().ok_or(Error::DivisionByZero)?;
        let mut q = Gf2Poly::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            q.toggle(dr - dm);
            r.xor_assign(&m.shl(dr - dm));
        }
        Ok((q, r))
    }

    /// Remainder modulo `m`, of degree `< deg(m)`.
    pub fn rem(&self, m: &Gf2Poly) -> Result<Gf2Poly> {
        Ok(self.div_rem(m)?.1)
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a
    }

    pub fn mul_mod(&self, other: &Gf2Poly, m: &Gf2Poly) -> Result<Gf2Poly> {
        self.mul(other).rem(m)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &Gf2Poly) -> Result<Gf2Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Gf2Poly::one().rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// `p + q`.
pub fn poly_add(p: &Gf2Poly, q: &Gf2Poly) -> Gf2Poly {
    p.add(q)
}

/// `p · q`.
pub fn poly_mul(p: &Gf2Poly, q: &Gf2Poly) -> Gf2Poly {
    p.mul(q)
}

/// `p mod m`; errors when `m` is zero.
pub fn poly_mod(p: &Gf2Poly, m: &Gf2Poly) -> Result<Gf2Poly> {
    p.rem(m)
}

impl fmt::Display for Gf2Poly {
    /// Highest power first, e.g. `X^4+X^3+X^2+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return f.write_str("0");
        };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    /// Accepts sums of `1`, `X`, `X^k` (either case, whitespace ignored).
    /// Repeated terms cancel, as they would over GF(2).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if compact == "0" {
            return Ok(Gf2Poly::zero());
        }
        let mut p = Gf2Poly::zero();
        for term in compact.split('+') {
            let exp = match term {
                "1" => 0,
                "x" | "X" => 1,
                t if t.starts_with("x^") || t.starts_with("X^") => t[2..]
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in term {t:?}")))?,
                t => return Err(Error::Parse(format!("unrecognized term {t:?}"))),
            };
            p.toggle(exp);
        }
        Ok(p)
    }
}

/// The companion (normal form) matrix of `c(X) = X^n + c_{n-1}X^{n-1} + … + c_0`:
/// ones on the superdiagonal and `[c_0, …, c_{n-1}]` as the last row.
pub fn companion_matrix(c: &Gf2Poly) -> Result<BitMatrix> {
    let n = match c.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "companion matrix needs a monic polynomial of degree >= 1, got {c}"
            )))
        }
    };
    let mut m = BitMatrix::zeros(n);
    for i in 0..n - 1 {
        m.set(i, i + 1, true);
    }
    for j in 0..n {
        m.set(n - 1, j, c.coeff(j));
    }
    Ok(m)
}

/// The polynomial `c` if `m` is exactly `companion_matrix(c)`.
pub fn companion_polynomial(m: &BitMatrix) -> Option<Gf2Poly> {
    let n = m.n();
    for i in 0..n - 1 {
        if *m.row(i) != BitVec::unit(n, i + 1) {
            return None;
        }
    }
    let mut c = Gf2Poly::monomial(n);
    for j in m.row(n - 1).iter_ones() {
        c = c.add(&Gf2Poly::monomial(j));
    }
    Some(c)
}

/// `det(XI − M)` over GF(2)[X].
///
/// Reduces `M` to upper Hessenberg form by similarity transforms, then runs
/// the usual determinant recurrence on the leading principal minors.
pub fn char_poly(m: &BitMatrix) -> Gf2Poly {
    let n = m.n();
    let mut h: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();

    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| h[i][j]) else {
            continue;
        };
        if p != j + 1 {
            h.swap(p, j + 1);
            for row in h.iter_mut() {
                row.swap(p, j + 1);
            }
        }
        for k in j + 2..n {
            if h[k][j] {
                // row_k += row_{j+1}, then col_{j+1} += col_k keeps the similarity.
                let pivot = h[j + 1].clone();
                for (a, b) in h[k].iter_mut().zip(&pivot) {
                    *a ^= b;
                }
                for row in h.iter_mut() {
                    let v = row[k];
                    row[j + 1] ^= v;
                }
            }
        }
    }

    // minors[k] = characteristic polynomial of the leading k×k block.
    let mut minors: Vec<Gf2Poly> = vec![Gf2Poly::one()];
    for k in 0..n {
        let mut next = Gf2Poly::x().mul(&minors[k]);
        if h[k][k] {
            next = next.add(&minors[k]);
        }
        let mut subdiag = true;
        for i in (0..k).rev() {
            subdiag &= h[i + 1][i];
            if !subdiag {
                break;
            }
            if h[i][k] {
                next = next.add(&minors[i]);
            }
        }
        minors.push(next);
    }
    minors.pop().expect("at least the constant minor")
}

/// Ben-Or style test: `gcd(p, X^{2^i} − X mod p) = 1` for every `i ≤ deg(p)/2`.
pub fn is_irreducible(p: &Gf2Poly) -> bool {
    let Some(d) = p.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let x = Gf2Poly::x();
    let mut power = x.rem(p).expect("p is nonzero");
    for _ in 1..=d / 2 {
        power = power.mul_mod(&power, p).expect("p is nonzero");
        if !p.gcd(&power.add(&x)).is_one() {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Irreducible, and `X` has multiplicative order exactly `2^m − 1` modulo `p`.
pub fn is_primitive(p: &Gf2Poly) -> Result<bool> {
    let Some(m) = p.degree() else {
        return Ok(false);
    };
    if m > MAX_PRIMITIVE_DEGREE {
        return Err(Error::CapExceeded {
            what: "primitivity test degree",
            value: m,
            cap: MAX_PRIMITIVE_DEGREE,
        });
    }
    if m == 0 || !is_irreducible(p) {
        return Ok(false);
    }
    let order = (1u64 << m) - 1;
    let x = Gf2Poly::x();
    if !x.pow_mod(order, p)?.is_one() {
        return Ok(false);
    }
    for r in prime_factors(order) {
        if x.pow_mod(order / r, p)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p(1) = 0`, i.e. an even number of nonzero terms.
pub fn has_factor_x_plus_1(p: &Gf2Poly) -> bool {
    !p.is_zero() && !p.eval_at_one()
}

/// `f(d) = Σ d_i X^i`.
pub fn state_to_poly(d: &BitVec) -> Gf2Poly {
    let mut p = Gf2Poly::zero();
    for i in d.iter_ones() {
        p.toggle(i);
    }
    p
}

/// Inverse of [`state_to_poly`] for states of `n` bits.
pub fn poly_to_state(p: &Gf2Poly, n: usize) -> Result<BitVec> {
    if let Some(d) = p.degree() {
        if d >= n {
            return Err(Error::InvalidArgument(format!(
                "polynomial {p} has degree {d}, too large for {n} states"
            )));
        }
    }
    let mut v = BitVec::zeros(n);
    for i in 0..n {
        v.set(i, p.coeff(i));
    }
    Ok(v)
}

/// All primitive polynomials of degree `m`, ordered by the integer value of
/// their coefficient bits (`c_0` least significant).
pub fn enumerate_primitive(m: usize) -> Result<impl Iterator<Item = Gf2Poly>> {
    if m == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if m > MAX_ENUMERATION_DEGREE {
        return Err(Error::CapExceeded {
            what: "primitive enumeration degree",
            value: m,
            cap: MAX_ENUMERATION_DEGREE,
        });
    }
    Ok((0..1u64 << m)
        .map(move |low| Gf2Poly::from_u64(1 << m | low))
        .filter(|p| is_primitive(p).expect("degree is within cap")))
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn companion_step_is_multiplication_by_x(n in 1usize..=10, low in any::<u64>()) {
            let low = (low & ((1 << n) - 1)) | 1;
            let c = Gf2Poly::from_u64(1 << n | low);
            let m = companion_matrix(&c).unwrap();
            for bits in 1..1u64 << n {
                let d = BitVec::from_u64(n, bits);
                let via_matrix = d.mul_matrix(&m).unwrap();
                let via_poly = poly_to_state(
                    &poly_mod(&Gf2Poly::x().mul(&state_to_poly(&d)), &c).unwrap(), n).unwrap();
                prop_assert_eq!(via_matrix, via_poly);
            }
        }

        #[test]
        fn char_poly_round_trips_companion(n in 1usize..=16, low in any::<u64>()) {
            let c = Gf2Poly::from_u64(1 << n | (low & ((1 << n) - 1)));
            prop_assert_eq!(char_poly(&companion_matrix(&c).unwrap()), c);
        }

        #[test]
        fn state_poly_round_trip(n in 1usize..=10, bits in any::<u64>()) {
            let d = BitVec::from_u64(n, bits);
            prop_assert_eq!(poly_to_state(&state_to_poly(&d), n).unwrap(), d);
        }

        #[test]
        fn mul_distributes(a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let (a, b, c) = (Gf2Poly::from_u64(a.into()), Gf2Poly::from_u64(b.into()), Gf2Poly::from_u64(c.into()));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}

//! Witness machines for the `2^{n-1}` lower bound, their `m`-ary extension,
//! and change-of-basis transformations.
//!
//! The binary witness for `n` states takes a primitive `φ` of degree `n − 1`
//! and uses the companion matrices of `c_a = (X+1)·φ` and `c_b = X^n + φ`,
//! with `Q_0 = F^a = {q_0}` and `F^r = Q ∖ {q_0}`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{determinize, minimize, xdfa_isomorphic, Xnfa};
use crate::error::{Error, Result};
use crate::linalg::{
    enumerate_gl, gl_order, random_gl_with, BitMatrix, BitVec, DEFAULT_GL_ENUMERATION_CAP,
};
use crate::poly::{
    companion_matrix, enumerate_primitive, has_factor_x_plus_1, is_primitive, Gf2Poly,
};
use crate::sv::check_sv;

/// Largest `n` for which [`xnfa_isomorphic`] tries every state permutation.
pub const MAX_PERMUTATION_STATES: usize = 6;

/// Parameters of the binary witness machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpec {
    pub n: usize,
    pub phi: Gf2Poly,
    pub c_a: Gf2Poly,
    pub c_b: Gf2Poly,
    /// Set for `n = 2`, where `φ = X` is used although it is not primitive
    /// and both transition matrices are singular.
    pub boundary: bool,
}

impl WitnessSpec {
    pub fn new(n: usize, phi: Option<Gf2Poly>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "witness needs n >= 2, got {n}"
            )));
        }
        let phi = match phi {
            Some(p) => p,
            None => default_phi(n)?,
        };
        if phi.degree() != Some(n - 1) {
            return Err(Error::InvalidArgument(format!(
                "phi = {phi} must have degree {}",
                n - 1
            )));
        }
        let boundary = n == 2 && phi == Gf2Poly::x();
        if !boundary && !is_primitive(&phi)? {
            return Err(Error::InvalidArgument(format!(
                "phi = {phi} is not primitive"
            )));
        }
        let c_a = Gf2Poly::from_exponents(&[1, 0]).mul(&phi);
        let c_b = Gf2Poly::monomial(n).add(&phi);
        if !has_factor_x_plus_1(&c_a) || !has_factor_x_plus_1(&c_b) {
            // only reachable with phi = X + 1 at n = 2
            return Err(Error::InvalidArgument(format!(
                "c_b = {c_b} does not have X+1 as a factor; phi = {phi} needs an odd number of terms"
            )));
        }
        Ok(WitnessSpec {
            n,
            phi,
            c_a,
            c_b,
            boundary,
        })
    }

    pub fn build(&self) -> Result<Xnfa> {
        let ma = companion_matrix(&self.c_a)?;
        let mb = companion_matrix(&self.c_b)?;
        let q0 = BitVec::unit(self.n, 0);
        Xnfa::build(
            vec!['a', 'b'],
            vec![ma, mb],
            q0.clone(),
            q0.clone(),
            q0.complement(),
            self.boundary,
        )
    }

    /// The state whose polynomial image is `φ`; a fixed point of `M_a`.
    pub fn d_phi(&self) -> BitVec {
        crate::poly::poly_to_state(&self.phi, self.n).expect("deg phi = n - 1")
    }
}

/// Lexicographically smallest primitive polynomial of degree `n − 1`, or `X`
/// for the `n = 2` boundary case.
///
/// For `n = 2` the only primitive polynomial of degree 1 is `X + 1`, whose
/// witness reaches three states and admits no SV-assignment. `φ = X` gives
/// the expected two odd-sized states, at the cost of singular matrices.
pub fn default_phi(n: usize) -> Result<Gf2Poly> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "witness needs n >= 2, got {n}"
        )));
    }
    if n == 2 {
        return Ok(Gf2Poly::x());
    }
    enumerate_primitive(n - 1)?.next().ok_or_else(|| {
        Error::InvalidArgument(format!("no primitive polynomial of degree {}", n - 1))
    })
}

/// The binary witness machine for `n` states.
pub fn build_witness(n: usize, phi: Option<Gf2Poly>) -> Result<Xnfa> {
    WitnessSpec::new(n, phi)?.build()
}

/// Number of reachable XDFA states of the default witness.
pub fn witness_xdfa_size(n: usize) -> Result<usize> {
    Ok(determinize(&build_witness(n, None)?)?.len())
}

/// The witness over `m` symbols: `a`, `b`, and `m − 2` further symbols that
/// each reuse `M_b`.
pub fn build_mary_witness(n: usize, m: usize) -> Result<Xnfa> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "alphabet size must be >= 2, got {m}"
        )));
    }
    if m > 26 {
        return Err(Error::InvalidArgument(format!(
            "alphabet size {m} exceeds 26 symbols"
        )));
    }
    let binary = build_witness(n, None)?;
    let mb = binary.matrices()[1].clone();
    let alphabet: Vec<char> = (0..m as u8).map(|i| (b'a' + i) as char).collect();
    let mut matrices = binary.matrices().to_vec();
    matrices.resize(m, mb);
    Xnfa::build(
        alphabet,
        matrices,
        binary.q0().clone(),
        binary.fa().clone(),
        binary.fr().clone(),
        binary.allow_singular(),
    )
}

/// Conjugates every transition matrix by `a`: `M' = a⁻¹ M a`,
/// `v(Q'_0) = v(Q_0)·a`, and `v(F')ᵀ = a⁻¹ v(F)ᵀ` for both final sets.
pub fn change_basis(n: &Xnfa, a: &BitMatrix) -> Result<Xnfa> {
    if a.n() != n.n() {
        return Err(Error::DimensionMismatch {
            expected: n.n(),
            actual: a.n(),
        });
    }
    let inv = a.inverse()?;
    let matrices = n
        .matrices()
        .iter()
        .map(|m| inv.mul(m)?.mul(a))
        .collect::<Result<Vec<_>>>()?;
    Xnfa::build(
        n.alphabet().to_vec(),
        matrices,
        n.q0().mul_matrix(a)?,
        inv.mul_column(n.fa())?,
        inv.mul_column(n.fr())?,
        n.allow_singular(),
    )
}

/// One machine of an equivalence family, with the matrix that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub basis: BitMatrix,
    pub machine: Xnfa,
}

/// `count` change-of-basis images of `n` under distinct non-identity
/// matrices. For `n` up to the GL enumeration cap the matrices are drawn
/// without replacement from the full group (shuffled by `seed`); above it
/// they are seeded random draws, rejecting repeats.
pub fn equivalent_family(n: &Xnfa, count: usize, seed: u64) -> Result<Vec<FamilyMember>> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "family size must be at least 1".into(),
        ));
    }
    let size = n.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<BitMatrix> = if size <= DEFAULT_GL_ENUMERATION_CAP {
        let mut all: Vec<BitMatrix> = enumerate_gl(size)?.filter(|m| !m.is_identity()).collect();
        if count > all.len() {
            return Err(Error::InvalidArgument(format!(
                "requested {count} machines but |GL({size}, Z_2)| - 1 = {}",
                gl_order(size)? - 1u8
            )));
        }
        all.shuffle(&mut rng);
        all.truncate(count);
        all
    } else {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let a = random_gl_with(size, &mut rng)?;
            if !a.is_identity() && seen.insert(a.clone()) {
                out.push(a);
            }
        }
        out
    };
    bases
        .into_iter()
        .map(|basis| {
            Ok(FamilyMember {
                machine: change_basis(n, &basis)?,
                basis,
            })
        })
        .collect()
}

/// Exact language equivalence of two SV machines: minimal XDFAs compared up
/// to relabelling, including the accept/reject classification.
pub fn check_equivalence(a: &Xnfa, b: &Xnfa) -> Result<bool> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_vec(),
            right: b.alphabet().to_vec(),
        });
    }
    let ma = minimize(&determinize(a)?)?;
    let mb = minimize(&determinize(b)?)?;
    xdfa_isomorphic(&ma, &mb)
}

/// Result of [`verify_transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformCheck {
    /// The two XDFAs are isomorphic with identical classification.
    pub same_structure: bool,
    /// Both machines pass (or both fail) the SV check.
    pub same_sv_status: bool,
    /// Minimal-XDFA equivalence; `None` when the original is not SV.
    pub equivalent: Option<bool>,
}

impl TransformCheck {
    pub fn passed(&self) -> bool {
        self.same_structure && self.same_sv_status && self.equivalent != Some(false)
    }
}

/// Checks that `transformed` behaves exactly like `original`.
pub fn verify_transform(original: &Xnfa, transformed: &Xnfa) -> Result<TransformCheck> {
    let same_structure = xdfa_isomorphic(&determinize(original)?, &determinize(transformed)?)?;
    let sv_original = check_sv(original)?.is_ok();
    let sv_transformed = check_sv(transformed)?.is_ok();
    let equivalent = if sv_original && sv_transformed {
        Some(check_equivalence(original, transformed)?)
    } else {
        None
    };
    Ok(TransformCheck {
        same_structure,
        same_sv_status: sv_original == sv_transformed,
        equivalent,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn permute_vec(v: &BitVec, perm: &[usize]) -> BitVec {
    let mut out = BitVec::zeros(v.len());
    for i in v.iter_ones() {
        out.set(perm[i], true);
    }
    out
}

/// Whether some relabelling of states maps `a` onto `b` (matrices, initial,
/// accept and reject sets). Brute force over all `n!` permutations.
pub fn xnfa_isomorphic(a: &Xnfa, b: &Xnfa) -> Result<bool> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().to_vec(),
            right: b.alphabet().to_vec(),
        });
    }
    if a.n() != b.n() {
        return Ok(false);
    }
    if a.n() > MAX_PERMUTATION_STATES {
        return Err(Error::CapExceeded {
            what: "states for permutation isomorphism",
            value: a.n(),
            cap: MAX_PERMUTATION_STATES,
        });
    }
    let n = a.n();
    Ok(permutations(n).iter().any(|perm| {
        permute_vec(a.q0(), perm) == *b.q0()
            && permute_vec(a.fa(), perm) == *b.fa()
            && permute_vec(a.fr(), perm) == *b.fr()
            && a.matrices()
                .iter()
                .zip(b.matrices())
                .all(|(ma, mb)| (0..n).all(|i| permute_vec(ma.row(i), perm) == *mb.row(perm[i])))
    }))
}

/// Number of members pairwise non-isomorphic under state relabelling
/// (and distinct from `original`'s class).
pub fn distinct_up_to_isomorphism(original: &Xnfa, family: &[FamilyMember]) -> Result<usize> {
    let mut reps: Vec<&Xnfa> = vec![original];
    for m in family {
        let mut fresh = true;
        for r in &reps {
            if xnfa_isomorphic(r, &m.machine)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(&m.machine);
        }
    }
    Ok(reps.len() - 1)
}

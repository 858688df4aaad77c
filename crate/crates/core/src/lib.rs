//! Self-verifying symmetric-difference automata (SV-XNFA) as weighted
//! automata over GF(2).
//!
//! An XNFA is determinized by the subset construction with symmetric
//! difference in place of union, which is just the row-vector product
//! `d ↦ d · M_σ` over GF(2). Acceptance is by parity: an XDFA state accepts
//! when it holds an odd number of accept states and an even number of reject
//! states, and rejects in the mirrored case.
//!
//! ```
//! use svxnfa::{build_witness, determinize, minimize, check_sv};
//!
//! let n = build_witness(4, None).unwrap();
//! let d = determinize(&n).unwrap();
//! assert_eq!(d.len(), 8);
//! assert_eq!(minimize(&d).unwrap().len(), 8);
//! assert!(check_sv(&n).unwrap().is_ok());
//! ```

pub mod automata;
pub mod construct;
pub mod document;
pub mod dot;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod poly;
pub mod sv;

pub use automata::{
    classify_word, determinize, determinize_with, minimize, path_parity_oracle, weight,
    word_matrix, xdfa_isomorphic, DeterminizeOptions, StateClass, Violation, WordClass, Xdfa, Xnfa,
};
pub use construct::{
    build_mary_witness, build_witness, change_basis, check_equivalence, equivalent_family,
    verify_transform, witness_xdfa_size, FamilyMember, WitnessSpec,
};
pub use document::AutomatonDocument;
pub use error::{Error, Result};
pub use linalg::{enumerate_gl, gl_order, random_gl, BitMatrix, BitVec};
pub use poly::{char_poly, companion_matrix, Gf2Poly};
pub use sv::{
    check_sv, odd_closure_assignment, solve_sv, split_assignment, SvAssignment, SvReport,
    SvSolutionSpace,
};

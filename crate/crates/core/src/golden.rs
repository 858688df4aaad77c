//! Reference machines with hand-checked behaviour, shared by the tests, the
//! CLI `reproduce` suites and the benches.
//!
//! All of them use companion matrices over four states with `Q_0 = {q_0}`.

use crate::automata::Xnfa;
use crate::linalg::{BitMatrix, BitVec};
use crate::poly::{companion_matrix, Gf2Poly};

fn comp(c: &str) -> BitMatrix {
    let c: Gf2Poly = c.parse().expect("literal polynomial");
    companion_matrix(&c).expect("monic literal polynomial")
}

fn set(ix: &[usize]) -> BitVec {
    BitVec::from_indices(4, ix).expect("indices below 4")
}

/// `c_a = X^4+X^2+X+1`, `c_b = X^4+X^3+X+1`. The machine comes without final
/// states; `F^a = {q_0}`, `F^r = {q_1,q_2,q_3}` is filled in so that it is
/// a complete SV-XNFA.
pub fn example1() -> Xnfa {
    Xnfa::new(
        vec!['a', 'b'],
        vec![comp("X^4+X^2+X+1"), comp("X^4+X^3+X+1")],
        set(&[0]),
        set(&[0]),
        set(&[1, 2, 3]),
    )
    .expect("valid machine")
}

/// Transitions of the determinized [`example1`] that follow `X·f mod c`,
/// as `(from, symbol, to)`.
pub fn example1_transitions() -> Vec<(Vec<usize>, char, Vec<usize>)> {
    vec![
        (vec![0], 'a', vec![1]),
        (vec![3], 'a', vec![0, 1, 2]),
        (vec![0, 2, 3], 'a', vec![0, 2, 3]),
        (vec![1], 'b', vec![2]),
        (vec![0, 1, 3], 'b', vec![0, 2, 3]),
        (vec![1, 2, 3], 'b', vec![0, 1, 2]),
    ]
}

/// The four-state witness with `φ = X^3+X+1`: `c_a = (X+1)φ`, `c_b = X^4+φ`,
/// `F^a = {q_0}`, `F^r = {q_1,q_2,q_3}`.
pub fn example3() -> Xnfa {
    Xnfa::new(
        vec!['a', 'b'],
        vec![comp("X^4+X^3+X^2+1"), comp("X^4+X^3+X+1")],
        set(&[0]),
        set(&[0]),
        set(&[1, 2, 3]),
    )
    .expect("valid machine")
}

/// Three-symbol machine used for the change-of-basis example.
pub fn example4() -> Xnfa {
    Xnfa::new(
        vec!['a', 'b', 'c'],
        vec![
            comp("X^4+X^3+X^2+1"),
            comp("X^4+X^3+X+1"),
            comp("X^4+X^2+X+1"),
        ],
        set(&[0]),
        set(&[0, 2]),
        set(&[1, 3]),
    )
    .expect("valid machine")
}

/// The basis change applied to [`example4`].
pub fn example4_basis() -> BitMatrix {
    BitMatrix::from_bits(&[[0, 1, 1, 1], [1, 0, 1, 0], [1, 1, 0, 0], [0, 1, 0, 1]])
        .expect("square literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sv::check_sv;

    #[test]
    fn all_sv_and_nonsingular() {
        for m in [example1(), example3(), example4()] {
            assert!(check_sv(&m).unwrap().is_ok());
            assert!(m.matrices().iter().all(BitMatrix::is_nonsingular));
        }
        assert!(example4_basis().is_nonsingular());
    }
}

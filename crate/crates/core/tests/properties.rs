use proptest::prelude::*;
use svxnfa::automata::StateClass;
use svxnfa::golden::{example1, example3, example4, example4_basis};
use svxnfa::sv::is_valid_assignment;
use svxnfa::{
    change_basis, classify_word, companion_matrix, determinize, minimize, odd_closure_assignment,
    solve_sv, split_assignment, weight, xdfa_isomorphic, AutomatonDocument, BitMatrix, BitVec,
    Error, Gf2Poly, Xnfa,
};

fn words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn matrix(n: usize, bits: u64) -> BitMatrix {
    let mask = (1u64 << n) - 1;
    BitMatrix::from_rows(
        (0..n)
            .map(|i| BitVec::from_u64(n, bits >> (i * n) & mask))
            .collect(),
    )
    .unwrap()
}

/// Any binary machine on up to `max_n` states, singular matrices included.
fn any_machine(max_n: usize) -> impl Strategy<Value = Xnfa> {
    (1..=max_n).prop_flat_map(|n| {
        let full = (1u64 << n) - 1;
        (any::<u64>(), any::<u64>(), 1..=full, 0..=full, 0..=full).prop_map(
            move |(ma, mb, q0, fa, fr)| {
                Xnfa::allowing_singular(
                    vec!['a', 'b'],
                    vec![matrix(n, ma), matrix(n, mb)],
                    BitVec::from_u64(n, q0),
                    BitVec::from_u64(n, fa),
                    BitVec::from_u64(n, fr),
                )
                .unwrap()
            },
        )
    })
}

/// `(X+1)·g` with `g` monic of degree `n-1` and `g(0) = 1`.
fn x1_divisible(n: usize, bits: u64) -> Gf2Poly {
    let g = if n == 2 {
        0b11
    } else {
        (1 << (n - 1)) | (bits & ((1 << (n - 1)) - 2)) | 1
    };
    Gf2Poly::from_exponents(&[1, 0]).mul(&Gf2Poly::from_u64(g))
}

/// Normal-form machines whose polynomials all have X+1 as a factor, with an
/// odd-sized initial set and the trivial assignment.
fn x1_machine() -> impl Strategy<Value = Xnfa> {
    (2..=8usize, 2..=3usize).prop_flat_map(|(n, m)| {
        (proptest::collection::vec(any::<u64>(), m), 0..(1u64 << n)).prop_map(move |(polys, q0)| {
            let mut q0 = BitVec::from_u64(n, q0);
            if q0.popcount().is_multiple_of(2) {
                q0.toggle(0);
            }
            let matrices = polys
                .iter()
                .map(|&p| companion_matrix(&x1_divisible(n, p)).unwrap())
                .collect();
            let alphabet = "abc".chars().take(m).collect();
            Xnfa::new(alphabet, matrices, q0, BitVec::ones(n), BitVec::zeros(n)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn x1_machines_reach_only_odd_states(m in x1_machine(), fa in any::<u64>()) {
        let d = determinize(&m).unwrap();
        prop_assert!(d.states().iter().all(|s| s.popcount() % 2 == 1));
        let fa = BitVec::from_u64(m.n(), fa);
        let split = odd_closure_assignment(&m, &fa).unwrap();
        prop_assert_eq!(&split.fr, &fa.complement());
        prop_assert!(is_valid_assignment(&m, &split.fa, &split.fr).unwrap());
    }

    #[test]
    fn basis_change_breaks_the_normal_form_hypothesis(m in x1_machine(), seed in any::<u64>()) {
        let a = svxnfa::random_gl(m.n(), seed).unwrap();
        let t = change_basis(&m, &a).unwrap();
        let normal = t.matrices().iter().all(|x| svxnfa::poly::companion_polynomial(x).is_some());
        let r = odd_closure_assignment(&t, &BitVec::zeros(m.n()));
        prop_assert_eq!(r.is_ok(), normal && t.q0().popcount() % 2 == 1);
        if !normal {
            prop_assert!(matches!(r, Err(Error::Hypothesis(_))));
        }
    }

    #[test]
    fn solution_space_is_complete(m in any_machine(3)) {
        let n = m.n();
        let space = solve_sv(&m).unwrap();
        for fa in 0..(1u64 << n) {
            for fr in 0..(1u64 << n) {
                let (fa, fr) = (BitVec::from_u64(n, fa), BitVec::from_u64(n, fr));
                let valid = is_valid_assignment(&m, &fa, &fr).unwrap();
                prop_assert_eq!(valid, space.contains(&fa.xor(&fr).unwrap()), "fa={} fr={}", fa, fr);
            }
        }
    }

    #[test]
    fn every_split_of_every_solution_is_valid(m in any_machine(5)) {
        let n = m.n();
        let space = solve_sv(&m).unwrap();
        let sols = space.enumerate(usize::MAX);
        prop_assert_eq!(sols.len(), if space.satisfiable { 1 << space.dimension() } else { 0 });
        for u in &sols {
            for mask in 0..(1u64 << n) {
                let s = split_assignment(u, &BitVec::from_u64(n, mask)).unwrap();
                prop_assert!(is_valid_assignment(&m, &s.fa, &s.fr).unwrap());
                prop_assert_eq!(s.trivial, s.fa.is_zero() || s.fr.is_zero());
            }
        }
    }

    #[test]
    fn word_class_follows_the_two_parities(m in any_machine(5)) {
        let d = determinize(&m).unwrap();
        for w in words(&['a', 'b'], 5) {
            let fa = weight(&m, &w, m.fa()).unwrap();
            let fr = weight(&m, &w, m.fr()).unwrap();
            let want = StateClass::from_parities(fa, fr).into();
            prop_assert_eq!(classify_word(&m, &w).unwrap(), want);
            prop_assert_eq!(d.classify_word(&w).unwrap(), want);
        }
    }

    #[test]
    fn minimize_is_idempotent_and_language_preserving(m in x1_machine(), fa in any::<u64>()) {
        let fa = BitVec::from_u64(m.n(), fa);
        let m = m.with_assignment(fa.clone(), fa.complement()).unwrap();
        let d = determinize(&m).unwrap();
        let once = minimize(&d).unwrap();
        let twice = minimize(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.len() <= d.len());
        for w in words(m.alphabet(), 4) {
            prop_assert_eq!(once.classify_word(&w).unwrap(), d.classify_word(&w).unwrap());
        }
    }
}

#[test]
fn golden_documents_round_trip() {
    let transformed = change_basis(&example4(), &example4_basis()).unwrap();
    for m in [example1(), example3(), example4(), transformed] {
        let text = AutomatonDocument::from_xnfa(&m).to_json();
        let doc = AutomatonDocument::from_json(&text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert_eq!(doc.to_xnfa().unwrap(), m);

        let d = determinize(&m).unwrap();
        let text = AutomatonDocument::from_xdfa(&d, Some(&m)).to_json();
        let doc = AutomatonDocument::from_json(&text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert_eq!(doc.to_xdfa().unwrap(), d);
    }
}

#[test]
fn golden_xdfa_shapes() {
    let d1 = determinize(&example1()).unwrap();
    let d3 = determinize(&example3()).unwrap();
    let d4 = determinize(&example4()).unwrap();
    assert_eq!((d1.len(), d3.len(), d4.len()), (8, 8, 8));
    // same state sets, different transitions and classification
    assert!(!xdfa_isomorphic(&d1, &d3).unwrap());
    // the a-cycle of example 3 has length 7 and never visits {q0,q1,q3}
    let a_only = determinize(&example3().restrict(&['a']).unwrap()).unwrap();
    assert_eq!(a_only.len(), 7);
    assert!(!a_only
        .states()
        .contains(&BitVec::from_indices(4, &[0, 1, 3]).unwrap()));
}

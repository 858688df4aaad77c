//! Acceptance gate. Prints one line per criterion and exits non-zero when
//! any criterion fails. All comparisons are exact; time limits are wall
//! clock on the current build profile.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svxnfa::automata::WordClass;
use svxnfa::construct::check_equivalence;
use svxnfa::golden::{example1, example1_transitions, example3, example4, example4_basis};
use svxnfa::poly::{poly_to_state, state_to_poly};
use svxnfa::{
    build_witness, change_basis, check_sv, classify_word, companion_matrix, determinize,
    enumerate_gl, equivalent_family, gl_order, minimize, path_parity_oracle, random_gl,
    verify_transform, weight, xdfa_isomorphic, BitMatrix, BitVec, Gf2Poly, WitnessSpec, Xnfa,
};

type Outcome = Result<String, String>;

/// Id, description, check, optional time limit in seconds.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<u64>);

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

fn set(n: usize, ix: &[usize]) -> BitVec {
    BitVec::from_indices(n, ix).unwrap()
}

/// Monic of the given degree with constant term 1, other coefficients random.
fn random_monic_unit(deg: usize, rng: &mut ChaCha8Rng) -> Gf2Poly {
    let middle: u64 = if deg > 1 {
        rng.gen::<u64>() & ((1 << deg) - 2)
    } else {
        0
    };
    Gf2Poly::from_u64((1 << deg) | middle | 1)
}

/// `(X+1)·g` with `g` monic of degree `n-1` and `g(0) = 1`.
fn random_x1_divisible(n: usize, rng: &mut ChaCha8Rng) -> Gf2Poly {
    Gf2Poly::from_exponents(&[1, 0]).mul(&random_monic_unit(n - 1, rng))
}

fn criterion_1() -> Outcome {
    let d = determinize(&example1()).map_err(|e| e.to_string())?;
    let mut hits = 0;
    for (from, c, to) in example1_transitions() {
        let (from, to) = (set(4, &from), set(4, &to));
        let i = d
            .states()
            .iter()
            .position(|s| *s == from)
            .ok_or(format!("{from} unreachable"))?;
        let got = &d.states()[d.next(i, c).unwrap()];
        if *got != to {
            return Err(format!("delta({from},{c}) = {got}, expected {to}"));
        }
        hits += 1;
    }
    Ok(format!("{hits}/6 transitions"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut states = 0usize;
    let x = Gf2Poly::x();
    for _ in 0..50 {
        let deg = rng.gen_range(1..=10);
        let c = random_monic_unit(deg, &mut rng);
        let m = companion_matrix(&c).unwrap();
        for bits in 1..(1u64 << deg) {
            let d = BitVec::from_u64(deg, bits);
            let by_matrix = d.mul_matrix(&m).unwrap();
            let by_poly = poly_to_state(&state_to_poly(&d).mul_mod(&x, &c).unwrap(), deg).unwrap();
            if by_matrix != by_poly {
                return Err(format!(
                    "c = {c}, d = {d}: matrix {by_matrix}, polynomial {by_poly}"
                ));
            }
            states += 1;
        }
    }
    Ok(format!("50 polynomials, {states} states"))
}

fn criterion_3() -> Outcome {
    for n in 2..=12 {
        let d = determinize(&build_witness(n, None).unwrap()).unwrap();
        let want = 1usize << (n - 1);
        if d.len() != want {
            return Err(format!("n={n}: {} reachable, expected {want}", d.len()));
        }
        if let Some(s) = d.states().iter().find(|s| s.popcount() % 2 == 0) {
            return Err(format!("n={n}: even-sized state {s}"));
        }
        let min = minimize(&d).unwrap().len();
        if min != want {
            return Err(format!(
                "n={n}: minimal XDFA has {min} states, expected {want}"
            ));
        }
    }
    Ok("n=2..12 reach and minimize to 2^(n-1)".into())
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=12 {
        let spec = WitnessSpec::new(n, None).unwrap();
        let unary = spec.build().unwrap().restrict(&['a']).unwrap();
        let d = determinize(&unary).unwrap();
        let dphi = spec.d_phi();
        let want = (1usize << (n - 1)) - 1;
        let mut problems = Vec::new();
        if d.len() != want {
            problems.push(format!("{} states, expected {want}", d.len()));
        }
        if d.states().contains(&dphi) {
            problems.push(format!("reaches d_phi = {dphi}"));
        }
        if dphi.mul_matrix(&unary.matrices()[0]).unwrap() != dphi {
            problems.push("d_phi is not fixed by M_a".into());
        }
        if !problems.is_empty() {
            failures.push(format!("n={n} (phi={}): {}", spec.phi, problems.join(", ")));
        }
    }
    if failures.is_empty() {
        Ok("n=2..12 cycle of 2^(n-1)-1 states, d_phi fixed and unreached".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_5() -> Outcome {
    let m = example3();
    for j in 0..=70 {
        let want = if [0, 4, 5].contains(&(j % 7)) {
            WordClass::Accepted
        } else {
            WordClass::Rejected
        };
        let got = classify_word(&m, &"a".repeat(j)).unwrap();
        if got != want {
            return Err(format!("a^{j}: {got:?}, expected {want:?}"));
        }
    }
    for k in 0..=20 {
        let got = classify_word(&m, &format!("bbbb{}", "a".repeat(k))).unwrap();
        if got != WordClass::Accepted {
            return Err(format!("b^4 a^{k}: {got:?}"));
        }
    }
    Ok("a^0..a^70 and b^4 a^0..b^4 a^20".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..50 {
        let n = rng.gen_range(2..=8);
        let (ca, cb) = (
            random_x1_divisible(n, &mut rng),
            random_x1_divisible(n, &mut rng),
        );
        let base = Xnfa::new(
            vec!['a', 'b'],
            vec![
                companion_matrix(&ca).unwrap(),
                companion_matrix(&cb).unwrap(),
            ],
            BitVec::unit(n, 0),
            BitVec::unit(n, 0),
            BitVec::unit(n, 0).complement(),
        )
        .unwrap();
        for _ in 0..20 {
            let fa = BitVec::from_u64(n, rng.gen::<u64>() & ((1 << n) - 1));
            let fr = fa.complement();
            let m = base.with_assignment(fa.clone(), fr.clone()).unwrap();
            if !check_sv(&m).unwrap().is_ok() {
                return Err(format!(
                    "trial {trial}: c_a={ca}, c_b={cb}, fa={fa}, fr={fr} is not SV"
                ));
            }
        }
    }
    Ok("50 machines x 20 partitions".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let all = words(&['a', 'b'], 6);
    for n in 2..=6 {
        let m = build_witness(n, None).unwrap();
        let expected: Vec<WordClass> = all.iter().map(|w| classify_word(&m, w).unwrap()).collect();
        for k in 0..100 {
            let a = random_gl(n, rng.gen()).unwrap();
            let t = change_basis(&m, &a).unwrap();
            for (w, want) in all.iter().zip(&expected) {
                let got = classify_word(&t, w).unwrap();
                if got != *want {
                    return Err(format!(
                        "n={n}, matrix {k}, word {w:?}: {got:?} vs {want:?}"
                    ));
                }
            }
            if !check_equivalence(&m, &t).unwrap() {
                return Err(format!(
                    "n={n}, matrix {k}: check_equivalence returned false"
                ));
            }
        }
    }
    Ok(format!("n=2..6 x 100 matrices x {} words", all.len()))
}

fn criterion_8() -> Outcome {
    let n = example4();
    let t = change_basis(&n, &example4_basis()).unwrap();
    let checks = [
        ("Q'_0", t.q0(), set(4, &[1, 2, 3])),
        ("F'^a", t.fa(), set(4, &[0, 2])),
        ("F'^r", t.fr(), set(4, &[2, 3])),
    ];
    for (name, got, want) in checks {
        if *got != want {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    let (dn, dt) = (determinize(&n).unwrap(), determinize(&t).unwrap());
    if !xdfa_isomorphic(&dn, &dt).unwrap() {
        return Err("XDFAs are not isomorphic".into());
    }
    for w in words(&['a', 'b', 'c'], 5) {
        if classify_word(&n, &w).unwrap() != classify_word(&t, &w).unwrap() {
            return Err(format!("classification differs on {w:?}"));
        }
    }
    Ok("initial and final sets, isomorphic XDFAs, equal classification".into())
}

fn criterion_9() -> Outcome {
    let expected = [1u32, 6, 168, 20160];
    for (n, &want) in (1..=4).zip(&expected) {
        let counted = enumerate_gl(n).unwrap().count();
        let formula = gl_order(n).unwrap();
        if counted != want as usize || formula != want.into() {
            return Err(format!(
                "n={n}: enumerated {counted}, formula {formula}, expected {want}"
            ));
        }
    }
    let w2 = build_witness(2, None).unwrap();
    let family = equivalent_family(&w2, 5, 9).unwrap();
    let verified = family
        .iter()
        .filter(|f| verify_transform(&w2, &f.machine).unwrap().passed())
        .count();
    if family.len() != 5 || verified != 5 {
        return Err(format!(
            "{} family members, {verified} verified",
            family.len()
        ));
    }
    Ok("1, 6, 168, 20160; 5/5 verified n=2 family members".into())
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> BitMatrix {
    let rows: Vec<BitVec> = (0..n)
        .map(|_| BitVec::from_u64(n, rng.gen::<u64>() & ((1 << n) - 1)))
        .collect();
    BitMatrix::from_rows(rows).unwrap()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut machines = vec![example1(), example3(), example4()];
    for _ in 0..20 {
        let n = rng.gen_range(1..=5);
        let mask = (1u64 << n) - 1;
        let q0 = BitVec::from_u64(n, (rng.gen::<u64>() & mask).max(1));
        let fa = BitVec::from_u64(n, rng.gen::<u64>() & mask);
        let fr = BitVec::from_u64(n, rng.gen::<u64>() & mask);
        let mats = vec![random_matrix(n, &mut rng), random_matrix(n, &mut rng)];
        machines.push(Xnfa::allowing_singular(vec!['a', 'b'], mats, q0, fa, fr).unwrap());
    }
    let mut compared = 0;
    for (i, m) in machines.iter().enumerate() {
        for w in words(m.alphabet(), 6) {
            for f in [m.fa(), m.fr()] {
                if path_parity_oracle(m, &w, f).unwrap() != weight(m, &w, f).unwrap() {
                    return Err(format!("machine {i}, word {w:?}, final set {f}"));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{} machines, {compared} weights", machines.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            1,
            "determinized transitions of example 1",
            criterion_1,
            Some(1),
        ),
        (
            2,
            "companion step equals multiply-by-X",
            criterion_2,
            Some(10),
        ),
        (
            3,
            "witness reaches and minimizes to 2^(n-1)",
            criterion_3,
            Some(30),
        ),
        (
            4,
            "unary cycle avoids the fixed point d_phi",
            criterion_4,
            None,
        ),
        (5, "example 3 language", criterion_5, None),
        (
            6,
            "X+1 divisible machines are SV for every complement split",
            criterion_6,
            None,
        ),
        (
            7,
            "change of basis preserves the language",
            criterion_7,
            Some(60),
        ),
        (8, "example 4 change of basis", criterion_8, None),
        (9, "GL counts and the n=2 family", criterion_9, None),
        (
            10,
            "path-count oracle equals matrix weight",
            criterion_10,
            None,
        ),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs(secs) => {
                Err(format!("took {:.2}s, limit {secs}s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {id:>2}  {status}  {name}: {detail} [{:.3}s]",
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Named reproduction suites. Each prints one TSV row per check.

use svxnfa::construct::check_equivalence;
use svxnfa::golden::{example1, example1_transitions, example3, example4, example4_basis};
use svxnfa::linalg::enumerate_gl;
use svxnfa::{
    build_witness, change_basis, classify_word, determinize, equivalent_family, gl_order, minimize,
    verify_transform, xdfa_isomorphic, BitVec, Result, StateClass, WordClass,
};

use crate::commands::{CliError, EXIT_USAGE, EXIT_VERIFY};

pub const SUITES: [&str; 5] = ["example1", "example3", "example4", "bounds", "basis"];

struct Row {
    check: String,
    expected: String,
    actual: String,
}

fn row(check: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Row {
    Row {
        check: check.into(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn set(n: usize, ix: &[usize]) -> BitVec {
    BitVec::from_indices(n, ix).expect("indices in range")
}

fn word_label(c: WordClass) -> &'static str {
    match c {
        WordClass::Accepted => "accept",
        WordClass::Rejected => "reject",
        WordClass::SvViolation(_) => "sv-violation",
    }
}

fn example1_suite() -> Result<Vec<Row>> {
    let d = determinize(&example1())?;
    let mut rows = Vec::new();
    for (from, c, to) in example1_transitions() {
        let from = set(4, &from);
        let actual = match d.states().iter().position(|s| *s == from) {
            Some(i) => d.states()[d.next(i, c)?].to_string(),
            None => "unreachable".into(),
        };
        rows.push(row(format!("delta({from},{c})"), set(4, &to), actual));
    }
    Ok(rows)
}

fn example3_suite() -> Result<Vec<Row>> {
    let m = example3();
    let d = determinize(&m)?;
    let mut rows = vec![
        row("reachable states", 8, d.len()),
        row(
            "SV",
            "ok",
            if d.first_invalid().is_none() {
                "ok"
            } else {
                "fail"
            },
        ),
        row("minimal states", 8, minimize(&d)?.len()),
    ];
    for j in 0..14 {
        let expected = if [0, 4, 5].contains(&(j % 7)) {
            "accept"
        } else {
            "reject"
        };
        rows.push(row(
            format!("a^{j}"),
            expected,
            word_label(classify_word(&m, &"a".repeat(j))?),
        ));
    }
    for k in 0..7 {
        let w = format!("bbbb{}", "a".repeat(k));
        rows.push(row(
            format!("b^4 a^{k}"),
            "accept",
            word_label(classify_word(&m, &w)?),
        ));
    }
    Ok(rows)
}

fn example4_suite() -> Result<Vec<Row>> {
    let n = example4();
    let t = change_basis(&n, &example4_basis())?;
    let (dn, dt) = (determinize(&n)?, determinize(&t)?);
    let probe = set(4, &[0, 1, 2]);
    let probe_class = match dt.states().iter().position(|s| *s == probe) {
        Some(i) => match dt.classes()[i] {
            StateClass::Accept => "accept",
            StateClass::Reject => "reject",
            StateClass::Invalid(_) => "invalid",
        },
        None => "unreachable",
    };
    Ok(vec![
        row("Q'_0", set(4, &[1, 2, 3]), t.q0()),
        row("F'^a", set(4, &[0, 2]), t.fa()),
        row("F'^r", set(4, &[2, 3]), t.fr()),
        row("XDFAs isomorphic", true, xdfa_isomorphic(&dn, &dt)?),
        row("class of {q0,q1,q2} in N'_D", "reject", probe_class),
        row("languages equal", true, check_equivalence(&n, &t)?),
    ])
}

fn bounds_suite() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for n in 2..=12 {
        let d = determinize(&build_witness(n, None)?)?;
        let expected = 1usize << (n - 1);
        rows.push(row(format!("n={n} reachable"), expected, d.len()));
        rows.push(row(format!("n={n} minimal"), expected, minimize(&d)?.len()));
        let odd = d.states().iter().all(|s| s.popcount() % 2 == 1);
        rows.push(row(format!("n={n} all odd-sized"), true, odd));
    }
    Ok(rows)
}

fn basis_suite() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for n in 1..=4 {
        rows.push(row(
            format!("|GL({n},Z_2)|"),
            gl_order(n)?,
            enumerate_gl(n)?.count(),
        ));
    }
    let w2 = build_witness(2, None)?;
    let family = equivalent_family(&w2, 5, 0)?;
    let mut verified = 0;
    for member in &family {
        if verify_transform(&w2, &member.machine)?.passed() {
            verified += 1;
        }
    }
    rows.push(row("n=2 family, verified members", 5, verified));
    let n = example4();
    let check = verify_transform(&n, &change_basis(&n, &example4_basis())?)?;
    rows.push(row("example4 transform verified", true, check.passed()));
    Ok(rows)
}

pub fn run(suite: &str) -> std::result::Result<u8, CliError> {
    let rows = match suite {
        "example1" => example1_suite(),
        "example3" => example3_suite(),
        "example4" => example4_suite(),
        "bounds" => bounds_suite(),
        "basis" => basis_suite(),
        other => {
            return Err(CliError::new(
                EXIT_USAGE,
                format!(
                    "unknown suite {other:?}; expected one of {}",
                    SUITES.join(", ")
                ),
            ))
        }
    }
    .map_err(|e| CliError::new(EXIT_VERIFY, format!("suite {suite} aborted: {e}")))?;

    println!("check\texpected\tactual\tstatus");
    let mut failed = 0;
    for r in &rows {
        let status = if r.expected == r.actual {
            "PASS"
        } else {
            "FAIL"
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{}\t{}\t{}\t{status}", r.check, r.expected, r.actual);
    }
    eprintln!("{suite}: {} checks, {failed} failed", rows.len());
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY })
}

use std::fmt::Display;
use std::fs;
use std::path::Path;

use svxnfa::automata::{DeterminizeOptions, ORACLE_MAX_STATES, ORACLE_MAX_WORD_LEN};
use svxnfa::construct::{build_mary_witness, distinct_up_to_isomorphism, MAX_PERMUTATION_STATES};
use svxnfa::dot::{xdfa_to_dot, xnfa_to_dot};
use svxnfa::linalg::enumerate_gl;
use svxnfa::{
    change_basis, classify_word, determinize_with, equivalent_family, gl_order, minimize,
    path_parity_oracle, random_gl, solve_sv, split_assignment, verify_transform, weight,
    AutomatonDocument, BitMatrix, BitVec, Error, Gf2Poly, WitnessSpec, WordClass, Xdfa, Xnfa,
};

use crate::{reproduce, Cli, Command, Global};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONSTRUCT: u8 = 3;
pub const EXIT_CAP: u8 = 4;
pub const EXIT_PARSE: u8 = 5;
pub const EXIT_SV: u8 = 6;
pub const EXIT_VERIFY: u8 = 7;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }

    /// Caps, parse failures and SV violations keep their own exit codes
    /// whatever the command; everything else gets `fallback`.
    fn core(e: Error, fallback: u8) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Parse(_) => EXIT_PARSE,
            Error::SvViolation { .. } => EXIT_SV,
            _ => fallback,
        };
        CliError::new(code, e)
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn dispatch(cli: &Cli) -> CliResult<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Witness {
            n,
            alphabet_size,
            phi,
        } => witness(g, *n, *alphabet_size, phi.as_deref()),
        Command::Determinize => determinize_cmd(g),
        Command::CheckSv => check_sv_cmd(g),
        Command::SolveSv { enumerate } => solve_sv_cmd(g, *enumerate),
        Command::ChangeBasis {
            matrix,
            random,
            family,
        } => change_basis_cmd(g, matrix.as_deref(), *random, *family),
        Command::Classify { word } => classify(g, word),
        Command::Minimize => minimize_cmd(g),
        Command::GlOrder { n, enumerate } => gl_order_cmd(*n, *enumerate),
        Command::OracleVerify { max_len } => oracle_verify(g, *max_len),
        Command::Reproduce { suite } => reproduce::run(suite),
    }
}

fn options(g: &Global) -> DeterminizeOptions {
    let mut opts = DeterminizeOptions::default();
    if let Some(cap) = g.max_states {
        opts.max_states = cap;
    }
    opts
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .map_err(|e| CliError::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

/// Sends a document to `--out` when given, otherwise to stdout. Returns
/// whether stdout is still free for a report.
fn emit_document(g: &Global, json: &str) -> CliResult<bool> {
    match &g.out {
        Some(path) => {
            write_file(path, json)?;
            Ok(true)
        }
        None => {
            print!("{json}");
            Ok(false)
        }
    }
}

/// A report line goes to stdout unless a document already occupies it.
fn report(to_stdout: bool, line: impl Display) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn load_document(g: &Global) -> CliResult<AutomatonDocument> {
    let path = g
        .input
        .as_ref()
        .ok_or_else(|| CliError::new(EXIT_USAGE, "this command needs --in <PATH>"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    AutomatonDocument::from_json(&text).map_err(|e| CliError::new(EXIT_PARSE, e))
}

fn load_xnfa(g: &Global) -> CliResult<Xnfa> {
    // a document that does not describe a valid machine is a parse failure
    load_document(g)?
        .to_xnfa()
        .map_err(|e| CliError::new(EXIT_PARSE, e))
}

/// The XDFA of the input: determinized from the machine when the document
/// carries one, otherwise read as stored.
fn load_xdfa(g: &Global) -> CliResult<(Xdfa, Option<Xnfa>)> {
    let doc = load_document(g)?;
    if doc.matrices.is_some() {
        let m = doc.to_xnfa().map_err(|e| CliError::new(EXIT_PARSE, e))?;
        let d = determinize_with(&m, options(g)).map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;
        Ok((d, Some(m)))
    } else {
        Ok((
            doc.to_xdfa().map_err(|e| CliError::new(EXIT_PARSE, e))?,
            None,
        ))
    }
}

fn witness(g: &Global, n: usize, m: usize, phi: Option<&str>) -> CliResult<u8> {
    if n < 2 {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("--n must be at least 2, got {n}"),
        ));
    }
    if m < 2 {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("--alphabet-size must be at least 2, got {m}"),
        ));
    }
    if m != 2 && phi.is_some() {
        return Err(CliError::new(
            EXIT_USAGE,
            "--phi only applies to the binary witness",
        ));
    }
    let phi = phi
        .map(str::parse::<Gf2Poly>)
        .transpose()
        .map_err(|e| CliError::new(EXIT_USAGE, e))?;
    let spec = WitnessSpec::new(n, phi).map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;
    let machine = if m == 2 {
        spec.build()
    } else {
        build_mary_witness(n, m)
    }
    .map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;
    let d =
        determinize_with(&machine, options(g)).map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;

    let mut doc = AutomatonDocument::from_xnfa(&machine);
    let boundary_note =
        "n = 2 boundary: phi = X is not primitive and both transition matrices are singular; \
                         the primitive choice X+1 reaches 3 states and admits no SV-assignment";
    if spec.boundary {
        doc = doc.with_note(boundary_note);
    }
    let free = if g.dot {
        print!("{}", xnfa_to_dot(&machine));
        if let Some(path) = &g.out {
            write_file(path, &doc.to_json())?;
        }
        false
    } else {
        emit_document(g, &doc.to_json())?
    };
    report(free, format!("witness\tn={n}\tm={m}\tphi={}", spec.phi));
    report(
        free,
        format!(
            "reachable\t{}\texpected\t{}",
            d.len(),
            1u128 << (n - 1).min(127)
        ),
    );
    report(
        free,
        match d.first_invalid() {
            None => "SV: ok".to_string(),
            Some((i, v)) => format!("SV: fail at d{i} = {}: {v}", d.states()[i]),
        },
    );
    if spec.boundary {
        eprintln!("note: {boundary_note}");
    }
    Ok(0)
}

fn determinize_cmd(g: &Global) -> CliResult<u8> {
    let m = load_xnfa(g)?;
    let d = determinize_with(&m, options(g)).map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;
    let json = AutomatonDocument::from_xdfa(&d, Some(&m)).to_json();
    if g.dot {
        print!("{}", xdfa_to_dot(&d));
        if let Some(path) = &g.out {
            write_file(path, &json)?;
        }
    } else {
        emit_document(g, &json)?;
    }
    eprintln!("{} reachable states", d.len());
    Ok(0)
}

fn check_sv_cmd(g: &Global) -> CliResult<u8> {
    let (d, _) = load_xdfa(g)?;
    match d.first_invalid() {
        None => {
            println!("SV: ok");
            eprintln!("{} reachable states checked", d.len());
            Ok(0)
        }
        Some((i, v)) => {
            println!("SV: fail at d{i} = {}: {v}", d.states()[i]);
            Ok(EXIT_SV)
        }
    }
}

fn solve_sv_cmd(g: &Global, limit: usize) -> CliResult<u8> {
    let m = load_xnfa(g)?;
    let space = solve_sv(&m).map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;
    println!("satisfiable\t{}", space.satisfiable);
    if !space.satisfiable {
        return Ok(EXIT_SV);
    }
    let n = m.n();
    println!("particular\t{}", space.particular);
    println!("dimension\t{}", space.dimension());
    for b in &space.homogeneous_basis {
        println!("basis\t{b}");
    }
    println!("complement_split\t{}", space.contains(&BitVec::ones(n)));

    // (fa, fr) pairs: for each solution u, every mask as fa in counter order
    let masks = if n < 64 { 1u64 << n } else { u64::MAX };
    let mut printed = 0;
    'outer: for u in space.enumerate(limit) {
        for mask in 0..masks {
            if printed == limit {
                break 'outer;
            }
            let split = split_assignment(&u, &BitVec::from_u64(n, mask))
                .map_err(|e| CliError::new(EXIT_CONSTRUCT, e))?;
            let label = if split.trivial {
                "trivial"
            } else {
                "non-trivial"
            };
            println!("split\tfa={}\tfr={}\t{label}", split.fa, split.fr);
            printed += 1;
        }
    }
    Ok(0)
}

fn read_matrix(path: &Path) -> CliResult<BitMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<u8>> = serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    BitMatrix::from_bits(&rows).map_err(|e| CliError::new(EXIT_PARSE, e))
}

fn basis_note(a: &BitMatrix) -> String {
    let rows: Vec<String> = a.rows().iter().map(BitVec::to_bit_string).collect();
    format!("basis rows: {}", rows.join(" "))
}

fn verify(original: &Xnfa, transformed: &Xnfa, label: &str) -> CliResult<()> {
    let check =
        verify_transform(original, transformed).map_err(|e| CliError::core(e, EXIT_VERIFY))?;
    if check.passed() {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_VERIFY,
            format!("{label} failed verification: {check:?}"),
        ))
    }
}

fn change_basis_cmd(
    g: &Global,
    matrix: Option<&Path>,
    random: Option<u64>,
    family: Option<usize>,
) -> CliResult<u8> {
    let m = load_xnfa(g)?;
    let single = match (matrix, random, family) {
        (Some(path), None, None) => Some(read_matrix(path)?),
        (None, Some(seed), None) => {
            Some(random_gl(m.n(), seed).map_err(|e| CliError::new(EXIT_USAGE, e))?)
        }
        (None, None, Some(_)) => None,
        _ => {
            return Err(CliError::new(
                EXIT_USAGE,
                "give exactly one of --matrix, --random, --family",
            ))
        }
    };

    if let Some(a) = single {
        let t = change_basis(&m, &a).map_err(|e| match e {
            Error::SingularMatrix { .. } | Error::DimensionMismatch { .. } => {
                CliError::new(EXIT_USAGE, e)
            }
            e => CliError::core(e, EXIT_CONSTRUCT),
        })?;
        verify(&m, &t, "transformed machine")?;
        if g.dot {
            print!("{}", xnfa_to_dot(&t));
        } else {
            emit_document(g, &AutomatonDocument::from_xnfa(&t).to_json())?;
        }
        eprintln!("verified: same XDFA structure, SV status and language");
        return Ok(0);
    }

    let count = family.expect("checked above");
    let members =
        equivalent_family(&m, count, g.seed).map_err(|e| CliError::core(e, EXIT_USAGE))?;
    let mut docs = Vec::with_capacity(members.len());
    for (i, member) in members.iter().enumerate() {
        verify(&m, &member.machine, &format!("family member {i}"))?;
        docs.push(
            AutomatonDocument::from_xnfa(&member.machine).with_note(basis_note(&member.basis)),
        );
    }
    match &g.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| {
                CliError::new(EXIT_USAGE, format!("cannot create {}: {e}", dir.display()))
            })?;
            for (i, doc) in docs.iter().enumerate() {
                write_file(&dir.join(format!("basis-{i:03}.json")), &doc.to_json())?;
            }
            println!("wrote {} documents to {}", docs.len(), dir.display());
        }
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&docs).expect("documents always serialize")
            );
        }
    }
    eprintln!("{} verified machines", docs.len());
    if m.n() <= MAX_PERMUTATION_STATES {
        let distinct = distinct_up_to_isomorphism(&m, &members)
            .map_err(|e| CliError::new(EXIT_CONSTRUCT, e))?;
        eprintln!("{distinct} distinct from the input and each other up to state relabelling");
    }
    Ok(0)
}

fn classify(g: &Global, word: &str) -> CliResult<u8> {
    let doc = load_document(g)?;
    let class = if doc.matrices.is_some() {
        let m = doc.to_xnfa().map_err(|e| CliError::new(EXIT_PARSE, e))?;
        classify_word(&m, word)
    } else {
        doc.to_xdfa()
            .map_err(|e| CliError::new(EXIT_PARSE, e))?
            .classify_word(word)
    }
    .map_err(|e| CliError::core(e, EXIT_USAGE))?;
    Ok(match class {
        WordClass::Accepted => {
            println!("accept");
            0
        }
        WordClass::Rejected => {
            println!("reject");
            1
        }
        WordClass::SvViolation(v) => {
            println!("sv-violation: {v}");
            EXIT_SV
        }
    })
}

fn minimize_cmd(g: &Global) -> CliResult<u8> {
    let (d, _) = load_xdfa(g)?;
    let min = minimize(&d).map_err(|e| CliError::core(e, EXIT_CONSTRUCT))?;
    if g.dot {
        print!("{}", xdfa_to_dot(&min));
    } else {
        emit_document(g, &AutomatonDocument::from_xdfa(&min, None).to_json())?;
    }
    eprintln!("{} -> {} states", d.len(), min.len());
    Ok(0)
}

fn gl_order_cmd(n: usize, enumerate: bool) -> CliResult<u8> {
    let order = gl_order(n).map_err(|e| CliError::new(EXIT_USAGE, e))?;
    if !enumerate {
        println!("{order}");
        return Ok(0);
    }
    let counted = enumerate_gl(n)
        .map_err(|e| CliError::core(e, EXIT_USAGE))?
        .count();
    println!("formula\t{order}");
    println!("enumerated\t{counted}");
    Ok(if order == counted.into() {
        0
    } else {
        EXIT_VERIFY
    })
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn words(alphabet: &[char], max_len: usize) -> Vec<String> {
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

fn oracle_verify(g: &Global, max_len: usize) -> CliResult<u8> {
    let m = load_xnfa(g)?;
    if m.n() > ORACLE_MAX_STATES {
        return Err(CliError::new(
            EXIT_CAP,
            format!(
                "path counting is limited to {ORACLE_MAX_STATES} states, machine has {}",
                m.n()
            ),
        ));
    }
    if max_len > ORACLE_MAX_WORD_LEN {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("--max-len is limited to {ORACLE_MAX_WORD_LEN}, got {max_len}"),
        ));
    }
    let all = words(m.alphabet(), max_len);
    let mut mismatches = Vec::new();
    for w in &all {
        for (label, f) in [("fa", m.fa()), ("fr", m.fr())] {
            let paths = path_parity_oracle(&m, w, f).map_err(|e| CliError::core(e, EXIT_USAGE))?;
            let product = weight(&m, w, f).map_err(|e| CliError::core(e, EXIT_USAGE))?;
            if paths != product {
                mismatches.push(format!(
                    "{w:?}\t{label}\tpaths={}\tweight={}",
                    paths as u8, product as u8
                ));
            }
        }
    }
    println!("words\t{}", all.len());
    println!("mismatches\t{}", mismatches.len());
    for line in &mismatches {
        println!("mismatch\t{line}");
    }
    Ok(if mismatches.is_empty() {
        0
    } else {
        EXIT_VERIFY
    })
}

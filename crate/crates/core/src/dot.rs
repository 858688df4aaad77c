//! Graphviz output. Accept states get a double border, reject states a bold
//! border, states that are both get a bold double border.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::automata::{StateClass, Violation, Xdfa, Xnfa};

fn style(accept: bool, reject: bool) -> &'static str {
    match (accept, reject) {
        (true, false) => ", peripheries=2",
        (false, true) => ", penwidth=3",
        (true, true) => ", peripheries=2, penwidth=3",
        (false, false) => "",
    }
}

fn edges(out: &mut String, from: &str, targets: impl Iterator<Item = (char, String)>) {
    // group symbols per target so parallel edges share one arrow
    let mut grouped: BTreeMap<String, Vec<char>> = BTreeMap::new();
    for (c, to) in targets {
        grouped.entry(to).or_default().push(c);
    }
    let mut grouped: Vec<_> = grouped.into_iter().collect();
    grouped.sort_by_key(|(to, _)| to[1..].parse::<usize>().unwrap_or(usize::MAX));
    for (to, syms) in grouped {
        let label: Vec<String> = syms.iter().map(char::to_string).collect();
        let _ = writeln!(out, "  {from} -> {to} [label=\"{}\"];", label.join(","));
    }
}

/// Nodes `d0..dk` in state order, labelled with their subsets.
pub fn xdfa_to_dot(d: &Xdfa) -> String {
    let mut out = String::from("digraph xdfa {\n  rankdir=LR;\n  node [shape=circle];\n  start [shape=point];\n  start -> d0;\n");
    for (i, (s, class)) in d.states().iter().zip(d.classes()).enumerate() {
        let attrs = match class {
            StateClass::Accept => style(true, false),
            StateClass::Reject => style(false, true),
            StateClass::Invalid(Violation::BothOdd) => style(true, true),
            StateClass::Invalid(Violation::NeitherOdd) => ", style=dashed",
        };
        let _ = writeln!(out, "  d{i} [label=\"{s}\"{attrs}];");
    }
    for (i, row) in d.transitions().iter().enumerate() {
        edges(
            &mut out,
            &format!("d{i}"),
            d.alphabet()
                .iter()
                .zip(row)
                .map(|(&c, &t)| (c, format!("d{t}"))),
        );
    }
    out.push_str("}\n");
    out
}

/// Nodes `q0..q{n-1}`; every initial state gets its own start arrow.
pub fn xnfa_to_dot(m: &Xnfa) -> String {
    let mut out = String::from("digraph xnfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for i in 0..m.n() {
        let attrs = style(m.fa().get(i), m.fr().get(i));
        let _ = writeln!(out, "  q{i} [label=\"q{i}\"{attrs}];");
    }
    for i in m.q0().iter_ones() {
        let _ = writeln!(out, "  start{i} [shape=point];\n  start{i} -> q{i};");
    }
    for i in 0..m.n() {
        let targets = m
            .alphabet()
            .iter()
            .zip(m.matrices())
            .flat_map(|(&c, mat)| mat.row(i).iter_ones().map(move |t| (c, format!("q{t}"))))
            .collect::<Vec<_>>();
        edges(&mut out, &format!("q{i}"), targets.into_iter());
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::determinize;
    use crate::construct::{build_witness, change_basis};
    use crate::linalg::BitMatrix;

    #[test]
    fn xdfa_styles_and_stability() {
        let m = build_witness(4, None).unwrap();
        let d = determinize(&m).unwrap();
        let dot = xdfa_to_dot(&d);
        assert!(dot.contains("d0 [label=\"{q0}\", peripheries=2];"));
        assert!(dot.contains("d1 [label=\"{q1}\", penwidth=3];"));
        assert!(dot.contains("d0 -> d1 [label=\"a,b\"];"));
        assert_eq!(dot, xdfa_to_dot(&determinize(&m).unwrap()));
        assert_eq!(dot.matches(" [label=\"{").count(), 8);
    }

    #[test]
    fn xnfa_both_state_is_bold_double() {
        let m = build_witness(4, None).unwrap();
        let a = BitMatrix::from_bits(&[[0, 1, 1, 1], [1, 0, 1, 0], [1, 1, 0, 0], [0, 1, 0, 1]])
            .unwrap();
        let m = m
            .with_assignment(
                crate::linalg::BitVec::from_indices(4, &[0, 2]).unwrap(),
                crate::linalg::BitVec::from_indices(4, &[1, 3]).unwrap(),
            )
            .unwrap();
        let t = change_basis(&m, &a).unwrap();
        let dot = xnfa_to_dot(&t);
        assert!(dot.contains("q2 [label=\"q2\", peripheries=2, penwidth=3];"));
        assert!(dot.contains("start1 -> q1;"));
        assert!(!dot.contains("start0"));
    }
}

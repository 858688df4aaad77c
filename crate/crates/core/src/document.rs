//! JSON interchange format for XNFA and XDFA.
//!
//! Matrices are stored row-major as explicit 0/1 integers, one matrix per
//! alphabet symbol in alphabet order. Subsets are 0/1 arrays with `q_0` first.

use serde::{Deserialize, Serialize};

use crate::automata::{StateClass, Violation, Xdfa, Xnfa};
use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, BitVec};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Xnfa,
    Xdfa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Accept,
    Reject,
    InvalidBothOdd,
    InvalidNeitherOdd,
}

impl From<StateClass> for ClassLabel {
    fn from(c: StateClass) -> Self {
        match c {
            StateClass::Accept => ClassLabel::Accept,
            StateClass::Reject => ClassLabel::Reject,
            StateClass::Invalid(Violation::BothOdd) => ClassLabel::InvalidBothOdd,
            StateClass::Invalid(Violation::NeitherOdd) => ClassLabel::InvalidNeitherOdd,
        }
    }
}

impl From<ClassLabel> for StateClass {
    fn from(c: ClassLabel) -> Self {
        match c {
            ClassLabel::Accept => StateClass::Accept,
            ClassLabel::Reject => StateClass::Reject,
            ClassLabel::InvalidBothOdd => StateClass::Invalid(Violation::BothOdd),
            ClassLabel::InvalidNeitherOdd => StateClass::Invalid(Violation::NeitherOdd),
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Serialized form of an [`Xnfa`] or an [`Xdfa`].
///
/// An `xdfa` document may also carry the machine it was built from
/// (`matrices`, `q0`, `fa`, `fr`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDocument {
    pub schema_version: String,
    pub kind: DocumentKind,
    pub n: usize,
    pub alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<u8>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fa: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fr: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub allow_singular: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassLabel>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn alphabet_strings(alphabet: &[char]) -> Vec<String> {
    alphabet.iter().map(|c| c.to_string()).collect()
}

fn parse_alphabet(alphabet: &[String]) -> Result<Vec<char>> {
    alphabet
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::Parse(format!(
                    "symbol {s:?} is not a single character"
                ))),
            }
        })
        .collect()
}

fn vector(field: &str, bits: &Option<Vec<u8>>, n: usize) -> Result<BitVec> {
    let bits = bits
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("missing field `{field}`")))?;
    if bits.len() != n {
        return Err(Error::Parse(format!(
            "`{field}` has {} entries, expected {n}",
            bits.len()
        )));
    }
    BitVec::from_bits(bits).map_err(|e| Error::Parse(format!("`{field}`: {e}")))
}

impl AutomatonDocument {
    pub fn from_xnfa(m: &Xnfa) -> Self {
        AutomatonDocument {
            schema_version: SCHEMA_VERSION.into(),
            kind: DocumentKind::Xnfa,
            n: m.n(),
            alphabet: alphabet_strings(m.alphabet()),
            matrices: Some(m.matrices().iter().map(BitMatrix::to_bits).collect()),
            q0: Some(m.q0().to_bits()),
            fa: Some(m.fa().to_bits()),
            fr: Some(m.fr().to_bits()),
            allow_singular: m.allow_singular(),
            states: None,
            transitions: None,
            classes: None,
            notes: Vec::new(),
        }
    }

    /// An `xdfa` document, optionally recording the source machine.
    pub fn from_xdfa(d: &Xdfa, source: Option<&Xnfa>) -> Self {
        let mut doc = match source {
            Some(m) => AutomatonDocument::from_xnfa(m),
            None => AutomatonDocument {
                schema_version: SCHEMA_VERSION.into(),
                kind: DocumentKind::Xdfa,
                n: d.states()[0].len(),
                alphabet: alphabet_strings(d.alphabet()),
                matrices: None,
                q0: None,
                fa: None,
                fr: None,
                allow_singular: false,
                states: None,
                transitions: None,
                classes: None,
                notes: Vec::new(),
            },
        };
        doc.kind = DocumentKind::Xdfa;
        doc.states = Some(d.states().iter().map(BitVec::to_bits).collect());
        doc.transitions = Some(d.transitions().to_vec());
        doc.classes = Some(d.classes().iter().map(|&c| c.into()).collect());
        doc
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn check_version(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        Ok(())
    }

    /// The machine held by an `xnfa` document, or the source machine of an
    /// `xdfa` document that carries one.
    pub fn to_xnfa(&self) -> Result<Xnfa> {
        self.check_version()?;
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("`n` must be at least 1".into()));
        }
        let alphabet = parse_alphabet(&self.alphabet)?;
        let raw = self
            .matrices
            .as_ref()
            .ok_or_else(|| Error::Parse("missing field `matrices`".into()))?;
        let matrices = raw
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse(format!("matrix {k} is not {n}x{n}")));
                }
                BitMatrix::from_bits(rows).map_err(|e| Error::Parse(format!("matrix {k}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Xnfa::build(
            alphabet,
            matrices,
            vector("q0", &self.q0, n)?,
            vector("fa", &self.fa, n)?,
            vector("fr", &self.fr, n)?,
            self.allow_singular,
        )
    }

    pub fn to_xdfa(&self) -> Result<Xdfa> {
        self.check_version()?;
        if self.kind != DocumentKind::Xdfa {
            return Err(Error::Parse("document kind is not `xdfa`".into()));
        }
        let alphabet = parse_alphabet(&self.alphabet)?;
        let missing = |f: &str| Error::Parse(format!("missing field `{f}`"));
        let states = self
            .states
            .as_ref()
            .ok_or_else(|| missing("states"))?
            .iter()
            .map(|s| {
                if s.len() != self.n {
                    return Err(Error::Parse(format!(
                        "state has {} entries, expected {}",
                        s.len(),
                        self.n
                    )));
                }
                BitVec::from_bits(s)
            })
            .collect::<Result<Vec<_>>>()?;
        let trans = self
            .transitions
            .clone()
            .ok_or_else(|| missing("transitions"))?;
        let classes = self
            .classes
            .as_ref()
            .ok_or_else(|| missing("classes"))?
            .iter()
            .map(|&c| c.into())
            .collect();
        Xdfa::from_parts(alphabet, states, trans, classes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

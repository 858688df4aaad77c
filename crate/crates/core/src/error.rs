use thiserror::Error;

/// Errors produced by the automaton toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The listed rows XOR to the zero vector.
    #[error("singular matrix: rows {dependent_rows:?} are linearly dependent")]
    SingularMatrix { dependent_rows: Vec<usize> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<char>, right: Vec<char> },

    #[error("malformed automaton: {0}")]
    Malformed(String),

    #[error("state {state} ({subset}) violates the SV-condition: {violation}")]
    SvViolation {
        state: usize,
        subset: String,
        violation: crate::automata::Violation,
    },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("open term: {0}")]
    OpenTerm(String),

    #[error("substitution requires a closed term, got {0}")]
    OpenTermSubstitution(String),

    #[error("not a sentence (free variables {free:?}): {formula}")]
    NotASentence { formula: String, free: Vec<String> },

    #[error("empty sequence where at least one element is required")]
    EmptySequence,

    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("code has sort {found}, expected {expected}")]
    SortMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("malformed code: {0}")]
    MalformedCode(String),

    #[error("provability atom queried but no decision procedure is attached")]
    NoPrPropAttachment,

    #[error("quantifier is not syntactically bounded: {0}")]
    UnboundedQuantifier(String),

    #[error("delta0 evaluation does not support oracle atoms: {0}")]
    OracleAtomInDelta0(String),

    #[error("oracle has no verdict for sentence: {0}")]
    OracleUndefined(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

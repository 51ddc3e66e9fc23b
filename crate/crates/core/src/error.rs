use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {elem} out of range for an algebra of size {size}")]
    ElementOutOfRange { elem: u64, size: usize },
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("table for `{symbol}` has {found} entries, expected {expected}")]
    TableSize {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("algebra must have at least one element")]
    EmptyUniverse,
    #[error("generated subuniverse is empty (no constants and no generators)")]
    EmptyGenerated,
    #[error("assignment has {found} value(s) but the term uses {needed} variable(s)")]
    ShortAssignment { needed: usize, found: usize },
    #[error("relation is not a congruence: {0}")]
    NotCongruence(String),
    #[error("operation requires a nontrivial algebra")]
    TrivialAlgebra,
    #[error("{resource} cap exceeded (limit {limit}, explored {explored})")]
    CapExceeded {
        resource: String,
        limit: u64,
        explored: u64,
    },
    #[error("time budget exhausted after exploring {explored} {what}")]
    TimeBudget { what: String, explored: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn cap(resource: impl Into<String>, limit: u64, explored: u64) -> Self {
        Error::CapExceeded {
            resource: resource.into(),
            limit,
            explored,
        }
    }

    pub(crate) fn timeout(what: impl Into<String>, explored: u64) -> Self {
        Error::TimeBudget {
            what: what.into(),
            explored,
        }
    }

    /// A resource cap or the time budget stopped the computation.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::TimeBudget { .. })
    }

    /// How far a capped computation got.
    pub fn explored(&self) -> Option<u64> {
        match self {
            Error::CapExceeded { explored, .. } | Error::TimeBudget { explored, .. } => {
                Some(*explored)
            }
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

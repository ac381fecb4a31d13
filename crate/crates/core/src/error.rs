use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("coordinate {0} lies outside the unit square")]
    CoordinateOutOfRange(f64),

    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: String },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid role assignment: {0}")]
    InvalidRoles(String),

    #[error("cut enumeration over {relays} relays exceeds the limit of {limit}")]
    EnumerationLimit { relays: usize, limit: usize },

    #[error("exhaustive global min-cut handles at most {limit} nodes and the input \
             ({n} nodes) is not lattice-structured")]
    ExhaustiveLimit { n: usize, limit: usize },

    #[error("invalid bound query: {0}")]
    InvalidBoundQuery(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("malformed edge list (line {line}): {reason}")]
    MalformedEdgeList { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

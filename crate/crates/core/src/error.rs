use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coefficients, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("cycle has a negative coefficient at E{vertex}")]
    NegativeCoefficient { vertex: usize },

    #[error("cycle is not anti-nef: Z.E{vertex} = {value} > 0")]
    NotAntiNef { vertex: usize, value: String },

    #[error("cycle must be nonzero")]
    ZeroCycle,

    #[error("support is empty")]
    EmptySupport,

    #[error("support is not connected")]
    DisconnectedSupport,

    #[error("intersection form on the support is not negative definite")]
    NotNegativeDefinite,

    #[error("vertex E{vertex} is out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("chain depth exceeded {max_steps} steps along branch {branch}")]
    Truncated { max_steps: usize, branch: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

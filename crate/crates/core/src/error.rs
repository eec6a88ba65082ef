use thiserror::Error;

/// Errors raised by the quiver calculus.
///
/// Every variant is a domain or precondition failure; none of them indicate
/// an internal bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vector has {got} entries but the quiver has {expected} vertices")]
    VertexMismatch { expected: usize, got: usize },

    #[error("dimension vector is identically zero")]
    EmptySupport,

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("quiver is not connected")]
    Disconnected,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("vertex `{0}` is not large")]
    NotLarge(String),

    #[error("vertex `{0}` is neither a small source nor a small sink")]
    NotSmall(String),

    #[error(
        "weight incompatible with large vertex `{vertex}`: theta(u) = {theta} but alpha(u) = {alpha} \
         matches neither the incoming sum {in_sum} nor the outgoing sum {out_sum}; alpha cannot be \
         theta-semistable"
    )]
    WeightIncompatible {
        vertex: String,
        theta: i64,
        alpha: u64,
        in_sum: u64,
        out_sum: u64,
    },

    #[error("beta is not componentwise below alpha")]
    NotBelow,

    #[error("complexity guard: {0}")]
    ComplexityGuard(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QuiverError>;

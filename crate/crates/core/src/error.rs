use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational literal {0:?}")]
    ParseRat(String),

    #[error("rows have unequal lengths")]
    RaggedRows,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subspace is not invariant under the operator")]
    NotInvariant,

    #[error("inner subspace is not contained in the outer subspace")]
    NotContained,

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("subtraction {0} - {1} is undefined for extended naturals")]
    ExtNatSub(String, String),

    #[error("operator is not semi-B-Fredholm")]
    NotSemiBFredholm,

    #[error("operator is not semi-Fredholm")]
    NotSemiFredholm,

    #[error("degree of stable iteration must be positive")]
    ZeroDegree,

    #[error("invalid cascade seed: {0}")]
    InvalidSeed(String),

    #[error("internal consistency failure at iteration {iteration}: {detail}")]
    Internal { iteration: usize, detail: String },

    #[error("inconsistent invariants: {0}")]
    Inconsistent(String),

    #[error("invalid generator profile: {0}")]
    InvalidProfile(String),

    #[error("direct sum has no summands")]
    EmptySum,

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid operator at {path}: {message}")]
    Semantic { path: String, message: String },
}

impl Error {
    /// Whether the input was malformed, as opposed to well-formed but invalid.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::ParseRat(_))
    }
}

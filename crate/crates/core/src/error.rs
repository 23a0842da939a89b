use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unimodular (determinant {det})")]
    NonUnimodular { det: String },

    #[error("group closure exceeded the order bound {bound}")]
    OrderBoundExceeded { bound: usize },

    #[error("{what} exceeds the configured bound {bound} (got {got})")]
    BoundExceeded {
        what: &'static str,
        bound: usize,
        got: usize,
    },

    #[error("element has infinite order or order above {bound}")]
    InfiniteOrder { bound: usize },

    #[error("sublattice is not contained in the ambient lattice")]
    NotContained,

    #[error("not a subgroup of the given group")]
    NotSubgroup,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("subgroup family is not closed under {0}")]
    NotClosed(&'static str),

    #[error("orbit left the norm guard {guard}")]
    NormGuard { guard: i64 },

    #[error("integer overflow in exponent arithmetic")]
    Overflow,

    #[error("audit found conflicting rules: {0}")]
    AuditConflict(String),
}

impl Error {
    /// True for errors caused by a configured size limit rather than bad input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(
            self,
            Error::OrderBoundExceeded { .. }
                | Error::BoundExceeded { .. }
                | Error::InfiniteOrder { .. }
                | Error::NormGuard { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series and operand use different scalar modes ({left} vs {right})")]
    ModeMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("series is not invertible: leading coefficient a_1 vanishes")]
    NotInvertible,

    #[error("prime table too small: {0}")]
    TableTooSmall(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("monomial maps to integer {value} beyond table bound {bound}")]
    OverflowWindow { value: u64, bound: u64 },

    #[error("search budget exceeded: {required} evaluations requested, limit {limit}")]
    BudgetExceeded { required: u128, limit: u128 },

    #[error("orbit of {n} is unresolved within bound {bound}")]
    UnresolvedOrbit { n: u64, bound: u64 },

    #[error("group has no enumeration (order above cap {cap} or infinite generators)")]
    GroupTooLarge { cap: usize },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

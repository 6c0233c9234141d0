use thiserror::Error;

/// Errors raised by the exact IET toolkit.
///
/// Scalar values are carried in their canonical `p/q` text form so that the
/// error type does not depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IetError {
    #[error("{value} lies outside the domain {domain}")]
    OutOfDomain { value: String, domain: String },

    #[error("{value} has no preimage")]
    NoPreimage { value: String },

    #[error("empty interval [{lo},{hi})")]
    EmptyInterval { lo: String, hi: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid interval exchange: {0}")]
    InvalidIet(String),

    #[error("partition refinement exceeded the piece cap of {cap}")]
    RefinementOverflow { cap: usize },

    #[error("a return time exceeded the step cap of {cap}")]
    StepCapExceeded { cap: u64 },

    #[error("target interval is not invariant under the composed map")]
    NotInvariant,

    #[error("value not representable in the chosen scalar type: {0}")]
    Unrepresentable(String),

    #[error("lattice oracle needs {points} points, above the cap of {cap}")]
    OracleTooLarge { points: String, cap: u64 },

    #[error("successor undefined for {0}")]
    UndefinedSuccessor(String),

    #[error("depth {depth} exceeds the configured maximum {max}")]
    DepthExceeded { depth: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = IetError> = std::result::Result<T, E>;

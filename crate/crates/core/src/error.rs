use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mask {mask:#x} is out of range for a ground set of {n} elements")]
    OutOfRange { mask: u64, n: usize },

    #[error("{what} has n = {n}, exceeding the limit of {limit}")]
    Capacity { n: usize, limit: usize, what: &'static str },

    #[error("ground sets overlap or do not match: {0}")]
    GroundMismatch(String),

    #[error("density of the empty set is undefined")]
    EmptySet,

    #[error("element {0} has zero cost")]
    ZeroCost(usize),

    #[error("instance is not series-parallel decomposable")]
    NotDecomposable,

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("cyclic precedence relation through job {0}")]
    Cyclic(usize),

    #[error("operation requires float mode: {0}")]
    FloatOnly(String),
}

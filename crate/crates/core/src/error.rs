use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range, need 2 <= p < 2^62")]
    ModulusOutOfRange(u64),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(
        "matrix is singular or has no pivot-free LU factorization (zero pivot at step {step})"
    )]
    SingularOrNonLu { step: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("duplicate grid node in variable {var}: z[{var}][{first}] == z[{var}][{second}]")]
    DuplicateNode {
        var: usize,
        first: usize,
        second: usize,
    },
    #[error(
        "field too small: p = {p} but the grid needs d + 1 = {needed} distinct nodes per variable"
    )]
    FieldTooSmall { p: u64, needed: usize },
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

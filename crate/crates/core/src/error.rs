use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("division by an exact zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),
    #[error("vector is not in E_alpha: ‖A^k x‖/alpha^k still grows at depth {depth}")]
    NotInEalpha { depth: usize },
    #[error("point with |z| = {norm} lies outside the convergence disk of radius {radius}")]
    OutsideDisk { norm: String, radius: String },
    #[error("derivative order {order} exceeds the cap {cap}")]
    OrderExceedsCap { order: u32, cap: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument must be positive, got 0 ({0})")]
    Zero(&'static str),

    #[error("zero polynomial or form is not allowed here")]
    ZeroPolynomial,

    #[error("vanishing discriminant: {0}")]
    VanishingDiscriminant(String),

    #[error("singular matrix (determinant 0)")]
    SingularMatrix,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(String),

    #[error("{p} divides every coefficient of the polynomial")]
    DegenerateModP { p: u64 },

    #[error("{p} is not a fixed prime divisor of {poly}")]
    NotFixedPrimeDivisor { p: u64, poly: String },

    #[error("{poly} has fixed prime divisor(s) {primes:?}; remove them first with remove_all_fpd")]
    HasFixedPrimeDivisor { poly: String, primes: Vec<u64> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("integer too large for this operation: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("reduction depth exceeded cap {cap} at prime {p}")]
    DepthExceeded { p: u64, cap: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

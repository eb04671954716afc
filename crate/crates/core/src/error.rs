use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid characteristic {0}: need a prime p > 3 below 2^63")]
    InvalidPrime(u64),
    #[error("invalid extension modulus: {0}")]
    InvalidModulus(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("inhomogeneous polynomial: term `{term}` at byte {position} has degree {found}, expected {expected}")]
    Inhomogeneous {
        term: String,
        position: usize,
        found: u32,
        expected: u32,
    },
    #[error("expected a nonzero cubic form, got {0}")]
    NotCubic(String),
    #[error("coefficient denominator vanishes modulo {0}")]
    BadReduction(u64),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("subspace basis is degenerate (rank {rank} < {expected})")]
    DegenerateSubspace { rank: usize, expected: usize },
    #[error("point is singular on the hypersurface")]
    SingularPoint,
    #[error("retry budget exhausted while {0}")]
    RetryExhausted(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration guard exceeded: {points} affine points over F_{q}")]
    GuardExceeded { q: u64, points: u128 },
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

use thiserror::Error;

/// Errors raised by the arithmetic, dynamics and harness layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("parts sum to {sum}, expected {top}")]
    BadPartition { top: u64, sum: u64 },
    #[error("valuation of zero is +infinity")]
    ZeroValuation,
    #[error("operands live over different prime fields ({0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("series coefficients live in different rings")]
    RingMismatch,
    #[error("inner series has a nonzero constant term")]
    NonzeroConstant,
    #[error("constant term is not a unit")]
    NonUnitConstant,
    #[error("series is not invertible under composition: {0}")]
    NotInvertible(&'static str),
    #[error("degree k = {k} satisfies k = q in the field (q = {q}); term cannot be removed")]
    NotRemovable { k: usize, q: usize },
    #[error("precision {available} is insufficient, need at least {needed}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("pind_{0} is nonzero, so lower indices do not all vanish")]
    PrecedingIndexNonzero(usize),
    #[error("series equals z to the available precision")]
    InfiniteMultiplicity,
    #[error("characteristic 2: 1/2 does not exist")]
    EvenCharacteristic,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("d = {d} is not divisible by p = {p}")]
    NotDivisible { d: usize, p: u32 },
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("series has the wrong shape: {0}")]
    ShapeViolation(String),
    #[error("pind_1 vanishes; the periodic-point bound is trivial")]
    IndexVanishes,
    #[error("exact division failed: {0}")]
    DivisionFailure(String),
    #[error("parse error at {field}: {message}")]
    ParseError { field: String, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

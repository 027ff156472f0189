use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("extension field of order {0} exceeds the table cap of 4096")]
    TableCapExceeded(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements of F_{left} and F_{right} cannot be combined")]
    FieldMismatch { left: u32, right: u32 },
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("duplicate or unsorted index {0}")]
    DuplicateIndex(usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what}: size {size} exceeds cap {cap}")]
    SizeCap { what: &'static str, size: u64, cap: u64 },
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("non-uniform distributions require a prime field, got q = {0}")]
    NonPrimeField(u32),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("distribution is degenerate (max point mass {0})")]
    DegenerateDistribution(f64),
    #[error("matrix is not a symmetric 3x3 matrix with zero diagonal")]
    NotHollowSymmetric,
    #[error("conditioning event accepted only {accepted} of {drawn} samples (need at least {required})")]
    ConditioningTooRare { accepted: u64, drawn: u64, required: u64 },
    #[error("claim {0} is not defined in characteristic 2")]
    CharacteristicTwo(String),
    #[error("claim {claim} requires n >= {min}, got n = {n}")]
    BadN { claim: String, n: usize, min: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

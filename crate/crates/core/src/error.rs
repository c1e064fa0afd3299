use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("GF({p}^{k}) is not in the supported field table")]
    UnsupportedField { p: u32, k: u32 },
    #[error("value {value} is not an element of {field}")]
    ValueOutOfRange { value: u64, field: String },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator image {generator_image} does not define a homomorphism {source_field} -> {target_field}")]
    NotAHomomorphism { source_field: String, target_field: String, generator_image: u8 },
    #[error("{what}: {count} exceeds the limit {limit}")]
    TooLarge { what: String, count: u128, limit: u128 },
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("matrix is singular")]
    Singular,
    #[error("a line needs two distinct points")]
    EqualPoints,
    #[error("map is not injective")]
    NotInjective,
    #[error("vector lies in the image span of the embedding")]
    YInImage,
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

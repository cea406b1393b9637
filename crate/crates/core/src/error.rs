use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("modulus rejected: {0}")]
    BadModulus(String),
    #[error("field table of {entries} entries exceeds the cap of {cap}")]
    TableTooLarge { entries: u64, cap: u64 },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("zero vector does not define a projective point or hyperplane")]
    ZeroVector,
    #[error("element is not in the requested subfield")]
    NotInSubfield,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("points coincide")]
    EqualPoints,
    #[error("correspondence is not a bijection: {0}")]
    NotBijective(String),
    #[error("parameter mismatch between point sets")]
    ParamMismatch,
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 verification failure, 2 usage, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPrime(_)
            | Error::InvalidParams(_)
            | Error::BadModulus(_)
            | Error::NotBijective(_)
            | Error::ParamMismatch
            | Error::Parse(_) => 2,
            Error::TableTooLarge { .. } | Error::ResourceCap(_) => 3,
            _ => 1,
        }
    }
}

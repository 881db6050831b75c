use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("invalid ring context: {0}")]
    BadContext(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent {exp} at position {pos} exceeds the limit of 64")]
    ExponentOverflow { exp: u64, pos: usize },
    #[error("unit or non-local input: {0}")]
    NonLocal(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring context mismatch")]
    ContextMismatch,
    #[error("invalid matrix factorization: {0}")]
    InvalidMf(String),
    #[error("equation mismatch: {0}")]
    EquationMismatch(String),
    #[error("variable collision: `{0}` already in context")]
    VariableCollision(String),
    #[error("invalid subset: {0}")]
    BadSubset(String),
    #[error("cocycle condition fails: {0}")]
    CocycleFailure(String),
    #[error("insufficient sample points on factor {factor}")]
    InsufficientPoints { factor: usize },
    #[error("truncation too large: {coords} coordinates exceed the memory cap of {cap_mb} MB")]
    TruncationTooLarge { coords: usize, cap_mb: usize },
    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),
    #[error("invalid schedule: {0}")]
    BadSchedule(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("torsion detected: {0}")]
    Torsion(String),
    #[error("exactness failure at degree {degree}: {msg}")]
    Exactness { degree: usize, msg: String },
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid ring definition: {0}")]
    InvalidRing(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("elements or matrices belong to different rings")]
    RingMismatch,
    #[error("composite of consecutive maps is not zero")]
    NotAComplex,
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),
    #[error("operation requires the {0} backend")]
    WrongBackend(&'static str),
    #[error("{0} is a unit")]
    UnitInput(String),
    #[error("regularity conditions disagree: {0}")]
    EquivalenceViolation(String),
    #[error("unsupported quotient: {0}")]
    UnsupportedQuotient(String),
    #[error("{0} is not homogeneous")]
    NonHomogeneous(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("strategy `{0}` is inconclusive: invariants agree")]
    InconclusiveStrategy(String),
    #[error("enumeration budget exceeded: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is outside the space")]
    PointOutsideSpace(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("weights sum to {0}, expected 1")]
    Normalization(String),
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("{atoms} atoms but {weights} weights")]
    LengthMismatch { atoms: usize, weights: usize },
    #[error("a measure needs at least one atom")]
    EmptyMeasure,
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("mixing weight {0} is outside [0, 1]")]
    WeightOutOfRange(String),
    #[error("order p = {0} must be a finite real >= 1")]
    InvalidOrder(f64),
    #[error("exact mode needs an integer order, got p = {0}")]
    NonIntegerOrder(f64),
    #[error("instance {rows}x{cols} exceeds the {limit}-atom limit per side")]
    TooLarge { rows: usize, cols: usize, limit: usize },
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("ill-formed axiom instance: {0}")]
    IllFormedAxiom(String),
    #[error("denominator {0} is not a power of two")]
    NotDyadic(u64),
    #[error("zeta({0}) diverges")]
    ZetaDivergent(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

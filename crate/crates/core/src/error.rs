use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("{0} is a perfect square, so its square root is rational")]
    PerfectSquare(i64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("fixed-point precision exhausted at multiplier {multiplier}: decision lies within the error bound")]
    Precision { multiplier: u64 },
    #[error("fixed-point operands differ in precision ({0} vs {1} fractional bits)")]
    MixedPrecision(u32, u32),
    #[error("x = {x} exceeds the horizon {horizon}")]
    BeyondHorizon { x: u64, horizon: u64 },
    #[error("the set is empty")]
    EmptySet,
    #[error("minimum of B is {0}, expected 0")]
    NonzeroMinimum(u64),
    #[error("tail window contains {0} elements, need at least 2")]
    TooFewElements(usize),
    #[error("theta must exceed 1")]
    ThetaTooSmall,
    #[error("residue identity failed for j = {j}: got {got:?}")]
    ResidueIdentity { j: u64, got: Vec<u64> },
    #[error("malformed set file: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

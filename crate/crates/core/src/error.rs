use thiserror::Error;

/// Errors produced by construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("element {index} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("element {index} is not real orthogonal (imaginary part {imag:.3e}, deviation {deviation:.3e})")]
    NotRealOrthogonal {
        index: usize,
        imag: f64,
        deviation: f64,
    },

    #[error("weights must be non-negative and sum to 1 (sum = {sum})")]
    InvalidWeights { sum: f64 },

    #[error("empty element list")]
    Empty,

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("unsupported order t = {t} ({reason})")]
    UnsupportedOrder { t: usize, reason: &'static str },

    #[error("invalid Young diagram {0:?}")]
    InvalidDiagram(Vec<usize>),

    #[error("power map for k = {0} is not available")]
    MissingPowerMap(usize),

    #[error("multiplicity {value} is not an integer")]
    NonIntegerMultiplicity { value: f64 },

    #[error("group too large or not finite at this tolerance (more than {cap} elements)")]
    GroupTooLarge { cap: usize },

    #[error("no admissible root: {0}")]
    NoRoot(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

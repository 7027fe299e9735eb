use thiserror::Error;

/// Errors across the forest, Hopf, rough-path, controlled-path, integration
/// and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown letter '{letter}' at position {pos}")]
    UnknownLetter { letter: char, pos: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { msg: String, pos: usize },
    #[error("basis capacity exceeded: {size} forests, limit {limit}")]
    CapacityExceeded { size: usize, limit: usize },
    #[error("elements belong to different bases")]
    BasisMismatch,
    #[error("forest degree {degree} exceeds truncation level {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("reduced coproduct of the empty forest is undefined")]
    EmptyForest,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("driver produced a non-finite value at t = {t}")]
    NonFiniteDriver { t: f64 },
    #[error("tree degree {degree} out of range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },
    #[error("node index {index} out of range for grid with {nodes} nodes")]
    IndexOutOfRange { index: usize, nodes: usize },
    #[error("operands live on different grids or alphabets")]
    GridMismatch,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unsupported file version {got}, expected {expected}")]
    VersionMismatch { got: u64, expected: u64 },
    #[error("letter '{0}' is not in the alphabet")]
    LetterUnknown(char),
    #[error("sewing requires germ exponent > 1, got {0}")]
    ExponentNotAboveOne(f64),
    #[error("controlled paths are tied to different rough paths")]
    RoughPathMismatch,
    #[error("expected {expected} controlled paths (one per letter), got {got}")]
    WrongTupleSize { expected: usize, got: usize },
    #[error("grid too coarse: need at least {min} cells, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("no contraction: window shrank below one cell (last ratio {last_ratio})")]
    NoContraction { last_ratio: f64 },
    #[error("Picard iteration did not converge within {0} iterations")]
    MaxItersExceeded(usize),
    #[error("driver is not smooth enough for the classical oracle")]
    NonSmoothDriver,
    #[error("quadrature needs at least 2 subintervals, got {0}")]
    QuadTooCoarse(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by depth evaluation, metric construction and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sample must contain at least 2 points, got {n}")]
    InsufficientSample { n: usize },
    #[error("invalid distance {value}: distances must be finite and nonnegative")]
    InvalidDistance { value: f64 },
    #[error("subsampling budget must be at least 1")]
    InvalidBudget,
    #[error("adjustment function returned {weight} at excess {excess}; weights must lie in [0, 1]")]
    InvalidAdjustment { weight: f64, excess: f64 },
    #[error("query {index}: {source}")]
    Query {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("no queries supplied")]
    EmptyQueries,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("exponent must satisfy p >= 1, got {p}")]
    InvalidExponent { p: f64 },
    #[error("invalid curve: {reason}")]
    InvalidCurve { reason: String },
    #[error("incompatible curves: {reason}")]
    IncompatibleCurves { reason: String },
    #[error("grid is not uniform at index {index}: spacing {spacing} vs expected {expected}")]
    NonUniformGrid {
        index: usize,
        spacing: f64,
        expected: f64,
    },
    #[error("requested {requested} components but at most {max} are available")]
    TooManyComponents { requested: usize, max: usize },
    #[error("requested {requested} components but the numerical rank is only {rank}")]
    RankDeficient { requested: usize, rank: usize },
    #[error("invalid distribution function: {reason}")]
    InvalidCdf { reason: String },
    #[error("invalid histogram: {reason}")]
    InvalidHistogram { reason: String },

    #[error("distance matrix must be square, got {rows} rows and {cols} columns")]
    MatrixNotSquare { rows: usize, cols: usize },
    #[error("distance matrix asymmetric at ({i}, {j}): {a} vs {b}")]
    MatrixAsymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("invalid distance matrix entry {value} at ({i}, {j}): entries must be finite and nonnegative")]
    MatrixInvalidEntry { i: usize, j: usize, value: f64 },
    #[error("distance matrix has nonzero diagonal entry {value} at index {i}")]
    MatrixNonzeroDiagonal { i: usize, value: f64 },
    #[error("index {index} out of bounds for {n} reference points")]
    IndexOutOfBounds { index: usize, n: usize },
    #[error("unknown label {label:?}")]
    UnknownLabel { label: String },
    #[error("duplicate label {label:?}")]
    DuplicateLabel { label: String },

    #[error("k = {k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("invalid region: {reason}")]
    InvalidRegion { reason: String },
    #[error(
        "rejection sampling accepted {accepted} of {attempts} proposals; region mass is too small"
    )]
    InfeasibleRegion { attempts: u64, accepted: u64 },
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
    #[error("requested line does not intersect any grid node")]
    LineMissesGrid,
    #[error("grid does not contain the centre (0, 0)")]
    CenterNotOnGrid,

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: u64,
        reason: String,
    },
    #[error("invalid configuration: {reason}")]
    Config { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid inputs or configuration, as opposed
    /// to failures arising during computation or output. The CLI maps
    /// validation errors to exit code 2 and everything else to exit code 1.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidDistance { .. }
            | Error::InvalidAdjustment { .. }
            | Error::InfeasibleRegion { .. }
            | Error::Io(_) => false,
            Error::Query { source, .. } => source.is_validation(),
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

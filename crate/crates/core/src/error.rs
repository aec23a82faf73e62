use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("array of length {got} does not match grid with {expected} points")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("inadmissible Leslie coefficients: {}", .violations.join("; "))]
    InadmissibleCoefficients { violations: Vec<String> },

    #[error("negative propagation time {0}")]
    NegativeTime(f64),

    #[error("index pair (k={k}, j={j}) is outside the admissible set k+j>=0, j>=0")]
    InvalidLocalization { k: i32, j: i32 },

    #[error("angle chart violated at grid point {index:?}: {detail}")]
    ChartViolation { index: [usize; 3], detail: String },

    #[error("numerical divergence at step {step} (t = {time}): non-finite values in {field}")]
    Divergence {
        step: usize,
        time: f64,
        field: String,
    },

    #[error("unsupported vector-field word: {0}")]
    UnsupportedWord(String),

    #[error("initial data band [{kmin}, {kmax}] contains no resolved wave numbers")]
    EmptyBand { kmin: f64, kmax: f64 },

    #[error("decay fit rejected: {0}")]
    InvalidSeries(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("snapshot error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

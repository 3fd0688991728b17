use thiserror::Error;

use crate::geometry::Cell;
use crate::piece::PieceId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("placement of piece {piece} overlaps occupied cell {cell}")]
    Overlap { piece: PieceId, cell: Cell },

    #[error("piece {0} is already placed")]
    PieceReuse(PieceId),

    #[error("cannot remove a placement from the empty state")]
    EmptyState,

    #[error("search statistics contain no backtracks")]
    EmptyStats,

    #[error("landmark table has neither landmarks nor entries")]
    NoLandmarks,

    #[error("sampling gave up after {restarts} restarts (cap {cap})")]
    SamplingExhausted { restarts: u64, cap: u64 },

    #[error("node budget of {budget} exceeded")]
    ResourceLimit { budget: u64 },

    #[error("division by zero at depth {depth}: N_d + L_d = 0")]
    DivisionByZero { depth: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Overlap { .. } => "overlap",
            Error::PieceReuse(_) => "piece_reuse",
            Error::EmptyState => "empty_state",
            Error::EmptyStats => "empty_stats",
            Error::NoLandmarks => "no_landmarks",
            Error::SamplingExhausted { .. } => "sampling_exhausted",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::DivisionByZero { .. } => "division_by_zero",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    /// Process exit code for the command-line tool; 2 is shared with usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 2,
            Error::Parse { .. } => 3,
            Error::Io(_) => 4,
            Error::NoLandmarks => 5,
            Error::SamplingExhausted { .. } => 6,
            Error::ResourceLimit { .. } => 7,
            Error::InvalidModel(_) => 8,
            Error::Json(_) | Error::Csv(_) => 9,
            Error::Overlap { .. } | Error::PieceReuse(_) | Error::EmptyState => 10,
            Error::EmptyStats | Error::DivisionByZero { .. } => 11,
        }
    }
}

/// Returned by budgeted enumerations; carries whatever was computed before
/// the budget ran out.
#[derive(Debug, Error)]
#[error("node budget of {budget} exceeded")]
pub struct BudgetExceeded<T: std::fmt::Debug> {
    pub budget: u64,
    pub partial: T,
}

impl<T: std::fmt::Debug> From<BudgetExceeded<T>> for Error {
    fn from(e: BudgetExceeded<T>) -> Self {
        Error::ResourceLimit { budget: e.budget }
    }
}

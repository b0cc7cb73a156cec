use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("degenerate levels: {0}")]
    DegenerateLevels(&'static str),

    /// Trace drifted past tolerance; the step is too coarse for the fastest rate in the model.
    #[error("integration did not converge at t = {t} ns (trace error {trace_error:.3e}); try a smaller dt")]
    NonConvergence { t: f64, trace_error: f64 },

    #[error("numeric failure (NaN or infinity) at t = {t} ns")]
    NumericFailure { t: f64 },

    #[error("insufficient data: {found} samples in fit window, need at least {needed}")]
    InsufficientData { found: usize, needed: usize },

    /// The optimum of a bracketed search sits on the bracket edge.
    #[error("optimum at bracket edge ({edge} of [{lo}, {hi}])")]
    Boundary { lo: f64, hi: f64, edge: f64, scan: Vec<(f64, f64)> },
}

impl Error {
    /// Short machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DivisionByZero(_) => "division-by-zero",
            Error::DegenerateLevels(_) => "degenerate-levels",
            Error::NonConvergence { .. } => "non-convergence",
            Error::NumericFailure { .. } => "numeric-failure",
            Error::InsufficientData { .. } => "insufficient-data",
            Error::Boundary { .. } => "boundary",
        }
    }
}

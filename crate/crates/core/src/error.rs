use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (relative asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("grid must be ascending and start at zero: {0}")]
    InvalidGrid(String),

    #[error("exponent overflow: max Re(z)*lambda = {max_exponent:e} exceeds representable range")]
    Overflow { max_exponent: f64 },

    #[error("ordered product did not converge after {halvings} step halvings (last change {last_change:e})")]
    NonConvergent { halvings: u32, last_change: f64 },

    #[error("epsilon = {0} > 0 describes antidissipative evolution; set allow_antidissipative to run it")]
    Antidissipative(f64),

    #[error("matrix is singular or ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("point {point:?} lies inside or on the source support")]
    InsideSource { point: [f64; 3] },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("degenerate parametrization: pulled-back two-form vanishes everywhere")]
    DegeneratePatch,

    #[error("boundary path is open: endpoints differ by {0:e}")]
    OpenBoundary(f64),

    #[error("eigen-solution spec violates S chi = s kB chi (residual {residual:e})")]
    NotEigenvector { residual: f64 },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Overflow { .. }
            | Error::NonConvergent { .. }
            | Error::IllConditioned(_)
            | Error::DegeneratePatch
            | Error::OpenBoundary(_) => 3,
            _ => 2,
        }
    }
}

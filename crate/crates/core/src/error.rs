use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("grid function has {got} values, grid has {expected} interior nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("invalid direction {0}, expected 1 or 2")]
    InvalidDirection(usize),

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("quadratic form is negative ({0:e}); operator is not positive semidefinite")]
    NegativeQuadraticForm(f64),

    #[error("zero pivot in tridiagonal solve on line {line}")]
    ZeroPivot { line: usize },

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("operator is not separable: {0}")]
    NotSeparable(String),

    #[error("dense eigendecomposition limited to {max} unknowns, got {got}")]
    TooLarge { max: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line solve failed for component {component}: {source}")]
    Component {
        component: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a linear solve (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::ZeroPivot { .. } | Error::NotConverged { .. } => true,
            Error::Component { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }
}

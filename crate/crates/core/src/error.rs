use thiserror::Error;

/// Errors raised by the solver, the diagnostics and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("root bracket failure: target {target} not attained on [{lo}, {hi}]")]
    BracketFailure { target: f64, lo: f64, hi: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("adaptive quadrature did not reach tolerance on [{lo}, {hi}]")]
    QuadratureNonConvergence { lo: f64, hi: f64 },

    #[error("maximal wave speed {speed} is degenerate; time step is unbounded")]
    DegenerateSpeed { speed: f64 },

    #[error("array must not be empty")]
    EmptyArray,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("level {level} is never crossed in snapshot at t = {t}")]
    NoCrossing { level: f64, t: f64 },

    #[error("level {level} is crossed {count} times in snapshot at t = {t}")]
    MultipleCrossings { level: f64, t: f64, count: usize },

    #[error("step cap of {0} steps exceeded")]
    StepCapExceeded(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownClosure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn f<T: crate::Real>(x: T) -> f64 {
    x.to_f64_lossy()
}

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("eigenvalue iteration did not converge within {budget} iterations")]
    NoConvergence { budget: usize },

    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error(
        "drift matrix is not stable (margin {margin:e} rad/s, max Re(lambda) must be negative)"
    )]
    Unstable { margin: f64 },

    #[error("covariance integration diverged at t = {time:e}")]
    Diverged { time: f64 },

    #[error("integration step size underflow at t = {time:e}")]
    StepUnderflow { time: f64 },

    #[error("Lyapunov residual {residual:e} exceeds tolerance")]
    InaccurateSolve { residual: f64 },

    #[error(
        "covariance violates the uncertainty relation (min symplectic eigenvalue {min_symplectic})"
    )]
    Unphysical { min_symplectic: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown parameter path `{0}`")]
    UnknownParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("table parse error at line {line}: {message}")]
    TableParse { line: usize, message: String },
}

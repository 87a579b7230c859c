use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("{routine} did not converge within {sweeps} sweeps")]
    NoConvergence { routine: &'static str, sweeps: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid subsystem {0}, expected 1 or 2")]
    BadSubsystem(u8),

    #[error("invalid frequency range: {0}")]
    BadRange(String),

    #[error("bath kind '{kind}' does not support {operation}")]
    BadKind {
        kind: &'static str,
        operation: &'static str,
    },

    #[error("cutoff {cutoff} outside 1..={size}")]
    BadCutoff { cutoff: usize, size: usize },

    #[error("rate must be finite and positive, got {0}")]
    BadRate(f64),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A mode label was requested that does not exist in the Hilbert space.
    #[error("unknown mode label '{0}'")]
    UnknownMode(String),

    /// Operator or state dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operator that must be Hermitian is not.
    #[error("operator is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// A matrix is not a valid density matrix.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// The adaptive integrator could not meet the requested tolerance.
    #[error("integrator failed to meet tolerance (achieved error {achieved:.3e} at t = {t:.3e} s)")]
    IntegratorTolerance { achieved: f64, t: f64 },

    /// Invalid physical parameter (negative time, T2 > 2 T1, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Population of the highest bus Fock level exceeded the safety bound.
    #[error("truncation safety violated: top-level population {max_pop:.3e} exceeds {bound:.1e}")]
    TruncationSafety { max_pop: f64, bound: f64 },

    /// A nonlinear fit failed to converge or produced out-of-domain parameters.
    #[error("fit failure: {0}")]
    FitFailure(String),

    /// A calibration search did not find a usable optimum.
    #[error("calibration failure: {0}")]
    CalibrationFailure(String),

    /// Matrix inversion / least squares hit a singular system.
    #[error("singular system: {0}")]
    Singular(String),

    /// Configuration file could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    /// Scenario-level failure (unknown name, bad grid, ...).
    #[error("scenario error: {0}")]
    Scenario(String),

    /// I/O while writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

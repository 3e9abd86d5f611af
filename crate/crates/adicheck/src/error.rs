//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Result`]. Variants carry
//! enough context (times, indices, gaps, field names) for a caller to report
//! a useful diagnostic without re-deriving state.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix is not Hermitian within the admission tolerance.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// Jacobi sweeps exhausted without driving the off-diagonal norm down.
    #[error("eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    ConvergenceFailure { sweeps: usize, off: f64 },

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    /// Requested dimension exceeds the supported maximum.
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    /// Evaluation time lies outside the model's domain.
    #[error("time {t} is outside the model domain [{t_min}, {t_max}]")]
    OutOfDomain { t: f64, t_min: f64, t_max: f64 },

    /// A tabulated model's local sample spacing exceeds the configured limit.
    #[error("tabulated sample spacing {gap:.3e} near t={t} exceeds the configured limit {limit:.3e}")]
    TabulatedGapTooLarge { t: f64, gap: f64, limit: f64 },

    /// A tabulated sample matrix is not Hermitian.
    #[error("tabulated sample {index} (t={t}) is not Hermitian (defect {defect:.3e})")]
    NonHermitianSample { index: usize, t: f64, defect: f64 },

    /// Tabulated sample times are not strictly increasing.
    #[error("tabulated sample times are not strictly increasing at index {index} (t={t})")]
    NonMonotonicTimes { index: usize, t: f64 },

    /// Too few samples to build an interpolant.
    #[error("tabulated model needs at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    /// Two adjacent eigenvalues collide somewhere on the grid.
    #[error("degenerate spectrum at t={t}: adjacent gap {gap:.3e} below tolerance")]
    DegenerateSpectrum { t: f64, gap: f64 },

    /// Successive eigenvectors decorrelate; the grid is too coarse to track them.
    #[error("eigenvector continuity lost for level {level} between t={t_prev} and t={t}: {detail}")]
    ContinuityLoss {
        level: usize,
        t_prev: f64,
        t: f64,
        detail: String,
    },

    /// A coupling was requested between a level and itself.
    #[error("coupling requires two distinct levels, got m=n={level}")]
    SameLevel { level: usize },

    /// Level index out of range.
    #[error("level index {level} out of range for dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },

    /// The coupling amplitude sits at the noise floor on too many nodes for
    /// its phase to mean anything.
    #[error("phase of coupling ({m},{n}) undefined: |A| at or below the amplitude floor on {below} of {total} nodes")]
    PhaseUndefined {
        m: usize,
        n: usize,
        below: usize,
        total: usize,
    },

    /// Monotone segmentation changes too much under grid refinement.
    #[error("segmentation unstable for pair ({m},{n}): {coarse} segments at 1x vs {fine} at 2x refinement")]
    SegmentationUnstable {
        m: usize,
        n: usize,
        coarse: usize,
        fine: usize,
    },

    /// Adaptive integrator drove the step below the resolvable floor.
    #[error("step size {h:.3e} underflowed the floor {floor:.3e} at t={t}")]
    StepUnderflow { t: f64, h: f64, floor: f64 },

    /// Two per-node series were built on different grids.
    #[error("grid mismatch: {left} vs {right} nodes in {context}")]
    GridMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    /// Input text could not be parsed at all.
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    /// Input parsed but violates a named invariant.
    #[error("invalid value for `{0}`: {1}")]
    ValidationError(String, String),

    /// Filesystem-level failure.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Build a [`Error::ValidationError`] with a field path and a reason.
    pub fn invalid(field: impl Into<String>, why: impl Into<String>) -> Self {
        Error::ValidationError(field.into(), why.into())
    }

    /// Build an [`Error::Io`] from a path and any error.
    pub fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}

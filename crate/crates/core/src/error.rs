use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// individual pipeline stages so callers can map them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("angle {angle_deg}° is not on the {step_deg}° sampling grid")]
    NonSampledAngle { angle_deg: f64, step_deg: f64 },

    #[error("{n_angles} angles with a step of {step_millideg} millidegrees do not cover 360° exactly")]
    InconsistentGrid { n_angles: u32, step_millideg: u32 },

    #[error("profile at row {row} has {got} range samples, expected {expected}")]
    RaggedProfile { row: usize, expected: usize, got: usize },

    #[error("collection must contain at least one profile")]
    EmptyCollection,

    #[error("point cloud is degenerate: {0}")]
    DegenerateCloud(String),

    #[error("dimension mismatch: model has {model_dim}, cloud has {cloud_dim}")]
    DimensionMismatch { model_dim: usize, cloud_dim: usize },

    #[error("requested {k} components but only {available} are available")]
    TooManyComponents { k: usize, available: usize },

    #[error("lag {lag_deg}° is not a multiple of the {step_deg}° collection step")]
    OffGridLag { lag_deg: f64, step_deg: f64 },

    #[error("lag set is empty or contains duplicate lags")]
    InvalidLagSet,

    #[error(
        "scatterer pulse centre sweeps [{low:.6}, {high:.6}] m but the range window is [{min:.6}, {max:.6}] m"
    )]
    WindowTooNarrow { low: f64, high: f64, min: f64, max: f64 },

    #[error("scatterer group offset {offset_deg}° makes two scatterers coincide")]
    AlignedGroups { offset_deg: f64 },

    #[error("target must contain at least one scatterer")]
    EmptyTarget,

    #[error("invalid scatterer at {path}:{line}: {reason}")]
    BadTargetLine { path: PathBuf, line: usize, reason: String },

    #[error("invalid simulation config: {0}")]
    BadSimConfig(String),

    #[error("distance matrix has {size} points, above the cap of {cap}; truncate with a finite max radius or raise the cap")]
    MatrixTooLarge { size: usize, cap: usize },

    #[error("distance matrix is not symmetric with a zero diagonal")]
    BadDistanceMatrix,

    #[error("half window of {half_window} samples exceeds the excursion half width of {half_width_deg}°")]
    WindowExceedsExcursion { half_window: usize, half_width_deg: f64 },

    #[error("{path}: bad magic, not a CSAS collection file")]
    BadMagic { path: PathBuf },

    #[error("{path}: unsupported format version {version}")]
    VersionUnsupported { path: PathBuf, version: u16 },

    #[error("{path}: payload truncated, expected {expected} bytes, found {got}")]
    TruncatedPayload { path: PathBuf, expected: u64, got: u64 },

    #[error("{path}: inconsistent header: {reason}")]
    InconsistentHeader { path: PathBuf, reason: String },

    #[error("{path}:{line}: {reason}")]
    BadTextRow { path: PathBuf, line: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

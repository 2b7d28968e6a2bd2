use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma has a pole at the non-positive integer {0}")]
    GammaPole(f64),

    #[error("|t| = {t} exceeds the validated range |t| <= {limit} of the zeta evaluator")]
    AccuracyNotAchievable { t: f64, limit: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Mellin transform requested at Im(z) = {im}, below the half-plane bound {bound}")]
    MellinDomain { im: f64, bound: f64 },

    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),

    #[error("direct transform grid of {grid} points is too coarse for top mode {modes} (need >= {needed})")]
    Resolution { grid: usize, modes: usize, needed: usize },

    #[error("covering by {n} needs {needed} modes, input carries only {available}")]
    InsufficientModes { n: usize, needed: usize, available: usize },

    #[error("detection family is degenerate at mode {n}: max |psi_j(2 pi n / L)| = {max_psi:e}")]
    FamilyDegenerate { n: i64, max_psi: f64 },

    #[error("no collapsed rows at L = {0}: the complement spectrum is empty")]
    EmptySpectrum(f64),

    #[error("section grid is under-resolved: {0}")]
    UnderResolvedGrid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

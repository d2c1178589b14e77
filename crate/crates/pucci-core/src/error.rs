use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ellipticity bounds must satisfy 0 < lambda1 <= lambda2, got ({0}, {1})")]
    BadEllipticity(f64, f64),

    #[error("matrix entry ({0}, {1}) is not finite")]
    NotFinite(usize, usize),

    #[error("matrix is not symmetric: entry ({0}, {1}) differs from its transpose")]
    NotSymmetric(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {offdiag:e})")]
    NoConvergence { sweeps: usize, offdiag: f64 },

    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),

    #[error("operator family is empty")]
    EmptyFamily,

    #[error("invalid operator family: {0}")]
    BadFamily(String),

    #[error("gamma must be nonnegative and finite, got {0}")]
    BadGamma(f64),

    #[error("n_samples must be at least 1")]
    NoSamples,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

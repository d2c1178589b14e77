#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("auxiliary weight must be positive at every sample; psi = {value} at sample {index}")]
    NonPositivePsi { index: usize, value: f64 },
    #[error("{what} returned a non-finite value at sample {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("decay exponent q = {q} outside the admissible window (0, {limit})")]
    QOutOfRange { q: f64, limit: f64 },
    #[error("n* = {n_star} lies below the critical value 2; no bound branch applies")]
    BelowCritical { n_star: f64 },
    #[error("sample radius {r} outside {what}")]
    BadSampleRadius { r: f64, what: String },
    #[error("empty sample set")]
    EmptySampleSet,
    #[error("{0}")]
    BadParams(String),
    #[error(transparent)]
    Radial(#[from] radial_core::Error),
}

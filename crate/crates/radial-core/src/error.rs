use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("power decay exponent must be positive and finite, got q = {0}")]
    BadPower(f64),
    #[error("log power exponent must lie in (0, 1), got a = {0}")]
    BadLogExponent(f64),
    #[error("radius {r} outside the domain of {what}")]
    BadRadius { r: f64, what: &'static str },
    #[error("gamma must be finite and nonnegative, got {0}")]
    BadGamma(f64),
    #[error(
        "n* = {n_star} is not above 2, so no power decay exponent is admissible; \
         use the log power branch instead"
    )]
    UnsupportedRegime { n_star: f64 },
}

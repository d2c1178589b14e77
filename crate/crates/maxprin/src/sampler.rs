use std::fmt;

use crate::error::Error;

/// Pointwise zero-order coefficient c(x) together with the radial range it
/// is declared on. Checkers refuse samples outside the declared range, so a
/// verdict never rests on extrapolated coefficient values.
type EvalFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub struct CoefficientSampler {
    eval: EvalFn,
    r_lo: f64,
    r_hi: f64,
    punctured: bool,
}

impl CoefficientSampler {
    /// Wraps an evaluator declared on radii in `[r_lo, r_hi]`; a punctured
    /// sampler additionally excludes the origin. `r_hi` may be infinite.
    pub fn new(
        r_lo: f64,
        r_hi: f64,
        punctured: bool,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, Error> {
        if !(r_lo >= 0.0 && r_lo.is_finite()) || !(r_hi > r_lo) || r_hi.is_nan() {
            return Err(Error::BadParams(format!(
                "declared radius range [{r_lo}, {r_hi}] is not a valid interval"
            )));
        }
        Ok(CoefficientSampler {
            eval: Box::new(eval),
            r_lo,
            r_hi,
            punctured,
        })
    }

    /// Radially symmetric coefficient c(x) = f(|x|).
    pub fn radial(
        r_lo: f64,
        r_hi: f64,
        punctured: bool,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, Error> {
        Self::new(r_lo, r_hi, punctured, move |x| f(norm(x)))
    }

    /// Constant coefficient on all radii.
    pub fn constant(value: f64) -> Self {
        Self::new(0.0, f64::INFINITY, false, move |_| value)
            .expect("the full radius range is valid")
    }

    pub fn r_lo(&self) -> f64 {
        self.r_lo
    }

    pub fn r_hi(&self) -> f64 {
        self.r_hi
    }

    pub fn punctured(&self) -> bool {
        self.punctured
    }

    /// Evaluates the coefficient, rejecting samples outside the declared
    /// range and non-finite evaluator output.
    pub fn value_at(&self, x: &[f64], index: usize) -> Result<f64, Error> {
        let r = norm(x);
        let inside = r >= self.r_lo && r <= self.r_hi && !(self.punctured && r == 0.0);
        if !inside {
            return Err(Error::BadSampleRadius {
                r,
                what: format!(
                    "the declared sampler range {}[{}, {}]",
                    if self.punctured { "punctured " } else { "" },
                    self.r_lo,
                    self.r_hi
                ),
            });
        }
        let v = (self.eval)(x);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: "coefficient sampler",
                index,
            });
        }
        Ok(v)
    }
}

impl fmt::Debug for CoefficientSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSampler")
            .field("r_lo", &self.r_lo)
            .field("r_hi", &self.r_hi)
            .field("punctured", &self.punctured)
            .finish_non_exhaustive()
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_samples_outside_the_declared_range() {
        let c = CoefficientSampler::radial(0.5, 2.0, false, |r| -r).unwrap();
        assert!(c.value_at(&[1.0, 0.0], 0).is_ok());
        assert!(matches!(
            c.value_at(&[0.1, 0.0], 0),
            Err(Error::BadSampleRadius { .. })
        ));
        assert!(matches!(
            c.value_at(&[3.0, 0.0], 0),
            Err(Error::BadSampleRadius { .. })
        ));
    }

    #[test]
    fn punctured_sampler_rejects_the_origin() {
        let c = CoefficientSampler::radial(0.0, 1.0, true, |r| 1.0 / r).unwrap();
        assert!(c.value_at(&[0.0, 0.0, 0.0], 0).is_err());
        assert!(c.value_at(&[0.5, 0.0, 0.0], 0).is_ok());
    }

    #[test]
    fn non_finite_values_are_reported() {
        let c = CoefficientSampler::radial(0.0, 1.0, false, |r| 1.0 / r).unwrap();
        assert!(matches!(
            c.value_at(&[0.0, 0.0], 3),
            Err(Error::NonFinite { index: 3, .. })
        ));
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        assert!(CoefficientSampler::radial(-1.0, 1.0, false, |_| 0.0).is_err());
        assert!(CoefficientSampler::radial(2.0, 1.0, false, |_| 0.0).is_err());
        assert!(CoefficientSampler::constant(3.5).value_at(&[100.0], 0).is_ok());
    }
}

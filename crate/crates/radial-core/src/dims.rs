use pucci_core::Ellipticity;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The dimension-like numbers attached to an ellipticity pair.
///
/// They satisfy n* <= n <= n_* with equality exactly when lambda1 = lambda2,
/// and (n* - 1)(n_* - 1) = (n - 1)^2 holds in exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimNumbers {
    pub n_star: f64,
    pub n_sub: f64,
}

/// Computes n* = (lambda1/lambda2)(n-1) + 1 and n_* = (lambda2/lambda1)(n-1) + 1.
pub fn dim_numbers(n: usize, ell: Ellipticity) -> Result<DimNumbers, Error> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    let m = (n - 1) as f64;
    Ok(DimNumbers {
        n_star: ell.lambda1() / ell.lambda2() * m + 1.0,
        n_sub: ell.lambda2() / ell.lambda1() * m + 1.0,
    })
}

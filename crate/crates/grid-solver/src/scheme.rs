use serde::{Deserialize, Serialize};

use crate::directions::SUPPORTED_N_DIRS;
use crate::error::Error;

/// Discretization and iteration controls shared by every grid operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeParams {
    /// Directed stencil ray count; one of 4, 8, 16, 24, 40.
    pub n_dirs: usize,
    /// First-order coefficient in front of |Du|.
    pub gamma: f64,
    /// Safety factor in (0, 1) for explicit pseudo-time and parabolic steps.
    pub cfl: f64,
    /// Outer iteration budget for the Dirichlet solver.
    pub max_iter: usize,
    /// Relative residual target; see `solve_dirichlet` for the scaling.
    pub residual_tol: f64,
}

impl Default for SchemeParams {
    fn default() -> Self {
        SchemeParams {
            n_dirs: 16,
            gamma: 0.0,
            cfl: 0.5,
            max_iter: 60,
            residual_tol: 1e-8,
        }
    }
}

impl SchemeParams {
    pub fn validate(&self) -> Result<(), Error> {
        if !SUPPORTED_N_DIRS.contains(&self.n_dirs) {
            return Err(Error::BadDirections(self.n_dirs));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::BadParams(format!(
                "gamma must be finite and nonnegative, got {}",
                self.gamma
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::BadParams(format!(
                "cfl must lie in (0, 1), got {}",
                self.cfl
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::BadParams("max_iter must be at least 1".into()));
        }
        if !(self.residual_tol > 0.0 && self.residual_tol.is_finite()) {
            return Err(Error::BadParams(format!(
                "residual_tol must be positive, got {}",
                self.residual_tol
            )));
        }
        Ok(())
    }
}

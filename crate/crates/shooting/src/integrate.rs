use pucci_core::{Ellipticity, OpSign};
use serde::{Deserialize, Serialize};

use crate::ode::radial_rhs;
use crate::Error;

/// Parameters of a single shot.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ShootParams {
    pub n: usize,
    pub ell: Ellipticity,
    pub p: f64,
    /// u(0).
    pub alpha: f64,
    pub r_max: f64,
    pub op: OpSign,
    /// Initial step size handed to the adaptive integrator.
    pub h0: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl ShootParams {
    /// Builds params with default integration settings (r_max = 100,
    /// h0 = 1e-4, rel_tol = 1e-10, abs_tol = 1e-12).
    pub fn new(n: usize, ell: Ellipticity, p: f64, alpha: f64, op: OpSign) -> Result<Self, Error> {
        let params = ShootParams {
            n,
            ell,
            p,
            alpha,
            r_max: 100.0,
            op,
            h0: 1e-4,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n < 3 {
            return Err(Error::BadParams(format!("n must be at least 3, got {}", self.n)));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::BadParams(format!("p must exceed 1, got {}", self.p)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::BadParams(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::BadParams(format!(
                "r_max must be positive, got {}",
                self.r_max
            )));
        }
        if !(self.h0 > 0.0 && self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::BadParams(
                "step controls must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// State (u, u') at radius r.
#[derive(Clone, Copy, Debug)]
pub(crate) struct State {
    pub r: f64,
    pub u: f64,
    pub v: f64,
}

fn rhs(r: f64, u: f64, v: f64, params: &ShootParams) -> (f64, f64) {
    (v, radial_rhs(r, u, v, params))
}

/// Dormand-Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// Difference between the 5th and 4th order weights (error estimator).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) enum StepResult {
    /// Step accepted: new state and suggested next step size.
    Accepted(State, f64),
    /// Step rejected: retry with this smaller size.
    Rejected(f64),
    /// State stopped being finite.
    Diverged,
}

/// One embedded trial step of size h from `s`.
pub(crate) fn dp45_step(s: &State, h: f64, params: &ShootParams) -> StepResult {
    let mut ku = [0f64; 7];
    let mut kv = [0f64; 7];
    let (du, dv) = rhs(s.r, s.u, s.v, params);
    ku[0] = du;
    kv[0] = dv;
    for i in 0..6 {
        let mut au = 0.0;
        let mut av = 0.0;
        for j in 0..=i {
            au += A[i][j] * ku[j];
            av += A[i][j] * kv[j];
        }
        let r = s.r + C[i] * h;
        let u = s.u + h * au;
        let v = s.v + h * av;
        if !(u.is_finite() && v.is_finite()) {
            return StepResult::Diverged;
        }
        let (du, dv) = rhs(r, u, v, params);
        ku[i + 1] = du;
        kv[i + 1] = dv;
    }
    // The last stage row of A is the 5th order solution (FSAL layout).
    let mut nu = 0.0;
    let mut nv = 0.0;
    for j in 0..6 {
        nu += A[5][j] * ku[j];
        nv += A[5][j] * kv[j];
    }
    let new = State {
        r: s.r + h,
        u: s.u + h * nu,
        v: s.v + h * nv,
    };
    if !(new.u.is_finite() && new.v.is_finite()) {
        return StepResult::Diverged;
    }

    let mut eu = 0.0;
    let mut ev = 0.0;
    for j in 0..7 {
        eu += E[j] * ku[j];
        ev += E[j] * kv[j];
    }
    let sc_u = params.abs_tol + params.rel_tol * s.u.abs().max(new.u.abs());
    let sc_v = params.abs_tol + params.rel_tol * s.v.abs().max(new.v.abs());
    let err = (0.5 * ((h * eu / sc_u).powi(2) + (h * ev / sc_v).powi(2))).sqrt();

    let factor = if err > 0.0 {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    } else {
        5.0
    };
    if err <= 1.0 {
        StepResult::Accepted(new, h * factor)
    } else {
        StepResult::Rejected(h * factor)
    }
}

/// Largest step allowed at radius r: roughly uniform in ln r past r = 1, so
/// the tail always carries enough samples for the log-log slope fit.
pub(crate) fn max_step(r: f64) -> f64 {
    0.1 * r.max(1.0)
}

/// Integrates from `start` to exactly `r_target`, returning the final state,
/// or None on step underflow / non-finite state.
pub(crate) fn integrate_to(start: State, r_target: f64, params: &ShootParams) -> Option<State> {
    let mut s = start;
    let mut h = params.h0.min(r_target - s.r);
    if h <= 0.0 {
        return Some(s);
    }
    loop {
        h = h.min(max_step(s.r)).min(r_target - s.r);
        if s.r >= r_target {
            return Some(s);
        }
        if h < 1e-13 * s.r.max(1.0) {
            return None;
        }
        match dp45_step(&s, h, params) {
            StepResult::Accepted(new, next_h) => {
                s = new;
                if s.r >= r_target * (1.0 - 1e-15) {
                    return Some(s);
                }
                h = next_h;
            }
            StepResult::Rejected(next_h) => h = next_h,
            StepResult::Diverged => return None,
        }
    }
}

use pucci_core::Ellipticity;
use serde::{Deserialize, Serialize};

use crate::dims::dim_numbers;
use crate::error::Error;

/// The two auxiliary comparison functions used by the maximum-principle
/// bounds: psi = |x|^{-q} on all of r > 0 and psi = (-ln|x|)^a on 0 < r < 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuxFunction {
    PowerDecay { q: f64 },
    LogPower { a: f64 },
}

impl AuxFunction {
    pub fn power_decay(q: f64) -> Result<Self, Error> {
        let f = AuxFunction::PowerDecay { q };
        f.validate()?;
        Ok(f)
    }

    pub fn log_power(a: f64) -> Result<Self, Error> {
        let f = AuxFunction::LogPower { a };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), Error> {
        match *self {
            AuxFunction::PowerDecay { q } => {
                if !(q > 0.0 && q.is_finite()) {
                    return Err(Error::BadPower(q));
                }
            }
            AuxFunction::LogPower { a } => {
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::BadLogExponent(a));
                }
            }
        }
        Ok(())
    }

    fn check_radius(&self, r: f64) -> Result<(), Error> {
        let ok = match self {
            AuxFunction::PowerDecay { .. } => r > 0.0 && r.is_finite(),
            AuxFunction::LogPower { .. } => r > 0.0 && r < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadRadius {
                r,
                what: match self {
                    AuxFunction::PowerDecay { .. } => "|x|^{-q} (needs r > 0)",
                    AuxFunction::LogPower { .. } => "(-ln r)^a (needs 0 < r < 1)",
                },
            })
        }
    }

    /// psi(r).
    pub fn value(&self, r: f64) -> Result<f64, Error> {
        self.validate()?;
        self.check_radius(r)?;
        Ok(match *self {
            AuxFunction::PowerDecay { q } => r.powf(-q),
            AuxFunction::LogPower { a } => (-r.ln()).powf(a),
        })
    }

    /// psi'(r).
    pub fn deriv(&self, r: f64) -> Result<f64, Error> {
        self.validate()?;
        self.check_radius(r)?;
        Ok(match *self {
            AuxFunction::PowerDecay { q } => -q * r.powf(-q - 1.0),
            AuxFunction::LogPower { a } => -a * (-r.ln()).powf(a - 1.0) / r,
        })
    }

    /// psi''(r).
    pub fn second_deriv(&self, r: f64) -> Result<f64, Error> {
        self.validate()?;
        self.check_radius(r)?;
        Ok(match *self {
            AuxFunction::PowerDecay { q } => q * (q + 1.0) * r.powf(-q - 2.0),
            AuxFunction::LogPower { a } => {
                let l = -r.ln();
                a * (l.powf(a - 1.0) + (a - 1.0) * l.powf(a - 2.0)) / (r * r)
            }
        })
    }
}

/// Closed-form value of (M+(D^2 psi) + gamma |D psi|)/psi:
///
///   PowerDecay q:  q(lambda2(q+1) - lambda1(n-1))/r^2 + gamma q / r
///   LogPower a:    lambda2(a-1)a(-ln r)^{-2} r^{-2} + gamma a (-ln r)^{-1} r^{-1}
///
/// The log form is the bound used in the critical regime n* = 2 (there the
/// first-order eigenvalue terms cancel); it requires r small enough that
/// psi'' > 0, i.e. r <= e^{-(1-a)}.
pub fn aux_bound(
    r: f64,
    aux: AuxFunction,
    ell: Ellipticity,
    gamma: f64,
    n: usize,
) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::BadGamma(gamma));
    }
    aux.validate()?;
    aux.check_radius(r)?;
    Ok(match aux {
        AuxFunction::PowerDecay { q } => {
            q * (ell.lambda2() * (q + 1.0) - ell.lambda1() * (n - 1) as f64) / (r * r)
                + gamma * q / r
        }
        AuxFunction::LogPower { a } => {
            let l = -r.ln();
            ell.lambda2() * (a - 1.0) * a / (l * l * r * r) + gamma * a / (l * r)
        }
    })
}

/// Maximizes -aux_bound(r, PowerDecay{q}, ...) over the admissible window
/// q in (0, n* - 2): a coarse grid locates the peak of the concave quadratic,
/// then golden-section search tightens it to 1e-10.
///
/// Returns (q_opt, margin) where margin = -aux_bound at q_opt. A negative
/// margin means no power decay exponent helps at this radius.
pub fn best_q(ell: Ellipticity, n: usize, gamma: f64, r: f64) -> Result<(f64, f64), Error> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::BadGamma(gamma));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::BadRadius {
            r,
            what: "power decay window (needs r > 0)",
        });
    }
    let d = dim_numbers(n, ell)?;
    if d.n_star <= 2.0 {
        return Err(Error::UnsupportedRegime { n_star: d.n_star });
    }
    let width = d.n_star - 2.0;
    let objective = |q: f64| -aux_bound(r, AuxFunction::PowerDecay { q }, ell, gamma, n).unwrap();

    // Coarse pass over cell midpoints.
    const GRID: usize = 1024;
    let mut best_q = width / 2.0;
    let mut best_val = objective(best_q);
    for i in 0..GRID {
        let q = (i as f64 + 0.5) / GRID as f64 * width;
        let v = objective(q);
        if v > best_val {
            best_val = v;
            best_q = q;
        }
    }

    // Golden-section refinement inside the bracketing cells.
    let cell = width / GRID as f64;
    let eps = width * 1e-12;
    let mut lo = (best_q - cell).max(eps);
    let mut hi = (best_q + cell).min(width - eps);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        }
    }
    let q_golden = 0.5 * (lo + hi);

    // Near the peak the objective is flat to machine precision, which caps
    // golden section at ~sqrt(eps) accuracy in q. One parabolic fit through
    // well-separated points recovers the vertex of the quadratic exactly.
    let xa = (q_golden - cell).max(eps);
    let xc = (q_golden + cell).min(width - eps);
    let xb = 0.5 * (xa + xc);
    let (fa, fb, fc) = (objective(xa), objective(xb), objective(xc));
    let num = (xb - xa) * (xb - xa) * (fb - fc) - (xb - xc) * (xb - xc) * (fb - fa);
    let den = (xb - xa) * (fb - fc) - (xb - xc) * (fb - fa);
    let mut q_opt = q_golden;
    if den != 0.0 {
        let vertex = xb - 0.5 * num / den;
        if vertex > eps && vertex < width - eps && objective(vertex) >= objective(q_opt) - 1e-15 {
            q_opt = vertex;
        }
    }
    Ok((q_opt, objective(q_opt)))
}

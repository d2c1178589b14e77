use pucci_core::Ellipticity;
use radial_core::{aux_bound, dim_numbers, AuxFunction};
use serde_json::json;

use crate::error::Error;
use crate::sampler::{norm, CoefficientSampler};
use crate::verdict::{Hypothesis, MaxPrinVerdict};

/// Auxiliary weight for the weighted bound: either one of the closed-form
/// radial families or a field tabulated on the sample set itself, given as
/// psi values and gradient magnitudes (both aligned with the samples).
#[derive(Clone, Debug)]
pub enum PsiWeight {
    Aux(AuxFunction),
    Tabulated { psi: Vec<f64>, grad_norm: Vec<f64> },
}

/// Branch selector for the punctured-domain bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Branch {
    /// Pick by n*: power with q = (n* - 2)/2 above the critical value, log
    /// at n* = 2 (within 1e-12), error below.
    Auto,
    Power { q: f64 },
    Log,
}

/// Tolerance deciding when n* counts as exactly critical.
const N_STAR_CRITICAL_TOL: f64 = 1e-12;

/// Points per decade in the default geometric sample ladders.
const LADDER_PER_DECADE: f64 = 64.0;

fn check_gamma(gamma: f64) -> Result<(), Error> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::BadParams(format!(
            "gamma must be finite and nonnegative, got {gamma}"
        )));
    }
    Ok(())
}

/// Geometric radius ladder from `r_lo` to `r_hi` inclusive, 64 points per
/// decade: the shipped bounds are monotone in |x|, so a ladder of this
/// density pins their worst sample to a fraction of a percent in radius.
pub fn radius_ladder(r_lo: f64, r_hi: f64) -> Result<Vec<f64>, Error> {
    if !(r_lo > 0.0 && r_lo.is_finite() && r_hi > r_lo && r_hi.is_finite()) {
        return Err(Error::BadParams(format!(
            "ladder range [{r_lo}, {r_hi}] must be finite, positive, and increasing"
        )));
    }
    let decades = (r_hi / r_lo).log10();
    let count = ((LADDER_PER_DECADE * decades).ceil() as usize).max(1) + 1;
    let ratio = r_hi / r_lo;
    Ok((0..count)
        .map(|i| r_lo * ratio.powf(i as f64 / (count - 1) as f64))
        .collect())
}

fn axis_point(r: f64, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[0] = r;
    p
}

/// Scans `margins` for its first minimum. Returns (index, margin).
fn worst_sample(margins: &[f64]) -> (usize, f64) {
    let mut worst = 0usize;
    let mut min = f64::INFINITY;
    for (i, &m) in margins.iter().enumerate() {
        if m < min {
            min = m;
            worst = i;
        }
    }
    (worst, min)
}

/// Checks c(x) <= lambda(x) - gamma |D psi| / psi pointwise on the samples,
/// the hypothesis under which the minimum of u cannot be interior. The
/// margin is the worst value of the right-hand side minus c.
pub fn check_weighted_bound(
    c: &CoefficientSampler,
    lambda: impl Fn(&[f64]) -> f64,
    psi: &PsiWeight,
    gamma: f64,
    samples: &[Vec<f64>],
) -> Result<MaxPrinVerdict, Error> {
    check_gamma(gamma)?;
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if let PsiWeight::Tabulated { psi, grad_norm } = psi {
        if psi.len() != samples.len() || grad_norm.len() != samples.len() {
            return Err(Error::BadParams(format!(
                "tabulated psi carries {} values and {} gradients for {} samples",
                psi.len(),
                grad_norm.len(),
                samples.len()
            )));
        }
    }

    let mut margins = Vec::with_capacity(samples.len());
    for (i, x) in samples.iter().enumerate() {
        let (psi_val, grad_val) = match psi {
            PsiWeight::Aux(aux) => {
                let r = norm(x);
                (aux.value(r)?, aux.deriv(r)?.abs())
            }
            PsiWeight::Tabulated { psi, grad_norm } => {
                if !(grad_norm[i] >= 0.0 && grad_norm[i].is_finite()) {
                    return Err(Error::BadParams(format!(
                        "gradient magnitude {} at sample {i} is not a finite nonnegative value",
                        grad_norm[i]
                    )));
                }
                (psi[i], grad_norm[i])
            }
        };
        if !(psi_val > 0.0) {
            return Err(Error::NonPositivePsi {
                index: i,
                value: psi_val,
            });
        }
        let lam = lambda(x);
        if !lam.is_finite() {
            return Err(Error::NonFinite {
                what: "lambda sampler",
                index: i,
            });
        }
        let cval = c.value_at(x, i)?;
        margins.push(lam - gamma * grad_val / psi_val - cval);
    }

    let (worst, margin) = worst_sample(&margins);
    let psi_desc = match psi {
        PsiWeight::Aux(aux) => serde_json::to_value(aux).expect("aux function serializes"),
        PsiWeight::Tabulated { .. } => json!({"kind": "tabulated"}),
    };
    Ok(MaxPrinVerdict::from_margin(
        Hypothesis::WeightedBound,
        margin,
        samples[worst].clone(),
        json!({
            "gamma": gamma,
            "psi": psi_desc,
            "sample_count": samples.len(),
        }),
    ))
}

/// Checks the decay condition on radii beyond `big_r`:
/// c(x) <= -q (lambda2 (q+1) - lambda1 (n-1)) / |x|^2 - gamma q / |x|,
/// admissible only for q in (0, n* - 2). Samples sit on the first axis.
pub fn check_decay_at_infinity(
    c: &CoefficientSampler,
    q: f64,
    big_r: f64,
    ell: Ellipticity,
    gamma: f64,
    n: usize,
    radii: &[f64],
) -> Result<MaxPrinVerdict, Error> {
    check_gamma(gamma)?;
    if !(big_r >= 0.0 && big_r.is_finite()) {
        return Err(Error::BadParams(format!(
            "threshold radius must be finite and nonnegative, got {big_r}"
        )));
    }
    let dims = dim_numbers(n, ell)?;
    let window = dims.n_star - 2.0;
    if !(window > 0.0) {
        return Err(Error::BelowCritical {
            n_star: dims.n_star,
        });
    }
    if !(q > 0.0 && q < window) {
        return Err(Error::QOutOfRange { q, limit: window });
    }
    if radii.is_empty() {
        return Err(Error::EmptySampleSet);
    }

    let mut margins = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        if !(r > big_r) {
            return Err(Error::BadSampleRadius {
                r,
                what: format!("the decay region (needs r > {big_r})"),
            });
        }
        let bound = -aux_bound(r, AuxFunction::PowerDecay { q }, ell, gamma, n)?;
        let cval = c.value_at(&axis_point(r, n), i)?;
        margins.push(bound - cval);
    }

    let (worst, margin) = worst_sample(&margins);
    Ok(MaxPrinVerdict::from_margin(
        Hypothesis::DecayAtInfinity,
        margin,
        axis_point(radii[worst], n),
        json!({
            "q": q,
            "R": big_r,
            "gamma": gamma,
            "lambda1": ell.lambda1(),
            "lambda2": ell.lambda2(),
            "n": n,
            "sample_count": radii.len(),
        }),
    ))
}

/// Checks the punctured-neighbourhood bound near an isolated boundary point.
/// The power branch needs n* > 2; the log branch is the critical case
/// n* = 2 and needs radii inside the unit ball. `Auto` selects by n*.
pub fn check_punctured(
    c: &CoefficientSampler,
    ell: Ellipticity,
    gamma: f64,
    n: usize,
    branch: Branch,
    radii: &[f64],
) -> Result<MaxPrinVerdict, Error> {
    check_gamma(gamma)?;
    let dims = dim_numbers(n, ell)?;
    let n_star = dims.n_star;
    let window = n_star - 2.0;

    let resolved = match branch {
        Branch::Auto => {
            if window.abs() <= N_STAR_CRITICAL_TOL {
                Branch::Log
            } else if window > 0.0 {
                Branch::Power { q: 0.5 * window }
            } else {
                return Err(Error::BelowCritical { n_star });
            }
        }
        Branch::Power { q } => {
            if !(window > 0.0) {
                return Err(Error::BelowCritical { n_star });
            }
            if !(q > 0.0 && q < window) {
                return Err(Error::QOutOfRange { q, limit: window });
            }
            Branch::Power { q }
        }
        Branch::Log => {
            if window.abs() > N_STAR_CRITICAL_TOL {
                return Err(Error::BadParams(format!(
                    "the log branch applies only at n* = 2; here n* = {n_star}"
                )));
            }
            Branch::Log
        }
    };
    if radii.is_empty() {
        return Err(Error::EmptySampleSet);
    }

    let aux = match resolved {
        Branch::Power { q } => AuxFunction::PowerDecay { q },
        Branch::Log => AuxFunction::LogPower { a: 0.5 },
        Branch::Auto => unreachable!("auto resolves above"),
    };
    let mut margins = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let admissible = match resolved {
            Branch::Log => r > 0.0 && r < 1.0,
            _ => r > 0.0,
        };
        if !admissible || !r.is_finite() {
            return Err(Error::BadSampleRadius {
                r,
                what: match resolved {
                    Branch::Log => "the log branch (needs 0 < r < 1)".into(),
                    _ => "the punctured neighbourhood (needs r > 0)".into(),
                },
            });
        }
        let bound = -aux_bound(r, aux, ell, gamma, n)?;
        let cval = c.value_at(&axis_point(r, n), i)?;
        margins.push(bound - cval);
    }

    let (worst, margin) = worst_sample(&margins);
    let (hypothesis, branch_params) = match resolved {
        Branch::Power { q } => (Hypothesis::PuncturedPower, json!({"branch": "power", "q": q})),
        Branch::Log => (Hypothesis::PuncturedLog, json!({"branch": "log", "a": 0.5})),
        Branch::Auto => unreachable!(),
    };
    Ok(MaxPrinVerdict::from_margin(
        hypothesis,
        margin,
        axis_point(radii[worst], n),
        json!({
            "gamma": gamma,
            "lambda1": ell.lambda1(),
            "lambda2": ell.lambda2(),
            "n": n,
            "n_star": n_star,
            "selected": branch_params,
            "sample_count": radii.len(),
        }),
    ))
}

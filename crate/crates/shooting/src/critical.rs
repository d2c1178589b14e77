use pucci_core::{Ellipticity, OpSign};
use radial_core::dim_numbers;
use serde::{Deserialize, Serialize};

use crate::integrate::ShootParams;
use crate::outcome::{shoot, OutcomeKind};
use crate::Error;

/// Which admissibility gate was enforced before bisecting. The plus operator
/// requires n* > 2; for the minus operator the analytic bracket exists for
/// every n >= 3, so no gate is applied.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalGate {
    PlusNeedsNStar { n_star: f64 },
    MinusUngated,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalEstimate {
    pub p_low: f64,
    pub p_high: f64,
    /// Closed-form bracket the critical exponent must lie in:
    /// (max{n*/(n*-2), (n+2)/(n-2)}, (n*+2)/(n*-2)) for the plus operator,
    /// ((n_*+2)/(n_*-2), (n+2)/(n-2)) for the minus operator.
    pub analytic_bracket: (f64, f64),
    /// Whether [p_low, p_high] sits strictly inside the analytic bracket.
    pub consistent: bool,
    pub gate: CriticalGate,
}

/// Base integration range; outcomes that stay inconclusive are retried on
/// r_max multiplied by each entry of the ladder. The range must dwarf the
/// crossing radius near the transition (which grows like 1/(p* - p)), and
/// the step cap makes the cost of a shot only logarithmic in r_max.
const BASE_R_MAX: f64 = 1e5;
const R_LADDER: [f64; 5] = [1.0, 4.0, 16.0, 64.0, 256.0];

fn classify(p: f64, n: usize, ell: Ellipticity, op: OpSign) -> Result<OutcomeKind, Error> {
    let mut last_reason = String::new();
    for mult in R_LADDER {
        let mut params = ShootParams::new(n, ell, p, 1.0, op)?;
        params.r_max = BASE_R_MAX * mult;
        let outcome = shoot(&params)?;
        match outcome.kind {
            OutcomeKind::Inconclusive { reason } => last_reason = reason,
            kind => return Ok(kind),
        }
    }
    Err(Error::InconclusiveBisection {
        p,
        reason: last_reason,
    })
}

fn analytic_bracket(n: usize, ell: Ellipticity, op: OpSign) -> Result<(f64, f64), Error> {
    let d = dim_numbers(n, ell).map_err(|e| Error::BadParams(e.to_string()))?;
    let nf = n as f64;
    match op {
        OpSign::Plus => {
            if d.n_star <= 2.0 {
                return Err(Error::UnsupportedRegime { n_star: d.n_star });
            }
            let lower = (d.n_star / (d.n_star - 2.0)).max((nf + 2.0) / (nf - 2.0));
            let upper = (d.n_star + 2.0) / (d.n_star - 2.0);
            Ok((lower, upper))
        }
        OpSign::Minus => Ok(((d.n_sub + 2.0) / (d.n_sub - 2.0), (nf + 2.0) / (nf - 2.0))),
    }
}

/// Bisects on p (alpha pinned to 1 by scaling invariance) between a crossing
/// outcome at p_lo and a decaying outcome at p_hi.
pub fn estimate_critical_p(
    n: usize,
    ell: Ellipticity,
    op: OpSign,
    p_lo: f64,
    p_hi: f64,
    tol_p: f64,
) -> Result<CriticalEstimate, Error> {
    if !(p_lo > 1.0 && p_hi > p_lo && p_hi.is_finite()) {
        return Err(Error::BadParams(format!(
            "need 1 < p_lo < p_hi, got ({p_lo}, {p_hi})"
        )));
    }
    if !(tol_p > 0.0) {
        return Err(Error::BadParams(format!("tol_p must be positive, got {tol_p}")));
    }
    let bracket = analytic_bracket(n, ell, op)?;
    let gate = match op {
        OpSign::Plus => CriticalGate::PlusNeedsNStar {
            n_star: dim_numbers(n, ell).map_err(|e| Error::BadParams(e.to_string()))?.n_star,
        },
        OpSign::Minus => CriticalGate::MinusUngated,
    };

    match classify(p_lo, n, ell, op)? {
        OutcomeKind::Crossing { .. } => {}
        kind => {
            return Err(Error::LowEndpointNotCrossing {
                p: p_lo,
                kind: kind.name().to_string(),
            })
        }
    }
    match classify(p_hi, n, ell, op)? {
        OutcomeKind::SlowDecay { .. } | OutcomeKind::FastDecay { .. } => {}
        kind => {
            return Err(Error::HighEndpointNotDecay {
                p: p_hi,
                kind: kind.name().to_string(),
            })
        }
    }

    let mut lo = p_lo;
    let mut hi = p_hi;
    while hi - lo > tol_p {
        let mid = 0.5 * (lo + hi);
        match classify(mid, n, ell, op)? {
            OutcomeKind::Crossing { .. } => lo = mid,
            _ => hi = mid,
        }
    }

    let consistent = lo > bracket.0 && hi < bracket.1;
    Ok(CriticalEstimate {
        p_low: lo,
        p_high: hi,
        analytic_bracket: bracket,
        consistent,
        gate,
    })
}

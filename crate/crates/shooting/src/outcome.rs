use serde::{Deserialize, Serialize};

use crate::integrate::{dp45_step, integrate_to, max_step, ShootParams, State, StepResult};
use crate::ode::radial_rhs;

/// The starting radius of the series expansion that sidesteps the u'/r
/// singularity at the center.
const SERIES_START: f64 = 1e-6;

/// Half-width of the slope window that counts as the slow rate -2/(p-1).
const SLOW_BAND: f64 = 0.15;
/// How much steeper than the slow rate a tail must be to count as fast decay.
const FAST_GAP: f64 = 0.3;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct TracePoint {
    pub r: f64,
    pub u: f64,
    pub du: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeKind {
    /// u reached zero; the root is bracketed to 1e-10 relative.
    Crossing { r_cross: f64 },
    /// Tail slope matches -2/(p-1) within 0.15.
    SlowDecay { slope_est: f64 },
    /// Tail slope at least 0.3 steeper than -2/(p-1).
    FastDecay { slope_est: f64 },
    Inconclusive { reason: String },
}

impl OutcomeKind {
    pub fn name(&self) -> &'static str {
        match self {
            OutcomeKind::Crossing { .. } => "crossing",
            OutcomeKind::SlowDecay { .. } => "slow_decay",
            OutcomeKind::FastDecay { .. } => "fast_decay",
            OutcomeKind::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShootOutcome {
    pub kind: OutcomeKind,
    pub trace: Vec<TracePoint>,
}

fn push(trace: &mut Vec<TracePoint>, s: &State) {
    trace.push(TracePoint {
        r: s.r,
        u: s.u,
        du: s.v,
    });
}

/// Refines the first zero of u between an accepted state with u > 0 and the
/// next accepted radius, by bisection on short re-integrations from the
/// positive side. Returns (r_cross, u'(r_cross)).
fn refine_crossing(from: State, r_hi_in: f64, params: &ShootParams) -> Option<(f64, f64)> {
    let mut lo = from.r;
    let mut hi = r_hi_in;
    let mut v_at = from.v;
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let s = integrate_to(from, mid, params)?;
        if s.u > 0.0 {
            lo = mid;
            v_at = s.v;
        } else {
            hi = mid;
            v_at = s.v;
        }
    }
    Some((0.5 * (lo + hi), v_at))
}

/// Least-squares slope of ln u against ln r over the tail decade.
fn tail_slope(trace: &[TracePoint], r_max: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .filter(|t| t.r >= r_max / 10.0 && t.u > 0.0)
        .map(|t| (t.r.ln(), t.u.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom <= 0.0 {
        return None;
    }
    Some((m * sxy - sx * sy) / denom)
}

/// Integrates the radial profile from the center and classifies the outcome.
pub fn shoot(params: &ShootParams) -> Result<ShootOutcome, crate::Error> {
    params.validate()?;
    let mut trace = Vec::new();
    trace.push(TracePoint {
        r: 0.0,
        u: params.alpha,
        du: 0.0,
    });

    // Quadratic series start u = alpha + u''(0) r^2 / 2.
    let c2 = radial_rhs(0.0, params.alpha, 0.0, params);
    let eps = SERIES_START;
    let mut s = State {
        r: eps,
        u: params.alpha + 0.5 * c2 * eps * eps,
        v: c2 * eps,
    };
    push(&mut trace, &s);

    let mut h = params.h0;
    let inconclusive = |reason: &str, trace: Vec<TracePoint>| {
        Ok(ShootOutcome {
            kind: OutcomeKind::Inconclusive {
                reason: reason.to_string(),
            },
            trace,
        })
    };

    while s.r < params.r_max {
        h = h.min(max_step(s.r)).min(params.r_max - s.r);
        if h < 1e-13 * s.r.max(1.0) {
            return inconclusive("step size underflow", trace);
        }
        match dp45_step(&s, h, params) {
            StepResult::Accepted(new, next_h) => {
                if new.u <= 0.0 {
                    match refine_crossing(s, new.r, params) {
                        Some((r_cross, v_at)) => {
                            trace.push(TracePoint {
                                r: r_cross,
                                u: 0.0,
                                du: v_at,
                            });
                            return Ok(ShootOutcome {
                                kind: OutcomeKind::Crossing { r_cross },
                                trace,
                            });
                        }
                        None => return inconclusive("crossing refinement diverged", trace),
                    }
                }
                s = new;
                push(&mut trace, &s);
                h = next_h;
            }
            StepResult::Rejected(next_h) => h = next_h,
            StepResult::Diverged => return inconclusive("state stopped being finite", trace),
        }
    }

    let target = -2.0 / (params.p - 1.0);
    match tail_slope(&trace, params.r_max) {
        Some(slope) if (slope - target).abs() <= SLOW_BAND => Ok(ShootOutcome {
            kind: OutcomeKind::SlowDecay { slope_est: slope },
            trace,
        }),
        Some(slope) if slope <= target - FAST_GAP => Ok(ShootOutcome {
            kind: OutcomeKind::FastDecay { slope_est: slope },
            trace,
        }),
        Some(slope) => {
            let reason =
                format!("tail slope {slope:.6} fits neither decay template (slow rate {target:.6})");
            inconclusive(&reason, trace)
        }
        None => inconclusive("too few tail samples for a slope fit", trace),
    }
}

/// Integrates the profile from the center to exactly `r_target` and returns
/// the state there, or None on divergence. Useful for pointwise comparisons
/// against reference integrators.
pub fn state_at(params: &ShootParams, r_target: f64) -> Option<TracePoint> {
    params.validate().ok()?;
    if !(r_target > SERIES_START) {
        return None;
    }
    let c2 = radial_rhs(0.0, params.alpha, 0.0, params);
    let eps = SERIES_START;
    let start = State {
        r: eps,
        u: params.alpha + 0.5 * c2 * eps * eps,
        v: c2 * eps,
    };
    integrate_to(start, r_target, params).map(|s| TracePoint {
        r: s.r,
        u: s.u,
        du: s.v,
    })
}

/// Renders the trace as CSV with full-precision columns r,u,du.
pub fn trace_to_csv(outcome: &ShootOutcome) -> String {
    let mut out = String::from("r,u,du\n");
    for t in &outcome.trace {
        out.push_str(&artifact_io::fmt_f64(t.r));
        out.push(',');
        out.push_str(&artifact_io::fmt_f64(t.u));
        out.push(',');
        out.push_str(&artifact_io::fmt_f64(t.du));
        out.push('\n');
    }
    out
}

//! Radial shooting for M+-(D^2 u) + u^p = 0.
//!
//! Through the radial reduction the PDE becomes a scalar ODE for u(r) in
//! which the extremal operator acts on the pair (u'', u'/r) with sign
//! dependent weights, so every integration step first resolves which
//! ellipticity constant multiplies u''. Outcomes are classified into the
//! phase-plane alternatives: a first zero crossing, slow decay at the rate
//! r^{-2/(p-1)}, or strictly faster decay. Bisection on p between a crossing
//! and a decaying outcome estimates the critical exponents, and the result
//! carries the closed-form bracket those exponents must fall in.

// `!(x > 0.0)`-style guards are deliberate: unlike `x <= 0.0` they also
// reject NaN arguments.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod critical;
mod integrate;
mod ode;
mod outcome;

pub use critical::{estimate_critical_p, CriticalEstimate, CriticalGate};
pub use integrate::ShootParams;
pub use ode::radial_rhs;
pub use outcome::{shoot, state_at, trace_to_csv, OutcomeKind, ShootOutcome, TracePoint};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shooting parameters: {0}")]
    BadParams(String),
    #[error("n* = {n_star} is not above 2; the plus-operator critical exponent is undefined here")]
    UnsupportedRegime { n_star: f64 },
    #[error("p_lo = {p} must produce a crossing, got {kind}")]
    LowEndpointNotCrossing { p: f64, kind: String },
    #[error("p_hi = {p} must produce a decaying solution, got {kind}")]
    HighEndpointNotDecay { p: f64, kind: String },
    #[error("outcome at p = {p} stayed inconclusive after extending r_max: {reason}")]
    InconclusiveBisection { p: f64, reason: String },
}

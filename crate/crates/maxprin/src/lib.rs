//! Sampled checkers for the explicit maximum-principle hypotheses.
//!
//! Each checker evaluates one pointwise condition of the form
//! c(x) <= bound(x) over a caller-supplied sample set and reports the
//! minimum of bound(x) - c(x) as a margin, together with the sample that
//! attains it. A verdict holds exactly when the margin is nonnegative.
//!
//! Verdicts are sampled, not proved: the shipped bounds are monotone in |x|,
//! so geometric radius ladders capture their worst points, but nothing here
//! certifies behaviour between samples.

// `!(x > 0.0)`-style guards are deliberate: unlike `x <= 0.0` they also
// reject NaN arguments.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod checks;
mod error;
mod sampler;
mod verdict;

pub use checks::{
    check_decay_at_infinity, check_punctured, check_weighted_bound, radius_ladder, Branch,
    PsiWeight,
};
pub use error::Error;
pub use sampler::CoefficientSampler;
pub use verdict::{Hypothesis, MaxPrinVerdict};

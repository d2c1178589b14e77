use pucci_core::OpSign;

use crate::integrate::ShootParams;

/// Tolerated slack when deciding which branch of the step function is
/// sign-consistent; candidates this close to zero count as consistent.
const BRANCH_SLACK: f64 = 1e-14;

/// u^p extended to u < 0 as sign(u)|u|^p so root bracketing sees a smooth
/// function; everything is classified at the first zero anyway.
pub(crate) fn forcing(u: f64, p: f64) -> f64 {
    u.signum() * u.abs().powf(p)
}

/// Weight the extremal operator puts on an eigenvalue of sign `s`.
fn weight(s: f64, params: &ShootParams) -> f64 {
    let favour_high = match params.op {
        OpSign::Plus => s > 0.0,
        OpSign::Minus => s < 0.0,
    };
    if favour_high {
        params.ell.lambda2()
    } else {
        params.ell.lambda1()
    }
}

/// Solves theta(u'')u'' + (n-1) theta(u'/r)(u'/r) + u^p = 0 for u''.
///
/// Both candidate values -K/lambda1 and -K/lambda2 are formed, where K
/// collects the known terms; exactly one candidate has the sign its own
/// branch assumed (both vanish when K = 0). `r = 0` is the regular center:
/// there u'/r tends to u'' itself, all eigenvalues coincide, and the
/// equation becomes n theta(u'') u'' + u^p = 0; it requires v = 0.
pub fn radial_rhs(r: f64, u: f64, v: f64, params: &ShootParams) -> f64 {
    let up = forcing(u, params.p);
    if r == 0.0 {
        assert!(v == 0.0, "center evaluation requires u'(0) = 0, got {v}");
        // All n eigenvalues share the sign of u''(0), which is -sign(u^p).
        return -up / (params.n as f64 * weight(-up, params));
    }
    assert!(r > 0.0, "radius must be nonnegative, got {r}");
    let s = v / r;
    let k = (params.n - 1) as f64 * weight(s, params) * s + up;

    let scale = 1.0 + k.abs();
    for lambda in [params.ell.lambda1(), params.ell.lambda2()] {
        let candidate = -k / lambda;
        // Consistent when theta(candidate) == lambda for this operator.
        if (weight(candidate, params) - lambda).abs() == 0.0
            || candidate.abs() <= BRANCH_SLACK * scale
        {
            return candidate;
        }
    }
    unreachable!(
        "no sign-consistent branch for r={r} u={u} v={v} (K={k}); \
         the two candidates were {} and {}",
        -k / params.ell.lambda1(),
        -k / params.ell.lambda2()
    );
}

use pucci_core::{Ellipticity, OpSign};
use serde::{Deserialize, Serialize};

/// Eigenvalues of the Hessian of a radial function psi(|x|) at radius r:
/// psi''(r) along the radial direction and psi'(r)/r on its orthogonal
/// complement, with multiplicity n - 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialHessianEigs {
    pub simple: f64,
    pub repeated: f64,
    pub multiplicity: usize,
}

/// Packages the two radial Hessian eigenvalues. `psi2` is psi''(r),
/// `psi1_over_r` is psi'(r)/r.
pub fn radial_hessian_eigs(psi2: f64, psi1_over_r: f64, n: usize) -> RadialHessianEigs {
    assert!(n >= 2, "dimension must be at least 2, got {n}");
    RadialHessianEigs {
        simple: psi2,
        repeated: psi1_over_r,
        multiplicity: n - 1,
    }
}

/// Weight applied to a single eigenvalue: lambda2 on the side the extremum
/// favours, lambda1 on the other. Written as a max/min of the two products so
/// the duality -theta_minus(-s)s = theta_plus(s)s is bit-exact.
fn weighted(s: f64, ell: Ellipticity, sign: OpSign) -> f64 {
    let a = ell.lambda1() * s;
    let b = ell.lambda2() * s;
    match sign {
        OpSign::Plus => a.max(b),
        OpSign::Minus => a.min(b),
    }
}

/// Evaluates the extremal operator on the radial Hessian spectrum
/// {psi'' (simple), psi'/r (times n-1)} in closed form.
pub fn pucci_on_radial(
    psi2: f64,
    psi1_over_r: f64,
    n: usize,
    ell: Ellipticity,
    sign: OpSign,
) -> f64 {
    assert!(n >= 2, "dimension must be at least 2, got {n}");
    weighted(psi2, ell, sign) + (n - 1) as f64 * weighted(psi1_over_r, ell, sign)
}

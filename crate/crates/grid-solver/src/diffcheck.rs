use pucci_core::{Ellipticity, OpSign};
use serde::Serialize;

use crate::domain::GridDomain;
use crate::error::Error;
use crate::field::{expect_len, GridField};
use crate::operator::apply_operator;
use crate::parabolic::pinned_mask;
use crate::scheme::SchemeParams;

/// Result of testing the difference inequality on `v = u2 - u1`: `max_value`
/// is the largest value of `M^-(D^2 v) - gamma |Dv| + c v` (minus the time
/// increment in the parabolic variant) over the checked nodes. A
/// nonpositive `max_value`, up to scheme error, is what the comparison
/// structure of the operator predicts.
#[derive(Clone, Debug, Serialize)]
pub struct DiffReport {
    pub max_value: f64,
    pub worst_point: [f64; 2],
    pub checked_nodes: usize,
}

/// Secant slope `(f(b) - f(a)) / (b - a)`, zero on coincident values: the
/// zero-order coefficient that turns a difference of solutions into a
/// solution of a linear inequality.
fn secant_field(u1: &[f64], u2: &[f64], f: &impl Fn(f64) -> f64) -> Vec<f64> {
    u1.iter()
        .zip(u2)
        .map(|(&a, &b)| if a == b { 0.0 } else { (f(b) - f(a)) / (b - a) })
        .collect()
}

fn diff_fields(
    u1: &GridField,
    b1: &GridField,
    u2: &GridField,
    b2: &GridField,
    dom: &GridDomain,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let n = dom.node_count();
    expect_len(u1, n)?;
    expect_len(u2, n)?;
    expect_len(b1, dom.boundary_count())?;
    expect_len(b2, dom.boundary_count())?;
    let v = u2
        .values()
        .iter()
        .zip(u1.values())
        .map(|(a, b)| a - b)
        .collect();
    let vb = b2
        .values()
        .iter()
        .zip(b1.values())
        .map(|(a, b)| a - b)
        .collect();
    Ok((v, vb))
}

/// Evaluates `M^-_h(D^2 v) - gamma |Dv| + c v` on `v = u2 - u1` with
/// `c` the pointwise secant of `f` between the two fields, and reports the
/// maximum over all interior nodes. For `u1`, `u2` sub/supersolution pairs
/// of the same equation `F + f = 0` the continuum value is nonpositive.
#[allow(clippy::too_many_arguments)]
pub fn diff_inequality_check(
    u1: &GridField,
    b1: &GridField,
    u2: &GridField,
    b2: &GridField,
    f: impl Fn(f64) -> f64 + Sync,
    dom: &GridDomain,
    ell: Ellipticity,
    sp: &SchemeParams,
) -> Result<DiffReport, Error> {
    let (v, vb) = diff_fields(u1, b1, u2, b2, dom)?;
    let c = secant_field(u1.values(), u2.values(), &f);
    let zeros = vec![0.0; v.len()];
    let v = GridField::from_raw(v);
    let vb = GridField::from_raw(vb);
    let c = GridField::from_raw(c);
    let g = GridField::from_raw(zeros);
    let out = apply_operator(&v, dom, ell, OpSign::Minus, sp, &c, &g, &vb)?;

    let mut max_value = f64::NEG_INFINITY;
    let mut worst = 0usize;
    for (i, &val) in out.values().iter().enumerate() {
        if val > max_value {
            max_value = val;
            worst = i;
        }
    }
    Ok(DiffReport {
        max_value,
        worst_point: dom.node_xy(worst),
        checked_nodes: dom.node_count(),
    })
}

/// Parabolic variant: for consecutive time slices the defect is
/// `M^-_h(D^2 v_k) - gamma |Dv_k| + c_k v_k - (v_{k+1} - v_k)/dt`,
/// maximised over steps and free (non-pinned) nodes. Pinned nodes hold
/// boundary values and are excluded; their update rule is not the scheme.
#[allow(clippy::too_many_arguments)]
pub fn diff_inequality_check_parabolic(
    steps1: &[GridField],
    steps2: &[GridField],
    b1: &GridField,
    b2: &GridField,
    dt: f64,
    f: impl Fn(f64) -> f64 + Sync,
    dom: &GridDomain,
    ell: Ellipticity,
    sp: &SchemeParams,
) -> Result<DiffReport, Error> {
    if steps1.len() != steps2.len() {
        return Err(Error::BadParams(
            "trajectories must have the same number of slices".into(),
        ));
    }
    if steps1.len() < 2 {
        return Err(Error::BadParams("need at least two time slices".into()));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::BadParams("dt must be positive and finite".into()));
    }

    let pinned = pinned_mask(dom);
    let free_count = pinned.iter().filter(|p| !*p).count();
    let mut max_value = f64::NEG_INFINITY;
    let mut worst = 0usize;

    for k in 0..steps1.len() - 1 {
        let (v, vb) = diff_fields(&steps1[k], b1, &steps2[k], b2, dom)?;
        let (v_next, _) = diff_fields(&steps1[k + 1], b1, &steps2[k + 1], b2, dom)?;
        let c = secant_field(steps1[k].values(), steps2[k].values(), &f);
        let zeros = vec![0.0; v.len()];
        let vf = GridField::from_raw(v.clone());
        let out = apply_operator(
            &vf,
            dom,
            ell,
            OpSign::Minus,
            sp,
            &GridField::from_raw(c),
            &GridField::from_raw(zeros),
            &GridField::from_raw(vb),
        )?;
        for (i, &val) in out.values().iter().enumerate() {
            if pinned[i] {
                continue;
            }
            let defect = val - (v_next[i] - v[i]) / dt;
            if defect > max_value {
                max_value = defect;
                worst = i;
            }
        }
    }

    Ok(DiffReport {
        max_value,
        worst_point: dom.node_xy(worst),
        checked_nodes: free_count,
    })
}

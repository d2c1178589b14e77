use pucci_core::{Ellipticity, OpSign};
use rayon::prelude::*;

use crate::domain::{ArmEnd, GridDomain};
use crate::error::Error;
use crate::field::{expect_len, GridField};
use crate::operator::{phi, worst_case_diagonals, Kernel};
use crate::reflect::asymmetry_of_slice;
use crate::scheme::SchemeParams;

/// Explicit evolution aborts once the sup norm exceeds this; blow-up is a
/// legitimate outcome for supercritical forcing, not an error.
pub const BLOWUP_CAP: f64 = 1e8;

const PIN_RHO_MAX: f64 = 0.2;

/// Time history of an explicit parabolic run. Metrics are recorded for the
/// initial state and after every step; `snapshots` keeps `(step, field)`
/// pairs at the requested stride (plus step 0).
#[derive(Clone, Debug)]
pub struct ParabolicTrajectory {
    pub times: Vec<f64>,
    pub asymmetry: Vec<f64>,
    pub monotonicity_defect: Vec<f64>,
    pub snapshots: Vec<(usize, GridField)>,
    pub final_field: GridField,
    pub dt: f64,
    pub steps_taken: usize,
    pub blew_up: bool,
}

/// Marks nodes with any boundary cut shorter than `min(h, 0.2)` of the arm
/// length. Such cuts make the explicit stability bound collapse (the scheme
/// diagonal grows like 1/rho), so the evolution holds these nodes at the
/// boundary value of their shortest cut instead of stepping them.
pub fn pinned_mask(dom: &GridDomain) -> Vec<bool> {
    let thr = dom.h().min(PIN_RHO_MAX);
    let short = |e: ArmEnd| matches!(e, ArmEnd::Cut { rho, .. } if rho < thr);
    (0..dom.node_count())
        .map(|i| {
            (0..dom.lines().len()).any(|l| {
                let arm = dom.arm(i, l);
                short(arm.fwd) || short(arm.bwd)
            })
        })
        .collect()
}

/// Boundary value of the shortest cut of a pinned node. Ties are broken by
/// line order and forward before backward, which is deterministic and picks
/// mirror-image cuts for mirror-image nodes.
fn pin_value(dom: &GridDomain, bdry: &[f64], node: usize) -> f64 {
    let mut best: Option<(f64, f64)> = None;
    for l in 0..dom.lines().len() {
        let arm = dom.arm(node, l);
        for end in [arm.fwd, arm.bwd] {
            if let ArmEnd::Cut { rho, bp } = end {
                if best.is_none_or(|(r, _)| rho < r) {
                    best = Some((rho, bdry[bp as usize]));
                }
            }
        }
    }
    best.expect("pinned nodes have at least one cut").1
}

/// Largest positive part of `u(x1,x2) - u(-x1,x2)` over nodes with
/// `x1 <= 0`: zero exactly when `u` is monotone across the vertical axis in
/// the reflected sense.
pub(crate) fn monotone_defect_of(dom: &GridDomain, v: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (id, &(i, j)) in dom.nodes().iter().enumerate() {
        if i > 0 {
            continue;
        }
        let mid = dom
            .node_id(-i, j)
            .expect("node masks of the shipped shapes are symmetric");
        let d = v[id] - v[mid];
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Runs explicit Euler on `u_t = F_h[u] + f(u)` with `c = g = 0` inside
/// `F_h` and Dirichlet data on the boundary cuts.
///
/// The step is `cfl / max(worst-case scheme diagonal)` over free
/// (non-pinned) nodes, which keeps the update monotone in the stencil
/// values. `f` must be globally Lipschitz on the range traversed or the cap
/// check will flag blow-up.
#[allow(clippy::too_many_arguments)]
pub fn evolve_parabolic(
    u0: &GridField,
    dom: &GridDomain,
    ell: Ellipticity,
    op: OpSign,
    sp: &SchemeParams,
    f: impl Fn(f64) -> f64 + Sync,
    boundary: &GridField,
    t_end: f64,
    snapshot_stride: usize,
) -> Result<ParabolicTrajectory, Error> {
    sp.validate()?;
    if sp.n_dirs != dom.n_dirs() {
        return Err(Error::DirectionMismatch {
            dom: dom.n_dirs(),
            sp: sp.n_dirs,
        });
    }
    let n = dom.node_count();
    expect_len(u0, n)?;
    expect_len(boundary, dom.boundary_count())?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::BadParams("t_end must be positive and finite".into()));
    }

    let pinned = pinned_mask(dom);
    let bdry = boundary.values();
    let pins: Vec<f64> = (0..n)
        .map(|i| if pinned[i] { pin_value(dom, bdry, i) } else { 0.0 })
        .collect();

    let wc = worst_case_diagonals(dom, ell, sp.gamma);
    let mut maxd = 0.0f64;
    for i in 0..n {
        if !pinned[i] {
            maxd = maxd.max(wc[i]);
        }
    }
    if maxd == 0.0 {
        return Err(Error::BadParams(
            "every interior node is pinned; refine the mesh".into(),
        ));
    }
    let dt = sp.cfl / maxd;

    let mut u: Vec<f64> = u0.values().to_vec();
    for i in 0..n {
        if pinned[i] {
            u[i] = pins[i];
        }
    }

    let mut times = vec![0.0];
    let mut asymmetry = vec![asymmetry_of_slice(dom, &u)];
    let mut defect = vec![monotone_defect_of(dom, &u)];
    let mut snapshots = Vec::new();
    if snapshot_stride > 0 {
        snapshots.push((0usize, GridField::from_raw(u.clone())));
    }

    let total_steps = (t_end / dt).ceil().max(1.0) as usize;
    let mut blew_up = false;
    let mut steps_taken = 0;

    for k in 1..=total_steps {
        let dtk = if k == total_steps {
            (t_end - dt * (k - 1) as f64).min(dt)
        } else {
            dt
        };
        let kernel = Kernel {
            dom,
            u: &u,
            bdry,
        };
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                if pinned[i] {
                    return pins[i];
                }
                let p = kernel.parts(i);
                let rate = phi(op, ell, p.d2_max) + phi(op, ell, p.d2_min)
                    - sp.gamma * p.grad
                    + f(u[i]);
                u[i] + dtk * rate
            })
            .collect();
        u = next;
        steps_taken = k;
        times.push(dt * (k - 1) as f64 + dtk);
        asymmetry.push(asymmetry_of_slice(dom, &u));
        defect.push(monotone_defect_of(dom, &u));
        if snapshot_stride > 0 && k % snapshot_stride == 0 {
            snapshots.push((k, GridField::from_raw(u.clone())));
        }
        let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !sup.is_finite() || sup > BLOWUP_CAP {
            blew_up = true;
            break;
        }
    }

    Ok(ParabolicTrajectory {
        times,
        asymmetry,
        monotonicity_defect: defect,
        snapshots,
        final_field: GridField::from_raw(u),
        dt,
        steps_taken,
        blew_up,
    })
}

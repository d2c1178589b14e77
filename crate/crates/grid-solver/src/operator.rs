use pucci_core::{Ellipticity, OpSign};
use rayon::prelude::*;

use crate::domain::{ArmEnd, GridDomain};
use crate::error::Error;
use crate::field::{expect_len, GridField};
use crate::scheme::SchemeParams;

/// Extremal weight of one curvature sample. Written as a max/min of the two
/// products so that phi_minus(s) = -phi_plus(-s) holds bit for bit.
pub(crate) fn phi(op: OpSign, ell: Ellipticity, s: f64) -> f64 {
    let a = ell.lambda1() * s;
    let b = ell.lambda2() * s;
    match op {
        OpSign::Plus => a.max(b),
        OpSign::Minus => a.min(b),
    }
}

/// Second differences and upwind gradient data of one field at one node.
#[derive(Clone, Copy, Debug)]
pub(crate) struct NodeParts {
    pub d2_max: f64,
    pub line_max: usize,
    pub d2_min: f64,
    pub line_min: usize,
    /// Upwind gradient magnitude max(0, max_e (u0 - u(x + delta e)) / delta).
    pub grad: f64,
    /// Ray achieving it: (line, forward?), None when the gradient is zero.
    pub grad_ray: Option<(usize, bool)>,
}

/// Read-only view pairing a domain with interior and boundary values.
pub(crate) struct Kernel<'a> {
    pub dom: &'a GridDomain,
    pub u: &'a [f64],
    pub bdry: &'a [f64],
}

impl Kernel<'_> {
    fn end(&self, e: ArmEnd) -> Option<(f64, f64)> {
        match e {
            ArmEnd::Node(k) => Some((self.u[k as usize], 1.0)),
            ArmEnd::Cut { rho, bp } => Some((self.bdry[bp as usize], rho)),
            ArmEnd::Blocked => None,
        }
    }

    /// Evaluates every directional difference at one node. The max/min scans
    /// run in a fixed line order with first-wins ties, and each three-point
    /// formula is a single fixed expression, so symmetric inputs produce bit
    /// identical outputs.
    pub fn parts(&self, node: usize) -> NodeParts {
        let dom = self.dom;
        let u0 = self.u[node];
        let mut out = NodeParts {
            d2_max: f64::NEG_INFINITY,
            line_max: usize::MAX,
            d2_min: f64::INFINITY,
            line_min: usize::MAX,
            grad: 0.0,
            grad_ray: None,
        };
        for l in 0..dom.lines().len() {
            let arm = dom.arm(node, l);
            let delta = dom.delta(l);
            let f = self.end(arm.fwd);
            let b = self.end(arm.bwd);
            if let (Some((vf, rf)), Some((vb, rb))) = (f, b) {
                let s = rf + rb;
                // End contributions are summed first: addition commutes, so
                // the value is bit-identical when a symmetry swaps the two
                // ends of the line.
                let d2 =
                    2.0 * ((vf / (rf * s) + vb / (rb * s)) - u0 / (rf * rb)) / (delta * delta);
                if d2 > out.d2_max {
                    out.d2_max = d2;
                    out.line_max = l;
                }
                if d2 < out.d2_min {
                    out.d2_min = d2;
                    out.line_min = l;
                }
            }
            for (end, is_fwd) in [(f, true), (b, false)] {
                if let Some((v, rho)) = end {
                    let slope = (u0 - v) / (rho * delta);
                    if slope > out.grad {
                        out.grad = slope;
                        out.grad_ray = Some((l, is_fwd));
                    }
                }
            }
        }
        debug_assert!(out.line_max != usize::MAX, "isolated node {node}");
        out
    }
}

/// Applies the discrete operator
/// `F_h[u] = phi_op(e_max) + phi_op(e_min) - gamma*|Du| + c*u + g`
/// at every interior node, where e_max/e_min are the extreme second
/// directional differences over the stencil lines and |Du| is the monotone
/// upwind gradient. Boundary ends use the three-point formula through the
/// exact cut, which is exact on quadratics for any cut fraction.
#[allow(clippy::too_many_arguments)]
pub fn apply_operator(
    u: &GridField,
    dom: &GridDomain,
    ell: Ellipticity,
    op: OpSign,
    sp: &SchemeParams,
    c: &GridField,
    g: &GridField,
    boundary: &GridField,
) -> Result<GridField, Error> {
    sp.validate()?;
    if sp.n_dirs != dom.n_dirs() {
        return Err(Error::DirectionMismatch {
            dom: dom.n_dirs(),
            sp: sp.n_dirs,
        });
    }
    let n = dom.node_count();
    expect_len(u, n)?;
    expect_len(c, n)?;
    expect_len(g, n)?;
    expect_len(boundary, dom.boundary_count())?;

    let kernel = Kernel {
        dom,
        u: u.values(),
        bdry: boundary.values(),
    };
    let gamma = sp.gamma;
    let (uv, cv, gv) = (u.values(), c.values(), g.values());
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = kernel.parts(i);
            phi(op, ell, p.d2_max) + phi(op, ell, p.d2_min) - gamma * p.grad + cv[i] * uv[i] + gv[i]
        })
        .collect();
    Ok(GridField::from_raw(values))
}

/// Per-node upper bound on the magnitude of the operator's dependence on the
/// centre value, maximised over every direction/weight policy:
/// `lambda2 * (two largest second-difference centre weights) + gamma * max_ray 1/dist`.
/// Used for explicit step sizes and for the diagonally weighted residual.
pub fn worst_case_diagonals(dom: &GridDomain, ell: Ellipticity, gamma: f64) -> Vec<f64> {
    let n = dom.node_count();
    (0..n)
        .map(|i| {
            let (mut top1, mut top2) = (0.0f64, 0.0f64);
            let mut inv_dist = 0.0f64;
            let mut lines_usable = 0;
            for l in 0..dom.lines().len() {
                let arm = dom.arm(i, l);
                let delta = dom.delta(l);
                let rho = |e: ArmEnd| match e {
                    ArmEnd::Node(_) => Some(1.0),
                    ArmEnd::Cut { rho, .. } => Some(rho),
                    ArmEnd::Blocked => None,
                };
                let (rf, rb) = (rho(arm.fwd), rho(arm.bwd));
                if let (Some(rf), Some(rb)) = (rf, rb) {
                    let a0 = 2.0 / (delta * delta * rf * rb);
                    if a0 > top1 {
                        top2 = top1;
                        top1 = a0;
                    } else if a0 > top2 {
                        top2 = a0;
                    }
                    lines_usable += 1;
                }
                for r in [rf, rb].into_iter().flatten() {
                    inv_dist = inv_dist.max(1.0 / (r * delta));
                }
            }
            // With a single usable line both extreme differences fall on it.
            if lines_usable == 1 {
                top2 = top1;
            }
            ell.lambda2() * (top1 + top2) + gamma * inv_dist
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Shape;

    fn ell() -> Ellipticity {
        Ellipticity::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn phi_duality_is_bit_exact() {
        for s in [-2.0, -1.0e-3, 0.0, 0.7, 3.5, 1.0e8] {
            let plus = phi(OpSign::Plus, ell(), s);
            let minus = phi(OpSign::Minus, ell(), -s);
            assert_eq!(plus.to_bits(), (-minus).to_bits());
        }
    }

    #[test]
    fn aligned_saddle_evaluates_exactly() {
        // Hessian diag(1, -1): plus gives 2 - 1 = 1, minus gives 1 - 2 = -1.
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, 0.0625, 16).unwrap();
        let q = |x: f64, y: f64| 0.5 * (x * x - y * y);
        let u = GridField::sample_interior(&dom, q);
        let b = GridField::sample_boundary(&dom, q);
        let zero = GridField::fill_interior(&dom, 0.0);
        let sp = SchemeParams {
            n_dirs: 16,
            ..SchemeParams::default()
        };
        let plus = apply_operator(&u, &dom, ell(), OpSign::Plus, &sp, &zero, &zero, &b).unwrap();
        let minus = apply_operator(&u, &dom, ell(), OpSign::Minus, &sp, &zero, &zero, &b).unwrap();
        for i in 0..dom.node_count() {
            let cut_free = (0..dom.lines().len()).all(|l| {
                let arm = dom.arm(i, l);
                matches!(arm.fwd, ArmEnd::Node(_)) && matches!(arm.bwd, ArmEnd::Node(_))
            });
            if cut_free {
                assert!(
                    (plus.values()[i] - 1.0).abs() <= 1e-12,
                    "plus at node {i}: {}",
                    plus.values()[i]
                );
                assert!((minus.values()[i] + 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, 0.25, 8).unwrap();
        let u = GridField::fill_interior(&dom, 0.0);
        let b = GridField::fill_boundary(&dom, 0.0);
        let sp = SchemeParams {
            n_dirs: 16,
            ..SchemeParams::default()
        };
        assert!(matches!(
            apply_operator(&u, &dom, ell(), OpSign::Plus, &sp, &u, &u, &b),
            Err(Error::DirectionMismatch { .. })
        ));
        let sp8 = SchemeParams {
            n_dirs: 8,
            ..SchemeParams::default()
        };
        let short = GridField::from_values(vec![0.0; 3]).unwrap();
        assert!(matches!(
            apply_operator(&short, &dom, ell(), OpSign::Plus, &sp8, &u, &u, &b),
            Err(Error::FieldSize { .. })
        ));
    }

    #[test]
    fn worst_case_diagonal_bounds_the_assembled_one() {
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, 0.125, 8).unwrap();
        let d = worst_case_diagonals(&dom, ell(), 0.5);
        let h = 0.125;
        for (i, &di) in d.iter().enumerate() {
            // At least the two axis second differences with unit arms.
            assert!(di >= 2.0 * 2.0 / (h * h), "node {i} diagonal {di}");
            assert!(di.is_finite());
        }
    }
}

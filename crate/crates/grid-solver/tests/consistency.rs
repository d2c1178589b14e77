use grid_solver::{
    apply_operator, worst_case_diagonals, ArmEnd, GridDomain, GridField, SchemeParams, Shape,
};
use pucci_core::{Ellipticity, OpSign};
use radial_core::pucci_on_radial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(n_dirs: usize, gamma: f64) -> SchemeParams {
    SchemeParams {
        n_dirs,
        gamma,
        ..SchemeParams::default()
    }
}

fn zeros(n: usize) -> GridField {
    GridField::from_values(vec![0.0; n]).unwrap()
}

fn cut_free(dom: &GridDomain, id: usize) -> bool {
    (0..dom.lines().len()).all(|l| {
        let a = dom.arm(id, l);
        matches!(a.fwd, ArmEnd::Node(_)) && matches!(a.bwd, ArmEnd::Node(_))
    })
}

#[test]
fn quadratics_evaluate_exactly_away_from_the_boundary() {
    // Second differences along lattice lines reproduce directional second
    // derivatives of quadratics with no truncation error; only rounding is
    // left, and that stays far below 1e-12 at interior spacing.
    let h = 1.0 / 16.0;
    let (a11, a12, a22) = (0.5, 0.125, -0.25);
    let q = |x: f64, y: f64| 0.5 * a11 * x * x + a12 * x * y + 0.5 * a22 * y * y;
    let ell = Ellipticity::new(1.0, 2.0).unwrap();

    for n_dirs in [8usize, 16, 40] {
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, n_dirs).unwrap();
        let sp = params(n_dirs, 0.0);
        let u = GridField::sample_interior(&dom, q);
        let b = GridField::sample_boundary(&dom, q);
        let n = dom.node_count();
        for op in [OpSign::Plus, OpSign::Minus] {
            let out = apply_operator(&u, &dom, ell, op, &sp, &zeros(n), &zeros(n), &b).unwrap();
            // Directional curvatures of the quadratic over the line family.
            let mut dmax = f64::NEG_INFINITY;
            let mut dmin = f64::INFINITY;
            for &(ex, ey) in dom.lines() {
                let (ex, ey) = (ex as f64, ey as f64);
                let e2 = ex * ex + ey * ey;
                let d = (a11 * ex * ex + 2.0 * a12 * ex * ey + a22 * ey * ey) / e2;
                dmax = dmax.max(d);
                dmin = dmin.min(d);
            }
            let phi = |s: f64| match op {
                OpSign::Plus => (ell.lambda1() * s).max(ell.lambda2() * s),
                OpSign::Minus => (ell.lambda1() * s).min(ell.lambda2() * s),
            };
            let expect = phi(dmax) + phi(dmin);
            let mut worst = 0.0f64;
            for id in 0..n {
                if cut_free(&dom, id) {
                    worst = worst.max((out.values()[id] - expect).abs());
                }
            }
            println!("quadratic n_dirs={n_dirs} op={op:?}: worst deviation {worst:.3e}");
            assert!(worst <= 1e-12, "n_dirs={n_dirs} op={op:?}: {worst}");
        }
    }
}

#[test]
fn constant_fields_are_annihilated() {
    // A constant with matching boundary data is in the kernel of the pure
    // second-order scheme. At interior spacing the cancellation is exact in
    // floating point; at boundary cuts rounding is amplified by the same
    // 1/rho factors as the scheme diagonal, so the check normalises by the
    // diagonal weight used for solver residuals.
    let k = 3.7;
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let h = 1.0 / 16.0;
    for n_dirs in [16usize, 40] {
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, n_dirs).unwrap();
        let sp = params(n_dirs, 0.0);
        let n = dom.node_count();
        let u = GridField::from_values(vec![k; n]).unwrap();
        let b = GridField::from_values(vec![k; dom.boundary_count()]).unwrap();
        let diag = worst_case_diagonals(&dom, ell, 0.0);
        for op in [OpSign::Plus, OpSign::Minus] {
            let out = apply_operator(&u, &dom, ell, op, &sp, &zeros(n), &zeros(n), &b).unwrap();
            let mut worst_free = 0.0f64;
            let mut worst_weighted = 0.0f64;
            for (id, &d) in diag.iter().enumerate() {
                let w = 1.0 + h * h * d / (4.0 * ell.lambda2());
                let v = out.values()[id].abs();
                if cut_free(&dom, id) {
                    worst_free = worst_free.max(v);
                }
                worst_weighted = worst_weighted.max(v / w);
            }
            println!("constant n_dirs={n_dirs} op={op:?}: cut-free {worst_free:.3e}, weighted {worst_weighted:.3e}");
            assert_eq!(worst_free, 0.0, "n_dirs={n_dirs} op={op:?}");
            assert!(worst_weighted <= 1e-12, "n_dirs={n_dirs}: {worst_weighted}");
        }
    }
}

#[test]
fn radial_fields_converge_at_second_order_in_h_and_angle() {
    // u = exp(-r^2) has Hessian eigenvalues u'' (radial) and u'/r
    // (tangential); the two-dimensional extremal operator of that pair is
    // the continuum reference. Scheme error = O(h^2) truncation plus
    // O(dtheta^2) from resolving the principal directions with finitely
    // many lines.
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let u_exact = |x: f64, y: f64| (-(x * x + y * y)).exp();
    let mut table = Vec::new();
    for (h, n_dirs) in [
        (1.0 / 16.0, 16usize),
        (1.0 / 32.0, 16),
        (1.0 / 16.0, 40),
        (1.0 / 32.0, 40),
    ] {
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, n_dirs).unwrap();
        let sp = params(n_dirs, 0.0);
        let n = dom.node_count();
        let u = GridField::sample_interior(&dom, u_exact);
        let b = GridField::sample_boundary(&dom, u_exact);
        for op in [OpSign::Plus, OpSign::Minus] {
            let out = apply_operator(&u, &dom, ell, op, &sp, &zeros(n), &zeros(n), &b).unwrap();
            let mut worst = 0.0f64;
            for id in 0..n {
                if !cut_free(&dom, id) {
                    continue;
                }
                let [x, y] = dom.node_xy(id);
                let r2 = x * x + y * y;
                let e = (-r2).exp();
                let psi2 = (4.0 * r2 - 2.0) * e;
                let psi1_over_r = -2.0 * e;
                let cont = pucci_on_radial(psi2, psi1_over_r, 2, ell, op);
                worst = worst.max((out.values()[id] - cont).abs());
            }
            println!("radial h={h} n_dirs={n_dirs} op={op:?}: err {worst:.3e}");
            table.push(((h, n_dirs, op), worst));
        }
    }
    // Frozen from the measurements above (x2 headroom).
    let bound = |h: f64, n_dirs: usize| -> f64 {
        let dtheta2 = if n_dirs == 16 { 5.4e-2 } else { 4.8e-3 };
        2.0 * (2.0 * h * h * 17.0 + 0.6 * dtheta2)
    };
    for ((h, n_dirs, op), err) in &table {
        assert!(
            *err <= bound(*h, *n_dirs),
            "h={h} n_dirs={n_dirs} op={op:?}: {err} > {}",
            bound(*h, *n_dirs)
        );
    }
    // Refining both mesh and family must reduce the error.
    let coarse = table
        .iter()
        .find(|((h, d, op), _)| *h == 1.0 / 16.0 && *d == 16 && *op == OpSign::Minus)
        .unwrap()
        .1;
    let fine = table
        .iter()
        .find(|((h, d, op), _)| *h == 1.0 / 32.0 && *d == 40 && *op == OpSign::Minus)
        .unwrap()
        .1;
    assert!(fine < coarse, "fine {fine} coarse {coarse}");
}

#[test]
fn upwind_gradient_is_exact_for_axis_aligned_slopes() {
    let h = 1.0 / 16.0;
    let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, 16).unwrap();
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let sp = params(16, 1.0);
    let n = dom.node_count();
    let u = GridField::sample_interior(&dom, |x, _| 0.75 * x);
    let b = GridField::sample_boundary(&dom, |x, _| 0.75 * x);
    let out = apply_operator(&u, &dom, ell, OpSign::Minus, &sp, &zeros(n), &zeros(n), &b).unwrap();
    // Linear field: all curvatures vanish, F = -gamma * |Du| = -0.75.
    let mut worst = 0.0f64;
    for id in 0..n {
        worst = worst.max((out.values()[id] + 0.75).abs());
    }
    println!("axis-aligned gradient worst deviation {worst:.3e}");
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn upwind_gradient_resolves_misaligned_slopes_to_angular_accuracy() {
    let h = 1.0 / 16.0;
    let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, 16).unwrap();
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let sp = params(16, 1.0);
    let n = dom.node_count();
    // gradient (0.6, 0.45), |Du| = 0.75, direction between family rays.
    let u = GridField::sample_interior(&dom, |x, y| 0.6 * x + 0.45 * y);
    let b = GridField::sample_boundary(&dom, |x, y| 0.6 * x + 0.45 * y);
    let out = apply_operator(&u, &dom, ell, OpSign::Minus, &sp, &zeros(n), &zeros(n), &b).unwrap();
    for id in 0..n {
        let g = -out.values()[id];
        assert!(g <= 0.75 + 1e-13, "overshoot {g}");
        // cos of the largest angular gap of the 16-ray family is > 0.973.
        assert!(g >= 0.75 * 0.973, "undershoot {g}");
    }
}

#[test]
fn plus_and_minus_operators_are_bit_exact_duals_without_drift() {
    let h = 0.125;
    let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, 16).unwrap();
    let ell = Ellipticity::new(0.7, 2.3).unwrap();
    let sp = params(16, 0.0);
    let n = dom.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..dom.boundary_count())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();

    let uf = GridField::from_values(u.clone()).unwrap();
    let neg_uf = GridField::from_values(u.iter().map(|v| -v).collect()).unwrap();
    let cf = GridField::from_values(c).unwrap();
    let gf = GridField::from_values(g.clone()).unwrap();
    let neg_gf = GridField::from_values(g.iter().map(|v| -v).collect()).unwrap();
    let bf = GridField::from_values(b.clone()).unwrap();
    let neg_bf = GridField::from_values(b.iter().map(|v| -v).collect()).unwrap();

    let plus = apply_operator(&uf, &dom, ell, OpSign::Plus, &sp, &cf, &gf, &bf).unwrap();
    let minus = apply_operator(&neg_uf, &dom, ell, OpSign::Minus, &sp, &cf, &neg_gf, &neg_bf)
        .unwrap();
    for (a, b) in plus.values().iter().zip(minus.values()) {
        assert_eq!(a.to_bits(), (-b).to_bits());
    }
}

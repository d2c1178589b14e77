use grid_solver::{
    reflection_difference, solve_dirichlet_nonlinear, GridDomain, GridField, SchemeParams, Shape,
};
use pucci_core::{Ellipticity, OpSign};

#[test]
fn moving_plane_stays_nonnegative_on_a_solved_positive_solution() {
    // Solve M^-(D^2 u) + u^3 + 1 = 0 with zero boundary data on the unit
    // disc. The solution is positive and radially decreasing, so for every
    // plane x = lambda < 0 the reflected difference u(x^lambda) - u(x) is
    // nonnegative on the cap; the scheme may undershoot by its own error.
    let h = 1.0 / 32.0;
    let dom = GridDomain::new(Shape::Disc { r: 1.0 }, h, 16).unwrap();
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let sp = SchemeParams {
        n_dirs: 16,
        residual_tol: 1e-10,
        ..SchemeParams::default()
    };
    let n = dom.node_count();
    let zeros = GridField::from_values(vec![0.0; n]).unwrap();
    let g = GridField::from_values(vec![1.0; n]).unwrap();
    let b = GridField::from_values(vec![0.0; dom.boundary_count()]).unwrap();
    let (u, rep) = solve_dirichlet_nonlinear(
        &dom,
        ell,
        OpSign::Minus,
        &sp,
        &zeros,
        &g,
        &b,
        |s| s * s * s,
    )
    .unwrap();
    assert!(rep.converged);
    assert!(u.min() > 0.0, "solution should be positive, min {}", u.min());

    // Mix of on-lattice and off-lattice planes, both axes.
    let planes = [
        (-0.5, 1),
        (-0.25, 1),
        (-0.125, 1),
        (-0.137, 1),
        (-0.496, 1),
        (-0.25, 2),
        (-0.031, 2),
    ];
    let mut worst = f64::INFINITY;
    for (lambda, axis) in planes {
        let rf = reflection_difference(&u, &dom, lambda, axis).unwrap();
        assert!(!rf.is_empty(), "cap at lambda={lambda} axis={axis}");
        worst = worst.min(rf.min());
    }
    println!("worst reflected-difference minimum = {worst:.3e} (5h^2 = {:.3e})", 5.0 * h * h);
    assert!(
        worst >= -5.0 * h * h,
        "moving plane violated: {worst} < {}",
        -5.0 * h * h
    );
}

#[test]
fn reflection_skips_nodes_without_interpolation_support() {
    // On the punctured disc the origin node is absent, so caps whose
    // reflection needs it lose exactly those nodes instead of fabricating
    // values.
    let h = 0.125;
    let dom = GridDomain::new(Shape::PuncturedDisc { r: 1.0 }, h, 16).unwrap();
    let full = GridDomain::new(Shape::Disc { r: 1.0 }, h, 16).unwrap();
    let u = GridField::sample_interior(&dom, |x, y| 1.0 - x * x - y * y);
    let uf = GridField::sample_interior(&full, |x, y| 1.0 - x * x - y * y);

    // lambda on the lattice: reflections hit nodes directly; the punctured
    // row loses its partner at the origin.
    let lambda = -0.25;
    let rp = reflection_difference(&u, &dom, lambda, 1).unwrap();
    let rd = reflection_difference(&uf, &full, lambda, 1).unwrap();
    assert!(rp.len() < rd.len());
    // For the radial bump the difference is 4*lambda*(x - lambda) > 0 on
    // the cap; node reflections reproduce it to rounding.
    for (k, &id) in rp.node_ids.iter().enumerate() {
        let [x, _] = dom.node_xy(id);
        let expect = 4.0 * lambda * (x - lambda);
        assert!((rp.values[k] - expect).abs() <= 1e-14, "node {id}");
        assert!(rp.values[k] > 0.0);
    }
}

//! Outcome classification against closed forms and scaling laws.

use pucci_core::{Ellipticity, OpSign};
use radial_core::pucci_on_radial;
use shooting::{radial_rhs, shoot, state_at, trace_to_csv, OutcomeKind, ShootParams};

#[test]
fn ground_state_is_tracked_to_one_part_in_a_million() {
    // U(r) = 3^{1/4} (1 + r^2)^{-1/2} solves the isotropic p = 5 problem in
    // three dimensions; the trace must follow it over [0, 50].
    let alpha = 3f64.powf(0.25);
    let mut params =
        ShootParams::new(3, Ellipticity::new(1.0, 1.0).unwrap(), 5.0, alpha, OpSign::Plus)
            .unwrap();
    params.r_max = 50.0;
    let out = shoot(&params).unwrap();
    assert!(
        matches!(out.kind, OutcomeKind::FastDecay { .. }),
        "{:?}",
        out.kind
    );
    let mut worst = 0f64;
    for t in &out.trace {
        let exact = alpha / (1.0 + t.r * t.r).sqrt();
        worst = worst.max((t.u - exact).abs() / exact);
    }
    assert!(worst <= 1e-6, "worst relative error {worst}");
}

#[test]
fn crossing_radius_scales_with_alpha() {
    // u_lambda(r) = lambda^{2/(p-1)} u(lambda r) maps solutions to solutions,
    // so r_cross * alpha^{(p-1)/2} is an invariant of the profile family.
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let p = 3.0;
    let mut consts = Vec::new();
    for alpha in [0.5, 1.0, 2.0, 4.0] {
        let params = ShootParams::new(3, ell, p, alpha, OpSign::Plus).unwrap();
        match shoot(&params).unwrap().kind {
            OutcomeKind::Crossing { r_cross } => {
                consts.push(r_cross * alpha.powf((p - 1.0) / 2.0))
            }
            other => panic!("alpha = {alpha}: expected crossing, got {other:?}"),
        }
    }
    let mn = consts.iter().cloned().reduce(f64::min).unwrap();
    let mx = consts.iter().cloned().reduce(f64::max).unwrap();
    assert!((mx - mn) / mn <= 1e-6, "spread {}", (mx - mn) / mn);
}

#[test]
fn profiles_decrease_while_positive() {
    for (ell, op) in [
        (Ellipticity::new(1.0, 1.0).unwrap(), OpSign::Plus),
        (Ellipticity::new(1.0, 2.0).unwrap(), OpSign::Plus),
        (Ellipticity::new(1.0, 2.0).unwrap(), OpSign::Minus),
    ] {
        let params = ShootParams::new(4, ell, 3.0, 1.0, op).unwrap();
        let out = shoot(&params).unwrap();
        for w in out.trace.windows(2) {
            if w[0].u > 0.0 && w[1].u > 0.0 {
                assert!(w[1].u < w[0].u, "u not decreasing at r = {}", w[1].r);
            }
        }
        // u' < 0 holds from the first step on while u > 0.
        for t in out.trace.iter().skip(1) {
            if t.u > 0.0 {
                assert!(t.du < 0.0, "u' >= 0 at r = {}", t.r);
            }
        }
    }
}

#[test]
fn crossing_is_bracketed_tightly() {
    let params =
        ShootParams::new(3, Ellipticity::new(1.0, 1.0).unwrap(), 3.0, 1.0, OpSign::Plus).unwrap();
    let out = shoot(&params).unwrap();
    let r_cross = match out.kind {
        OutcomeKind::Crossing { r_cross } => r_cross,
        other => panic!("{other:?}"),
    };
    let s = state_at(&params, r_cross).unwrap();
    // |u| at the refined root is bounded by |u'| times the bracket width.
    assert!(s.u.abs() <= 1e-8, "u(r_cross) = {}", s.u);
    let last = out.trace.last().unwrap();
    assert_eq!(last.u, 0.0);
    assert_eq!(last.r, r_cross);
}

#[test]
fn every_trace_point_satisfies_the_profile_equation() {
    // Branch consistency: reconstructing u'' through the sign resolution and
    // feeding (u'', u'/r) back into the radial operator must reproduce -u^p.
    for (ell, op) in [
        (Ellipticity::new(1.0, 2.0).unwrap(), OpSign::Plus),
        (Ellipticity::new(0.5, 3.0).unwrap(), OpSign::Minus),
    ] {
        let params = ShootParams::new(4, ell, 3.0, 1.0, op).unwrap();
        let out = shoot(&params).unwrap();
        for t in &out.trace {
            if t.r == 0.0 {
                continue;
            }
            let upp = radial_rhs(t.r, t.u, t.du, &params);
            let forcing = t.u.signum() * t.u.abs().powf(params.p);
            let residual = pucci_on_radial(upp, t.du / t.r, params.n, ell, op) + forcing;
            assert!(
                residual.abs() <= 1e-10 * (1.0 + forcing.abs()),
                "residual {residual} at r = {}",
                t.r
            );
        }
    }
}

#[test]
fn trace_exports_as_csv() {
    let params =
        ShootParams::new(3, Ellipticity::new(1.0, 1.0).unwrap(), 3.0, 1.0, OpSign::Plus).unwrap();
    let out = shoot(&params).unwrap();
    let csv = trace_to_csv(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,u,du"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), out.trace.len());
    // Full-precision round trip of the first data row.
    let fields: Vec<f64> = rows[0].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(fields[0].to_bits(), out.trace[0].r.to_bits());
    assert_eq!(fields[1].to_bits(), out.trace[0].u.to_bits());
}

#[test]
fn bad_params_are_rejected() {
    let ell = Ellipticity::new(1.0, 1.0).unwrap();
    assert!(ShootParams::new(2, ell, 3.0, 1.0, OpSign::Plus).is_err());
    assert!(ShootParams::new(3, ell, 1.0, 1.0, OpSign::Plus).is_err());
    assert!(ShootParams::new(3, ell, 3.0, 0.0, OpSign::Plus).is_err());
    let mut p = ShootParams::new(3, ell, 3.0, 1.0, OpSign::Plus).unwrap();
    p.r_max = -1.0;
    assert!(shoot(&p).is_err());
}

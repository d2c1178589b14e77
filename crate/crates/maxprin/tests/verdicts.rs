use maxprin::{
    check_decay_at_infinity, check_punctured, check_weighted_bound, radius_ladder, Branch,
    CoefficientSampler, Hypothesis, PsiWeight,
};
use proptest::prelude::*;
use pucci_core::{Ellipticity, OpSign};
use radial_core::{pucci_on_radial, AuxFunction};

fn axis(r: f64, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[0] = r;
    p
}

/// lambda(x) = -M+(D^2 psi)/psi for psi = |x|^{-q}, evaluated through the
/// radial Hessian reduction rather than the closed-form bound, so the two
/// sides of the comparison below share no arithmetic.
fn eigen_identity_lambda(q: f64, ell: Ellipticity, n: usize) -> impl Fn(&[f64]) -> f64 {
    let aux = AuxFunction::power_decay(q).unwrap();
    move |x: &[f64]| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let psi2 = aux.second_deriv(r).unwrap();
        let psi1_over_r = aux.deriv(r).unwrap() / r;
        -pucci_on_radial(psi2, psi1_over_r, n, ell, OpSign::Plus) / aux.value(r).unwrap()
    }
}

#[test]
fn weighted_bound_with_the_eigen_identity_matches_decay_at_infinity() {
    // Same data fed through the general checker (psi, lambda samplers) and
    // the specialised decay checker must agree: same verdict, same worst
    // sample, margins equal to rounding.
    let cases: [(Ellipticity, usize, f64, f64); 3] = [
        (Ellipticity::new(1.0, 2.0).unwrap(), 4, 0.25, 0.0),
        (Ellipticity::new(2.0, 3.0).unwrap(), 3, 0.2, 0.7),
        (Ellipticity::new(1.0, 1.0).unwrap(), 3, 0.6, 0.25),
    ];
    for (ell, n, q, gamma) in cases {
        let c = CoefficientSampler::radial(0.0, f64::INFINITY, true, |r| -0.5 / (r * r)).unwrap();
        let radii = radius_ladder(1.1, 40.0).unwrap();
        let samples: Vec<Vec<f64>> = radii.iter().map(|&r| axis(r, n)).collect();
        let psi = PsiWeight::Aux(AuxFunction::power_decay(q).unwrap());
        let lambda = eigen_identity_lambda(q, ell, n);
        let general = check_weighted_bound(&c, lambda, &psi, gamma, &samples).unwrap();
        let decay = check_decay_at_infinity(&c, q, 1.0, ell, gamma, n, &radii).unwrap();
        assert_eq!(general.holds, decay.holds, "ell {ell:?} n {n} q {q}");
        let scale = 1.0 + decay.margin.abs();
        assert!(
            (general.margin - decay.margin).abs() <= 1e-12 * scale,
            "margins {} vs {}",
            general.margin,
            decay.margin
        );
        assert_eq!(general.worst_point, decay.worst_point);
        assert_eq!(general.hypothesis, Hypothesis::WeightedBound);
        assert_eq!(decay.hypothesis, Hypothesis::DecayAtInfinity);
    }
}

#[test]
fn annulus_drift_margins_match_hand_arithmetic() {
    // c = 0, psi = |x|^{-1/4} on [1/2, 2] with (1, 2), n = 4: the margin is
    // 0.125/r^2 - gamma/(4 r), decreasing across the annulus, so the worst
    // sample is the outer radius. gamma = 0.4 fails there; gamma = 0.05
    // still clears it.
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let n = 4;
    let q = 0.25;
    let c = CoefficientSampler::constant(0.0);
    let radii = radius_ladder(0.5, 2.0).unwrap();
    let samples: Vec<Vec<f64>> = radii.iter().map(|&r| axis(r, n)).collect();
    let psi = PsiWeight::Aux(AuxFunction::power_decay(q).unwrap());

    for (gamma, expect_holds) in [(0.4, false), (0.05, true)] {
        let lambda = eigen_identity_lambda(q, ell, n);
        let v = check_weighted_bound(&c, lambda, &psi, gamma, &samples).unwrap();
        let hand = |r: f64| 0.125 / (r * r) - gamma * 0.25 / r;
        let expected = radii.iter().fold(f64::INFINITY, |m, &r| m.min(hand(r)));
        assert_eq!(v.holds, expect_holds, "gamma {gamma}");
        assert!(
            (v.margin - expected).abs() <= 1e-13 * (1.0 + expected.abs()),
            "margin {} vs hand {}",
            v.margin,
            expected
        );
        assert!((v.worst_point[0] - 2.0).abs() <= 1e-12, "worst at the outer radius");
    }
}

#[test]
fn punctured_power_margins_match_the_literal_formula() {
    // Spec formula written out digit by digit: the power-branch bound is
    // q (lambda1 (n-1) - lambda2 (q+1)) / r^2 - gamma q / r.
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let (n, gamma) = (4usize, 0.3);
    let c = CoefficientSampler::radial(0.0, 1.0, true, |r| -1.0 + 0.1 * r).unwrap();
    let radii = radius_ladder(1e-3, 0.9).unwrap();
    let v = check_punctured(&c, ell, gamma, n, Branch::Power { q: 0.25 }, &radii).unwrap();
    assert_eq!(v.hypothesis, Hypothesis::PuncturedPower);
    let bound = |r: f64| 0.25 * (3.0 - 2.0 * 1.25) / (r * r) - gamma * 0.25 / r;
    let expected = radii
        .iter()
        .fold(f64::INFINITY, |m, &r| m.min(bound(r) - (-1.0 + 0.1 * r)));
    assert!(
        (v.margin - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
        "margin {} vs {}",
        v.margin,
        expected
    );
}

#[test]
fn punctured_log_margins_match_the_literal_formula() {
    // Log-branch bound at the critical n* = 2, a = 1/2 baked in:
    // lambda2/4 (-ln r)^{-2} r^{-2} - gamma/2 (-ln r)^{-1} r^{-1}.
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let (n, gamma) = (3usize, 0.8);
    let c = CoefficientSampler::constant(2.0);
    let radii = radius_ladder(1e-4, 0.4).unwrap();
    let v = check_punctured(&c, ell, gamma, n, Branch::Log, &radii).unwrap();
    assert_eq!(v.hypothesis, Hypothesis::PuncturedLog);
    let bound = |r: f64| {
        let l = -r.ln();
        2.0 / 4.0 / (l * l * r * r) - gamma / 2.0 / (l * r)
    };
    let expected = radii.iter().fold(f64::INFINITY, |m, &r| m.min(bound(r) - 2.0));
    assert!(
        (v.margin - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
        "margin {} vs {}",
        v.margin,
        expected
    );
    assert!(v.holds, "the bound diverges as r -> 0, c is bounded");
}

#[test]
fn verdicts_serialize_to_the_agreed_shape() {
    let ell = Ellipticity::new(1.0, 2.0).unwrap();
    let c = CoefficientSampler::constant(0.0);
    let radii = radius_ladder(1e-3, 0.5).unwrap();
    let v = check_punctured(&c, ell, 0.0, 4, Branch::Auto, &radii).unwrap();
    let s = serde_json::to_value(&v).unwrap();
    for key in ["hypothesis", "holds", "margin", "worst_point", "params"] {
        assert!(s.get(key).is_some(), "missing {key}");
    }
    assert_eq!(s["hypothesis"], "punctured_power");
    assert_eq!(s["params"]["n_star"], 2.5);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    /// Shifting c down by delta raises the margin by exactly delta (up to
    /// one rounding of the subtraction): the checker is an affine probe
    /// of the coefficient.
    #[test]
    fn margin_is_affine_in_the_coefficient(
        q in 0.05..0.45f64,
        gamma in 0.0..2.0f64,
        delta in 1e-3..5.0f64,
        amp in -2.0..2.0f64,
    ) {
        let ell = Ellipticity::new(1.0, 2.0).unwrap();
        let n = 4;
        let radii = radius_ladder(1.5, 30.0).unwrap();
        let base = CoefficientSampler::radial(0.0, f64::INFINITY, true, move |r| amp / (r * r))
            .unwrap();
        let shifted =
            CoefficientSampler::radial(0.0, f64::INFINITY, true, move |r| amp / (r * r) - delta)
                .unwrap();
        let v0 = check_decay_at_infinity(&base, q, 1.0, ell, gamma, n, &radii).unwrap();
        let v1 = check_decay_at_infinity(&shifted, q, 1.0, ell, gamma, n, &radii).unwrap();
        let scale = 1.0 + v0.margin.abs() + delta;
        prop_assert!(
            (v1.margin - v0.margin - delta).abs() <= 1e-12 * scale,
            "margins {} -> {}, delta {}",
            v0.margin,
            v1.margin,
            delta
        );
    }
}

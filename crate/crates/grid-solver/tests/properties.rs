use grid_solver::{apply_operator, GridDomain, GridField, SchemeParams, Shape};
use proptest::prelude::*;
use pucci_core::{Ellipticity, OpSign};

fn small_disc() -> (GridDomain, SchemeParams) {
    let dom = GridDomain::new(Shape::Disc { r: 1.0 }, 0.25, 8).unwrap();
    let sp = SchemeParams {
        n_dirs: 8,
        gamma: 0.6,
        ..SchemeParams::default()
    };
    (dom, sp)
}

fn field_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, len)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Raising one interior value never lowers the operator at any other
    /// node: the scheme is monotone in the off-diagonal entries, and the
    /// comparison holds on the raw floating point values, not up to a
    /// tolerance.
    #[test]
    fn operator_is_monotone_in_other_nodes(
        u in field_strategy(145),
        c in field_strategy(145),
        bump_at in 0usize..145,
        bump in 0.01..0.5f64,
    ) {
        let (dom, sp) = small_disc();
        prop_assume!(u.len() >= dom.node_count());
        let ell = Ellipticity::new(1.0, 2.5).unwrap();
        let n = dom.node_count();
        let bump_at = bump_at % n;
        let u1 = GridField::from_values(u[..n].to_vec()).unwrap();
        let mut raised = u[..n].to_vec();
        raised[bump_at] += bump;
        let u2 = GridField::from_values(raised).unwrap();
        let cf = GridField::from_values(c[..n].iter().map(|v| v.abs()).collect()).unwrap();
        let g = GridField::from_values(vec![0.25; n]).unwrap();
        let b = GridField::from_values(vec![0.0; dom.boundary_count()]).unwrap();
        for op in [OpSign::Plus, OpSign::Minus] {
            let f1 = apply_operator(&u1, &dom, ell, op, &sp, &cf, &g, &b).unwrap();
            let f2 = apply_operator(&u2, &dom, ell, op, &sp, &cf, &g, &b).unwrap();
            for i in 0..n {
                if i == bump_at {
                    continue;
                }
                prop_assert!(
                    f2.values()[i] >= f1.values()[i],
                    "node {i} dropped from {} to {} after raising node {bump_at}",
                    f1.values()[i],
                    f2.values()[i]
                );
            }
        }
    }

    /// Raising one boundary value never lowers the operator anywhere:
    /// boundary samples enter only through cut arms, with positive weights.
    #[test]
    fn operator_is_monotone_in_boundary_data(
        u in field_strategy(145),
        bump_at in 0usize..600,
        bump in 0.01..0.5f64,
    ) {
        let (dom, sp) = small_disc();
        let ell = Ellipticity::new(1.0, 2.5).unwrap();
        let n = dom.node_count();
        let m = dom.boundary_count();
        let bump_at = bump_at % m;
        let uf = GridField::from_values(u[..n].to_vec()).unwrap();
        let cf = GridField::from_values(vec![0.5; n]).unwrap();
        let g = GridField::from_values(vec![0.0; n]).unwrap();
        let b1 = GridField::from_values(vec![0.1; m]).unwrap();
        let mut braised = vec![0.1; m];
        braised[bump_at] += bump;
        let b2 = GridField::from_values(braised).unwrap();
        for op in [OpSign::Plus, OpSign::Minus] {
            let f1 = apply_operator(&uf, &dom, ell, op, &sp, &cf, &g, &b1).unwrap();
            let f2 = apply_operator(&uf, &dom, ell, op, &sp, &cf, &g, &b2).unwrap();
            for i in 0..n {
                prop_assert!(
                    f2.values()[i] >= f1.values()[i],
                    "node {i} dropped after raising boundary sample {bump_at}"
                );
            }
        }
    }

    /// With no drift the two extremal operators are exact negatives of each
    /// other under sign flips of the field, the source, and the boundary.
    #[test]
    fn extremal_operators_are_dual_without_drift(
        u in field_strategy(145),
        c in field_strategy(145),
        g in field_strategy(145),
    ) {
        let dom = GridDomain::new(Shape::Disc { r: 1.0 }, 0.25, 8).unwrap();
        let sp = SchemeParams {
            n_dirs: 8,
            gamma: 0.0,
            ..SchemeParams::default()
        };
        let ell = Ellipticity::new(0.5, 3.0).unwrap();
        let n = dom.node_count();
        let m = dom.boundary_count();
        let uf = GridField::from_values(u[..n].to_vec()).unwrap();
        let neg_u = GridField::from_values(u[..n].iter().map(|v| -v).collect()).unwrap();
        let cf = GridField::from_values(c[..n].iter().map(|v| v.abs()).collect()).unwrap();
        let gf = GridField::from_values(g[..n].to_vec()).unwrap();
        let neg_g = GridField::from_values(g[..n].iter().map(|v| -v).collect()).unwrap();
        let b = GridField::from_values(vec![0.3; m]).unwrap();
        let neg_b = GridField::from_values(vec![-0.3; m]).unwrap();
        let plus = apply_operator(&uf, &dom, ell, OpSign::Plus, &sp, &cf, &gf, &b).unwrap();
        let minus =
            apply_operator(&neg_u, &dom, ell, OpSign::Minus, &sp, &cf, &neg_g, &neg_b).unwrap();
        for i in 0..n {
            prop_assert_eq!(
                plus.values()[i].to_bits(),
                (-minus.values()[i]).to_bits(),
                "node {}: {} vs {}",
                i,
                plus.values()[i],
                -minus.values()[i]
            );
        }
    }
}

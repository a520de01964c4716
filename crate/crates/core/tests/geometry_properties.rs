#![allow(clippy::needless_range_loop)]

use akgeo::geometry::{curvature_bundle, fd, hodge_star, KForm, MetricField};
use akgeo::sym::{Evaluator, Expr, Point};
use proptest::prelude::*;

fn linear() -> impl Strategy<Value = Expr> {
    prop::array::uniform4(-3i64..=3)
        .prop_map(|c| Expr::sum((1..=4).map(|k| Expr::x(k).scale(&akgeo::sym::CRational::ratio(c[k as usize - 1], 4)))))
}

/// Positive diagonal entries `exp(ℓ)` and `1 + ℓ²`.
fn warped_metric() -> impl Strategy<Value = MetricField> {
    (linear(), linear(), linear())
        .prop_map(|(a, b, c)| MetricField::diagonal([a.exp(), Expr::one(), &Expr::one() + &(&b * &b), (&c + &a).exp()]))
}

fn point() -> impl Strategy<Value = Point> {
    prop::array::uniform4(-0.8f64..0.8).prop_map(Point::new)
}

fn two_form() -> impl Strategy<Value = KForm> {
    prop::array::uniform6(-5i64..=5).prop_map(|c| KForm::from_components(2, c.iter().map(|&k| Expr::int(k)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn curvature_identities_hold(g in warped_metric(), p in point()) {
        let v = curvature_bundle(&g).at(&p).unwrap();
        prop_assert!(v.bianchi_residual() < 1e-10);
        prop_assert!(v.weyl_trace_residual() < 1e-10);
        let r = &v.riemann;
        for a in 0..4 { for b in 0..4 { for c in 0..4 { for d in 0..4 {
            prop_assert!((r[a][b][c][d] + r[a][b][d][c]).abs() < 1e-12);
        }}}}
    }

    #[test]
    fn symbolic_riemann_matches_finite_differences(g in warped_metric(), p in point()) {
        let exact = curvature_bundle(&g).at(&p).unwrap();
        let approx = fd::riemann(&g, &p, 1e-4, 1e-3).unwrap();
        let scale = 1.0 + exact.riemann_max();
        for a in 0..4 { for b in 0..4 { for c in 0..4 { for d in 0..4 {
            let gap = (exact.riemann[a][b][c][d] - approx[a][b][c][d]).abs();
            prop_assert!(gap < 1e-5 * scale, "gap {gap} at {a}{b}{c}{d}");
        }}}}
    }

    #[test]
    fn hodge_star_squares_to_one_on_two_forms(g in warped_metric(), w in two_form(), p in point()) {
        let twice = hodge_star(&g, &hodge_star(&g, &w).unwrap()).unwrap();
        let mut ev = Evaluator::new(&p);
        let (a, b) = (twice.eval(&mut ev).unwrap(), w.eval(&mut ev).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }
}

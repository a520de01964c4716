use std::f64::consts::PI;

use akgeo::constructions::*;
use akgeo::domain::{sample_domain, DomainSpec};
use akgeo::geometry::*;
use akgeo::hermitian::*;
use akgeo::sym::*;
use nalgebra::Matrix4;

fn points(n: usize) -> Vec<Point> {
    sample_domain(&DomainSpec::u_prime(), n, DEFAULT_SEED).unwrap()
}

fn metric_gap(a: &MetricField, b: &MetricField, pts: &[Point]) -> f64 {
    pts.iter()
        .map(|p| (a.at(p).unwrap() - b.at(p).unwrap()).amax())
        .fold(0.0, f64::max)
}

fn form_gap(a: &KForm, b: &KForm, pts: &[Point]) -> f64 {
    max_component(&a.sub(b), pts).unwrap()
}

#[test]
fn ricci_flat_metric_at_reference_point() {
    let m = theorem1_metric().at(&Point::new([1.0, 0.0, 0.0, 0.0])).unwrap();
    let s = 2f64.sqrt();
    let want = Matrix4::from_diagonal(&[1.0 / s, 1.0 / s, 4.0 * s, 4.0 * s].into());
    assert!((m - want).amax() < 1e-14, "{m}");
}

#[test]
fn three_routes_to_the_same_metric() {
    let pts = points(50);
    let direct = theorem1_metric();
    let prz = przanowski_metric(&bialecki_potential(), &pts).unwrap();
    let pkg = theorem1_package(&Expr::zero()).unwrap().metric;
    let coframe = metric_from_coframe(&theorem1_coframe(), &pts[0]).unwrap();
    assert!(metric_gap(&direct, &prz, &pts) < 1e-10);
    assert!(metric_gap(&direct, &pkg, &pts) < 1e-10);
    assert!(metric_gap(&pkg, &coframe, &pts) < 1e-10);
}

#[test]
fn bialecki_potential_values_and_signs() {
    let d = bialecki_potential();
    let k = Evaluator::new(&Point::new([1.0, 0.0, 0.0, 0.0]))
        .eval(d.potential())
        .unwrap();
    assert!((k.re - 2f64.ln()).abs() < 1e-15);
    assert!(!d.domain().contains(&[0.0, 0.0, 1.0, 0.0]));
    let pts = points(100);
    assert!(d.admissibility(&pts).unwrap().holds());
    assert!(!d.with_epsilon(1).admissibility(&pts).unwrap().holds());
    assert!(przanowski_metric(&d.with_epsilon(1), &pts).is_err());
    let r = probable_zero_at(&przanowski_residual(&d), &pts, 1e-10).unwrap();
    assert!(r.is_zero, "residual {:e}", r.max_residual);
}

#[test]
fn fh_structure_is_the_xi_structure_on_the_unit_circle() {
    let pts = points(20);
    let c = theorem1_coframe();
    for k in [0, 3, 5, 11] {
        let phi = Expr::constant(CRational::from_f64(k as f64 * PI / 8.0).unwrap());
        let pkg = theorem1_package(&phi).unwrap();
        let j = xi_structure(&c, &XiParameter::unit(&phi), Side::Plus).unwrap();
        let gap = pts
            .iter()
            .map(|p| {
                (pkg.structure.at(p).unwrap() - j.at(p).unwrap())
                    .iter()
                    .fold(0.0f64, |m, z| m.max(z.norm()))
            })
            .fold(0.0, f64::max);
        assert!(gap < 1e-10, "phi = {k}pi/8: {gap:e}");
        let omega = fundamental_form(&pkg.metric, &pkg.structure);
        assert!(form_gap(&omega, &pkg.form, &pts) < 1e-10);
        let closed = xi_fundamental_form(&c, &XiParameter::unit(&phi), Side::Plus);
        assert!(form_gap(&closed, &pkg.form, &pts) < 1e-10);
        assert!(exterior_derivative(&pkg.form).unwrap().is_literal_zero());
    }
}

#[test]
fn fundamental_form_at_zero_phase() {
    let w = theorem1_package(&Expr::zero()).unwrap().form;
    let i = Expr::imag_unit();
    let dz = |a: [Expr; 4], b: [Expr; 4]| KForm::one_form(a).wedge(&KForm::one_form(b));
    let want = dz(dz2(), dz1()).sub(&dz(dz2b(), dz1b())).scale(&i);
    assert_eq!(w, want);
}

#[test]
fn circle_structures_are_strictly_almost_kahler() {
    let pts = points(20);
    for k in [0, 4, 9] {
        let phi = Expr::constant(CRational::from_f64(k as f64 * PI / 8.0).unwrap());
        let pkg = theorem1_package(&phi).unwrap();
        let (sq, me) = compatibility_residuals(&pkg.metric, &pkg.structure, &pts).unwrap();
        assert!(sq < 1e-9 && me < 1e-9);
        let class = classify_structure(&pkg.metric, &pkg.structure, &pts, 1e-9).unwrap();
        assert_eq!(class.kind, StructureKind::AlmostKahlerNonKahler, "{class:?}");
        assert!(class.max_nijenhuis > 1e-3);
    }
    let j = theorem1_package(&Expr::zero()).unwrap().structure;
    let n = nijenhuis_tensor(&j)
        .max_abs_at(&Point::new([1.0, 0.0, 0.1, 0.1]))
        .unwrap();
    assert!(n > 1e-3);
}

#[test]
fn exponential_f_gives_curvature() {
    let f = Expr::x(3).exp();
    let probe = Point::new([0.3, -0.2, 0.4, 0.1]);
    let (g, j, w) = lemma2_structure(&f, &Expr::zero(), &Expr::zero(), &probe).unwrap();
    let pts = [probe.clone(), Point::new([1.0, 0.5, -0.3, 0.7])];
    let (sq, me) = compatibility_residuals(&g, &j, &pts).unwrap();
    assert!(sq < 1e-12 && me < 1e-12);
    assert!(form_gap(&fundamental_form(&g, &j), &w, &pts) < 1e-12);
    let vals = curvature_bundle(&g).at(&probe).unwrap();
    assert!(vals.ricci_frame_max() > 1e-3);
}

#[test]
fn fh_form_does_not_see_f_or_h() {
    let f = parse_expression("1 + x1^2/4 + x3^2/5", &[]).unwrap();
    let h = parse_expression("z1*z2b - 3*x4", &[]).unwrap();
    let phi = Expr::ratio(2, 7);
    let probe = Point::new([0.2, 0.1, -0.5, 0.3]);
    let (g, j, w) = lemma2_structure(&f, &h, &phi, &probe).unwrap();
    assert_eq!(w, lemma2_form(&phi));
    let pts = sample_domain(&DomainSpec::cube(-1.0, 1.0), 10, DEFAULT_SEED).unwrap();
    assert!(form_gap(&fundamental_form(&g, &j), &w, &pts) < 1e-10);
}

#[test]
fn flat_fh_structure_is_kahler() {
    let probe = Point::new([0.0; 4]);
    let (g, j, _) = lemma2_structure(&Expr::one(), &Expr::zero(), &Expr::zero(), &probe).unwrap();
    assert_eq!(g.at(&probe).unwrap(), Matrix4::identity() * 2.0);
    let class = classify_structure(&g, &j, &[probe], 1e-12).unwrap();
    assert_eq!(class.kind, StructureKind::Kahler);
}

#[test]
fn complex_f_is_rejected() {
    let err = coframe_from_fh(&Expr::imag_unit(), &Expr::zero(), &[Point::new([0.0; 4])]).unwrap_err();
    assert!(matches!(err, ConstructionError::NotReal(_)));
}

#[test]
fn gibbons_hawking_pullback() {
    let chart_pts = sample_domain(
        &DomainSpec::Box([(0.5, 2.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)]),
        50,
        DEFAULT_SEED,
    )
    .unwrap();
    let pulled = pullback_metric(&chart_map_exprs(ChartId::GibbonsHawking), &theorem1_metric());
    assert!(metric_gap(&pulled, &gh_form_metric(), &chart_pts) < 1e-8);
}

#[test]
fn charts_agree_under_exponential() {
    let pts = sample_domain(&DomainSpec::cube(-1.5, 1.5), 20, DEFAULT_SEED).unwrap();
    for p in pts {
        let mut gh = p.clone();
        gh.coords[0] = p.coords[0].exp();
        let a = chart_map(ChartId::Global, &p).unwrap();
        let b = chart_map(ChartId::GibbonsHawking, &gh).unwrap();
        for k in 0..4 {
            assert!((a.coords[k] - b.coords[k]).abs() < 1e-12);
        }
        assert!(DomainSpec::u_value(&a.coords) > 0.0);
    }
}

#[test]
fn global_chart_is_regular_on_grid() {
    let g = pullback_metric(&chart_map_exprs(ChartId::Global), &theorem1_metric());
    for t in -3..=3 {
        for y in -2..=2 {
            for z in -2..=2 {
                for q in -2..=2 {
                    let p = Point::new([t as f64, y as f64, z as f64, q as f64]);
                    let m = g.at(&p).unwrap();
                    assert!(m.iter().all(|x| x.is_finite()));
                    assert!(g.leading_minors(&p).unwrap().iter().all(|x| *x > 0.0), "{p:?}");
                }
            }
        }
    }
}

#[test]
fn opposite_structure_is_kahler_and_anti_self_dual() {
    let pts = points(100);
    let g = theorem1_metric();
    let (j, w) = section6_structure();
    let (sq, me) = compatibility_residuals(&g, &j, &pts).unwrap();
    assert!(sq < 1e-9 && me < 1e-9);
    assert!(nijenhuis_tensor(&j).max_abs(&pts).unwrap() < 1e-9);
    assert!(max_component(&exterior_derivative(&w).unwrap(), &pts).unwrap() < 1e-9);
    let star = hodge_star(&g, &w).unwrap();
    assert!(max_component(&star.add(&w), &pts).unwrap() < 1e-9);
    let class = classify_structure(&g, &j, &pts[..20], 1e-9).unwrap();
    assert_eq!(class.kind, StructureKind::Kahler);
}

#[test]
fn bfp_trivial_solution() {
    assert!(bfp_residual(&Expr::zero()).unwrap().is_zero());
}

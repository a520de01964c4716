//! The `paper` check suite: Ricci-flatness, Weyl halves and Petrov type of the
//! Ricci-flat metric, its almost-Kähler circle, the opposite Kähler structure,
//! the Przanowski and Gibbons-Hawking descriptions, and the convention anchors.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constructions::{
    bfp_residual, bialecki_potential, chart_map_exprs, coframe_from_fh, gh_form_metric, przanowski_metric,
    przanowski_residual, section6_structure, theorem1_coframe, theorem1_metric, theorem1_package, ChartId,
};
use crate::domain::{sample_domain, DomainSpec};
use crate::geometry::{
    curvature_bundle, exterior_derivative, fd, hodge_star, metric_from_coframe, petrov_classify_with, pullback_metric,
    weyl_halves_from_values, CurvatureBundle, KForm, MetricField, PetrovTolerances, PetrovType, Side, WeylHalf,
};
use crate::hermitian::{
    classify_structure, compatibility_residuals, fundamental_form, max_component, nijenhuis_tensor,
    xi_fundamental_form, xi_structure, StructureKind, XiParameter,
};
use crate::report::{CheckReport, Status};
use crate::sym::{probable_zero_at, CRational, Expr, Point};

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: crate::sym::DEFAULT_SEED,
            samples: 100,
        }
    }
}

/// A check name and the function computing it.
type Check = (&'static str, fn(&Context) -> CheckReport);

/// Shared, lazily computed data for one run.
/// `(W⁺, W⁻, max frame Ricci)` at one sample point.
type PointHalves = (WeylHalf, WeylHalf, f64);

pub struct Context {
    pub opts: SuiteOptions,
    points: Vec<Point>,
    metric: MetricField,
    halves: std::sync::OnceLock<Result<Vec<PointHalves>, String>>,
}

impl Context {
    pub fn new(opts: SuiteOptions) -> Result<Self, String> {
        let points = sample_domain(&DomainSpec::u_prime(), opts.samples, opts.seed).map_err(|e| e.to_string())?;
        Ok(Context {
            opts,
            points,
            metric: theorem1_metric(),
            halves: std::sync::OnceLock::new(),
        })
    }

    fn first(&self, n: usize) -> &[Point] {
        &self.points[..n.min(self.points.len())]
    }

    /// `(W⁺, W⁻, frame-normalised max |Ricci|)` at every sample point.
    fn halves(&self) -> Result<&[(WeylHalf, WeylHalf, f64)], String> {
        self.halves
            .get_or_init(|| {
                let cb = curvature_bundle(&self.metric);
                self.points
                    .par_iter()
                    .map(|p| halves_at(&cb, p))
                    .collect::<Result<Vec<_>, _>>()
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    fn residual(&self, name: &str, value: f64, samples: usize, tol: f64) -> CheckReport {
        CheckReport::from_residual(name, value, samples, self.opts.seed, tol)
    }

    fn error(&self, name: &str, message: impl ToString, tol: f64) -> CheckReport {
        CheckReport::error(name, message.to_string(), self.opts.seed, tol)
    }
}

fn halves_at(cb: &CurvatureBundle, p: &Point) -> Result<(WeylHalf, WeylHalf, f64), String> {
    let vals = cb.at(p).map_err(|e| e.to_string())?;
    let (wp, wm) = weyl_halves_from_values(&vals, cb.metric().orientation(), p).map_err(|e| e.to_string())?;
    Ok((wp, wm, vals.ricci_frame_max()))
}

fn phase(k: usize) -> Expr {
    Expr::constant(CRational::from_f64(k as f64 * PI / 8.0).expect("finite"))
}

fn fail(mut r: CheckReport, why: impl Into<String>) -> CheckReport {
    r.status = Status::Fail;
    let why = why.into();
    r.detail = Some(match r.detail.take() {
        Some(d) => format!("{why}; {d}"),
        None => why,
    });
    r
}

fn ricci_flat(cx: &Context) -> CheckReport {
    match cx.halves() {
        Ok(h) => cx.residual("ricci_flat", h.iter().map(|x| x.2).fold(0.0, f64::max), h.len(), 1e-7),
        Err(e) => cx.error("ricci_flat", e, 1e-7),
    }
}

fn half(h: &(WeylHalf, WeylHalf, f64), side: Side) -> &WeylHalf {
    match side {
        Side::Plus => &h.0,
        Side::Minus => &h.1,
    }
}

fn weyl_vanishes(cx: &Context, side: Side, name: &str) -> CheckReport {
    match cx.halves() {
        Ok(h) => {
            let worst = h.iter().map(|x| half(x, side).max_entry()).fold(0.0, f64::max);
            let other = h.iter().map(|x| half(x, flip(side)).max_entry()).fold(0.0, f64::max);
            cx.residual(name, worst, h.len(), 1e-7).with_detail(format!(
                "max |W{}| entry {worst:e}, max |W{}| entry {other:e}",
                sym(side),
                sym(flip(side))
            ))
        }
        Err(e) => cx.error(name, e, 1e-7),
    }
}

fn flip(s: Side) -> Side {
    match s {
        Side::Plus => Side::Minus,
        Side::Minus => Side::Plus,
    }
}

fn sym(s: Side) -> &'static str {
    match s {
        Side::Plus => "+",
        Side::Minus => "-",
    }
}

/// Closest pair `λ` and the remaining eigenvalue `μ`.
fn split_pair(ev: &[Complex64; 3]) -> (Complex64, Complex64, f64) {
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let (a, b, c) = pairs
        .into_iter()
        .min_by(|x, y| (ev[x.0] - ev[x.1]).norm().total_cmp(&(ev[y.0] - ev[y.1]).norm()))
        .unwrap();
    ((ev[a] + ev[b]) / 2.0, ev[c], (ev[a] - ev[b]).norm())
}

/// Pattern `{λ, λ, −2λ}` with `|λ| > 1e−4` and type D on the given side.
fn type_d(cx: &Context, side: Side, name: &str) -> CheckReport {
    let h = match cx.halves() {
        Ok(h) => h,
        Err(e) => return cx.error(name, e, 1e-6),
    };
    let mut gap: f64 = 0.0;
    let mut min_lambda = f64::INFINITY;
    let mut other_types = Vec::new();
    for x in h {
        let w = half(x, side);
        let (lam, mu, pair_gap) = split_pair(&w.eigenvalues());
        let scale = 1f64.max(lam.norm());
        gap = gap.max(pair_gap / scale).max((mu + lam * 2.0).norm() / scale);
        min_lambda = min_lambda.min(lam.norm());
        match petrov_classify_with(w, PetrovTolerances::default()) {
            Ok(PetrovType::D) => {}
            Ok(t) => other_types.push(t.to_string()),
            Err(e) => other_types.push(e.to_string()),
        }
    }
    let r = cx
        .residual(name, gap.max(1e-4 - min_lambda), h.len(), 1e-6)
        .with_detail(format!("relative eigenvalue gap {gap:e}, min |lambda| {min_lambda:e}"));
    if !(min_lambda > 1e-4) {
        fail(r, format!("W{} degenerates below 1e-4", sym(side)))
    } else if !other_types.is_empty() {
        other_types.sort();
        other_types.dedup();
        fail(
            r,
            format!("petrov type not D at some points: {}", other_types.join(", ")),
        )
    } else {
        r
    }
}

fn almost_kahler_circle(cx: &Context) -> CheckReport {
    let name = "almost_kahler_circle";
    let pts = cx.first(20);
    let mut worst: f64 = 0.0;
    let mut not_literal = Vec::new();
    for k in 0..16 {
        let pkg = match theorem1_package(&phase(k)) {
            Ok(p) => p,
            Err(e) => return cx.error(name, e, 1e-9),
        };
        match exterior_derivative(&pkg.form) {
            Ok(d) if d.is_literal_zero() => {}
            Ok(_) => not_literal.push(k),
            Err(e) => return cx.error(name, e, 1e-9),
        }
        let omega = fundamental_form(&pkg.metric, &pkg.structure);
        let step = compatibility_residuals(&pkg.metric, &pkg.structure, pts)
            .and_then(|(sq, me)| Ok(sq.max(me).max(max_component(&omega.sub(&pkg.form), pts)?)));
        match step {
            Ok(v) => worst = worst.max(v),
            Err(e) => return cx.error(name, e, 1e-9),
        }
    }
    let r = cx
        .residual(name, worst, pts.len(), 1e-9)
        .with_detail("16 phases k*pi/8; compatibility and g*J = closed form");
    if not_literal.is_empty() {
        r
    } else {
        fail(r, format!("d omega not identically zero for k in {not_literal:?}"))
    }
}

fn non_kahler(cx: &Context) -> CheckReport {
    let name = "non_kahler";
    let pts = cx.first(20);
    let res: Result<Vec<f64>, String> = (0..16)
        .into_par_iter()
        .map(|k| {
            let pkg = theorem1_package(&phase(k)).map_err(|e| e.to_string())?;
            nijenhuis_tensor(&pkg.structure).max_abs(pts).map_err(|e| e.to_string())
        })
        .collect();
    match res {
        Ok(v) => CheckReport::from_lower_bound(
            name,
            v.iter().copied().fold(f64::INFINITY, f64::min),
            1e-3,
            pts.len(),
            cx.opts.seed,
        ),
        Err(e) => cx.error(name, e, 0.0),
    }
}

fn section6(cx: &Context) -> Result<(f64, f64, f64, f64), String> {
    let (j, w) = section6_structure();
    let pts = cx.first(cx.opts.samples);
    let (sq, me) = compatibility_residuals(&cx.metric, &j, pts).map_err(|e| e.to_string())?;
    let nij = nijenhuis_tensor(&j).max_abs(pts).map_err(|e| e.to_string())?;
    let dw = exterior_derivative(&w).map_err(|e| e.to_string())?;
    let closed = max_component(&dw, pts).map_err(|e| e.to_string())?;
    let star = hodge_star(&cx.metric, &w).map_err(|e| e.to_string())?;
    let asd = max_component(&star.add(&w), pts).map_err(|e| e.to_string())?;
    Ok((sq.max(me), nij, closed, asd))
}

fn opposite_kahler(cx: &Context) -> CheckReport {
    let name = "opposite_kahler";
    match section6(cx) {
        Ok((compat, nij, closed, asd)) => cx
            .residual(name, compat.max(nij).max(closed).max(asd), cx.points.len(), 1e-9)
            .with_detail(format!(
                "compatibility {compat:e}, nijenhuis {nij:e}, d omega {closed:e}, *omega + omega {asd:e}"
            )),
        Err(e) => cx.error(name, e, 1e-9),
    }
}

fn przanowski(cx: &Context) -> CheckReport {
    let name = "przanowski";
    let run = || -> Result<CheckReport, String> {
        let d = bialecki_potential();
        let pts = &cx.points;
        let res = probable_zero_at(&przanowski_residual(&d), pts, 1e-10).map_err(|e| e.to_string())?;
        let minus = d.admissibility(pts).map_err(|e| e.to_string())?;
        let plus = d.with_epsilon(1).admissibility(pts).map_err(|e| e.to_string())?;
        let g = przanowski_metric(&d, pts).map_err(|e| e.to_string())?;
        let mut gap: f64 = 0.0;
        for p in pts {
            let a = g.at(p).map_err(|e| e.to_string())?;
            let b = cx.metric.at(p).map_err(|e| e.to_string())?;
            gap = gap.max((a - b).amax());
        }
        let r = cx
            .residual(name, res.max_residual.max(gap), pts.len(), 1e-10)
            .with_detail(format!(
                "equation residual {:e}, metric gap {gap:e}, eps=-1 admissible {}, eps=+1 admissible {}",
                res.max_residual,
                minus.holds(),
                plus.holds()
            ));
        Ok(if minus.holds() && !plus.holds() {
            r
        } else {
            fail(r, "sign conditions do not single out eps = -1")
        })
    };
    run().unwrap_or_else(|e| cx.error(name, e, 1e-10))
}

fn gibbons_hawking(cx: &Context) -> CheckReport {
    let name = "gibbons_hawking";
    let domain = DomainSpec::Box([(0.5, 2.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)]);
    let run = || -> Result<CheckReport, String> {
        let pts = sample_domain(&domain, 50, cx.opts.seed).map_err(|e| e.to_string())?;
        let pulled = pullback_metric(&chart_map_exprs(ChartId::GibbonsHawking), &cx.metric);
        let gh = gh_form_metric();
        let gap = pts
            .par_iter()
            .map(|p| Ok((pulled.at(p)? - gh.at(p)?).amax()))
            .collect::<Result<Vec<f64>, crate::sym::EvalError>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(cx.residual(name, gap, pts.len(), 1e-8))
    };
    run().unwrap_or_else(|e| cx.error(name, e, 1e-8))
}

fn global_chart(cx: &Context) -> CheckReport {
    let name = "global_chart";
    let g = pullback_metric(&chart_map_exprs(ChartId::Global), &cx.metric);
    let mut grid = Vec::new();
    for t in -3..=3 {
        for y in -2..=2 {
            for z in -2..=2 {
                for q in -2..=2 {
                    grid.push(Point::new([t as f64, y as f64, z as f64, q as f64]));
                }
            }
        }
    }
    let min = grid
        .par_iter()
        .map(|p| match (g.at(p), g.leading_minors(p)) {
            (Ok(m), Ok(minors)) if m.iter().all(|x| x.is_finite()) => {
                minors.iter().copied().fold(f64::INFINITY, f64::min)
            }
            _ => f64::NAN,
        })
        .reduce(
            || f64::INFINITY,
            |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.min(b) },
        );
    CheckReport::from_lower_bound(name, min, 0.0, grid.len(), cx.opts.seed)
}

fn bfp_trivial(cx: &Context) -> CheckReport {
    match bfp_residual(&Expr::zero()) {
        Ok(r) if r.is_zero() => cx.residual("bfp_trivial", 0.0, 0, 0.0).with_detail("identically zero"),
        Ok(r) => fail(
            cx.residual("bfp_trivial", f64::INFINITY, 0, 0.0),
            format!("residual {r}"),
        ),
        Err(e) => cx.error("bfp_trivial", e, 0.0),
    }
}

fn random_xis(seed: u64, n: usize) -> Vec<XiParameter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            XiParameter::from_complex(z).expect("finite")
        })
        .collect()
}

fn hodge_anchors(cx: &Context) -> CheckReport {
    let name = "hodge_anchors";
    let run = || -> Result<CheckReport, String> {
        let pts = cx.first(20);
        let c = theorem1_coframe();
        let mut worst: f64 = 0.0;
        for xi in random_xis(cx.opts.seed, 10) {
            for side in [Side::Plus, Side::Minus] {
                let w = xi_fundamental_form(&c, &xi, side);
                let star = hodge_star(&cx.metric, &w).map_err(|e| e.to_string())?;
                let target = match side {
                    Side::Plus => star.sub(&w),
                    Side::Minus => star.add(&w),
                };
                worst = worst.max(max_component(&target, pts).map_err(|e| e.to_string())?);
            }
        }
        let probe = KForm::dx(0)
            .wedge(&KForm::dx(2))
            .add(&KForm::dx(1).wedge(&KForm::dx(3)).scale(&Expr::x(3)));
        let twice = hodge_star(&cx.metric, &hodge_star(&cx.metric, &probe).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        worst = worst.max(max_component(&twice.sub(&probe), pts).map_err(|e| e.to_string())?);
        Ok(cx
            .residual(name, worst, pts.len(), 1e-9)
            .with_detail("*w+ = w+, *w- = -w-, ** = id"))
    };
    run().unwrap_or_else(|e| cx.error(name, e, 1e-9))
}

fn closed_forms(cx: &Context) -> CheckReport {
    let name = "fundamental_form_closed_forms";
    let run = || -> Result<CheckReport, String> {
        let pts = cx.first(20);
        let c = theorem1_coframe();
        let g = metric_from_coframe(&c, &pts[0]).map_err(|e| e.to_string())?;
        let xis = random_xis(cx.opts.seed, 10);
        let worst = xis
            .par_iter()
            .map(|xi| {
                let mut w: f64 = 0.0;
                for side in [Side::Plus, Side::Minus] {
                    let j = xi_structure(&c, xi, side).map_err(|e| e.to_string())?;
                    let diff = fundamental_form(&g, &j).sub(&xi_fundamental_form(&c, xi, side));
                    w = w.max(max_component(&diff, pts).map_err(|e| e.to_string())?);
                }
                Ok(w)
            })
            .collect::<Result<Vec<f64>, String>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(cx
            .residual(name, worst, pts.len(), 1e-10)
            .with_detail("10 random finite xi, both sides"))
    };
    run().unwrap_or_else(|e| cx.error(name, e, 1e-10))
}

fn fd_oracle(cx: &Context) -> CheckReport {
    let name = "finite_difference_oracle";
    let run = || -> Result<CheckReport, String> {
        let pts = cx.first(5);
        let cb = curvature_bundle(&cx.metric);
        let mut worst: f64 = 0.0;
        for p in pts {
            let vals = cb.at(p).map_err(|e| e.to_string())?;
            let gam = fd::christoffel(&cx.metric, p, 1e-4).map_err(|e| e.to_string())?;
            let riem = fd::riemann(&cx.metric, p, 1e-4, 1e-3).map_err(|e| e.to_string())?;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        worst = worst.max((vals.christoffel[a][b][c] - gam[a][b][c]).abs());
                        for d in 0..4 {
                            worst = worst.max((vals.riemann[a][b][c][d] - riem[a][b][c][d]).abs());
                        }
                    }
                }
            }
        }
        Ok(cx.residual(name, worst, pts.len(), 1e-4))
    };
    run().unwrap_or_else(|e| cx.error(name, e, 1e-4))
}

fn flat_baseline(cx: &Context) -> CheckReport {
    let name = "flat_baseline";
    let run = || -> Result<CheckReport, String> {
        let pts = cx.first(cx.opts.samples);
        let c = coframe_from_fh(&Expr::one(), &Expr::zero(), pts).map_err(|e| e.to_string())?;
        let g = metric_from_coframe(&c, &pts[0]).map_err(|e| e.to_string())?;
        let cb = curvature_bundle(&g);
        let mut worst: f64 = 0.0;
        for p in pts {
            worst = worst.max(cb.at(p).map_err(|e| e.to_string())?.riemann_max());
        }
        let j = xi_structure(&c, &XiParameter::zero(), Side::Plus).map_err(|e| e.to_string())?;
        let class = classify_structure(&g, &j, cx.first(20), 1e-12).map_err(|e| e.to_string())?;
        let r = cx
            .residual(name, worst, pts.len(), 1e-12)
            .with_detail(format!("riemann {worst:e}, xi=0 structure {}", class.kind));
        Ok(if class.kind == StructureKind::Kahler {
            r
        } else {
            fail(r, "flat xi=0 structure is not Kahler")
        })
    };
    run().unwrap_or_else(|e| cx.error(name, e, 1e-12))
}

/// The checks in their fixed output order.
pub const PAPER_CHECKS: &[Check] = &[
    ("ricci_flat", ricci_flat),
    ("weyl_plus_vanishes", |cx| {
        weyl_vanishes(cx, Side::Plus, "weyl_plus_vanishes")
    }),
    ("weyl_minus_type_d", |cx| type_d(cx, Side::Minus, "weyl_minus_type_d")),
    ("weyl_minus_vanishes", |cx| {
        weyl_vanishes(cx, Side::Minus, "weyl_minus_vanishes")
    }),
    ("weyl_plus_type_d", |cx| type_d(cx, Side::Plus, "weyl_plus_type_d")),
    ("almost_kahler_circle", almost_kahler_circle),
    ("non_kahler", non_kahler),
    ("opposite_kahler", opposite_kahler),
    ("przanowski", przanowski),
    ("gibbons_hawking", gibbons_hawking),
    ("global_chart", global_chart),
    ("bfp_trivial", bfp_trivial),
    ("hodge_anchors", hodge_anchors),
    ("fundamental_form_closed_forms", closed_forms),
    ("finite_difference_oracle", fd_oracle),
    ("flat_baseline", flat_baseline),
];

/// Run one named check.
pub fn run_check(cx: &Context, name: &str) -> Option<CheckReport> {
    let (_, f) = PAPER_CHECKS.iter().find(|(n, _)| *n == name)?;
    let start = Instant::now();
    Some(f(cx).with_elapsed(start))
}

/// Run every check of the `paper` suite in order.
pub fn paper_suite(opts: SuiteOptions) -> Vec<CheckReport> {
    let cx = match Context::new(opts) {
        Ok(cx) => cx,
        Err(e) => return vec![CheckReport::error("paper", e, opts.seed, 0.0)],
    };
    PAPER_CHECKS
        .iter()
        .map(|(name, _)| run_check(&cx, name).expect("listed check"))
        .collect()
}

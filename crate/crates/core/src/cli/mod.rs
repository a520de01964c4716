//! Command-line front end: argument definitions, command dispatch and report output.

pub mod model;
pub mod suite;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{bfp_residual, chart_vocabulary, ChartId, PrzanowskiData};
use crate::domain::{sample_domain, DomainSpec};
use crate::geometry::{curvature_bundle, petrov_classify_with, weyl_halves_from_values, PetrovTolerances, Side};
use crate::hermitian::{
    classify_structure, compatibility_check, integrability_scan, stereographic_grid, unit_circle_grid, xi_structure,
    XiParameter,
};
use crate::report::{CheckReport, Status};
use crate::sym::{parse_expression, parse_with, probable_zero_at, CRational, Evaluator, Expr, Point};

pub use model::{parse_model_file, parse_model_file_with, ModelError, ModelFile, ModelGeometry};
pub use suite::{paper_suite, SuiteOptions, PAPER_CHECKS};

#[derive(Debug, Parser)]
#[command(
    name = "akgeo",
    version,
    about = "Seeded verification of 4-dimensional almost-Kähler geometry"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, global = true, default_value_t = crate::sym::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Write JSON lines here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// `x1,x2,x3,x4`
    #[arg(long, global = true, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Option<[f64; 4]>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// `re+imi`, `re`, `imi` or `inf`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub side: Option<SideArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GridKind {
    Circle,
    Sphere,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a named check suite (`paper`).
    Verify { suite: String },
    /// Check which curvature tensors of a model vanish.
    Curvature,
    /// Petrov type of both Weyl halves (or `--side`).
    Petrov {
        #[arg(long)]
        expect: Option<String>,
    },
    /// Compatibility and integrability of `J±_ξ` for a coframe model.
    Classify {
        #[arg(long)]
        expect: Option<String>,
    },
    /// Nijenhuis residual over a grid of ξ values.
    ScanXi {
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, value_enum, default_value = "circle")]
        kind: GridKind,
    },
    /// Przanowski equation and sign conditions for a potential `K(v, z2, z2b)`.
    Pde {
        #[arg(long = "K")]
        k: String,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        eps: i8,
    },
    /// Boyer-Finley-Plebański residual of `F(x, y, z)`.
    Bfp {
        #[arg(long = "F")]
        f: String,
    },
    /// Pullback of the Ricci-flat metric to the Gibbons-Hawking chart.
    PullbackGh,
    /// Regularity of the Ricci-flat metric in the global chart.
    GlobalChart,
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| "expected four comma-separated numbers".to_owned())
}

/// Errors that abort a run before any check (exit status 2).
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("{0}")]
    Usage(String),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Io(#[from] io::Error),
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError::Usage(msg.into())
}

#[derive(Serialize)]
struct Summary {
    summary: Counts,
    status: Status,
}

#[derive(Serialize)]
struct Counts {
    total: usize,
    passed: usize,
    failed: usize,
    errors: usize,
}

/// Exit status for a list of reports: 0 iff every report passed.
pub fn exit_status(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::passed) {
        0
    } else {
        1
    }
}

/// JSON lines for the reports followed by the summary object.
pub fn render(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        summary: Counts {
            total: reports.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
        },
        status: if exit_status(reports) == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
    };
    out.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
    out.push('\n');
    out
}

fn load_model(common: &Common) -> Result<ModelFile, UsageError> {
    let path = common
        .model
        .as_ref()
        .ok_or_else(|| usage("this command needs --model <path>"))?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_model_file_with(&text, common.seed)?)
}

fn overrides(common: &Common) -> Vec<(String, f64)> {
    common.phi.map(|p| vec![("phi".to_owned(), p)]).unwrap_or_default()
}

fn model_points(model: &ModelFile, common: &Common) -> Result<Vec<Point>, UsageError> {
    let o = overrides(common);
    match common.point {
        Some(x) => Ok(vec![model.bind(Point::new(x), &o)]),
        None => model
            .sample(common.samples, common.seed, &o)
            .map_err(|e| usage(format!("domain: {e}"))),
    }
}

fn xi_from(common: &Common) -> Result<XiParameter, UsageError> {
    match (&common.xi, common.phi) {
        (Some(s), _) => s
            .parse()
            .map_err(|e: crate::hermitian::HermitianError| usage(e.to_string())),
        (None, Some(phi)) => Ok(XiParameter::unit(&Expr::constant(
            CRational::from_f64(phi).ok_or_else(|| usage("--phi must be finite"))?,
        ))),
        (None, None) => Ok(XiParameter::zero()),
    }
}

fn curvature(common: &Common) -> Result<Vec<CheckReport>, UsageError> {
    let model = load_model(common)?;
    let pts = model_points(&model, common)?;
    let g = model.metric(&pts[0])?;
    let cb = curvature_bundle(&g);
    let vals: Vec<_> = pts.par_iter().map(|p| cb.at(p)).collect();
    let (seed, tol, n) = (common.seed, common.tol, pts.len());
    let mut worst = [0.0f64; 4];
    for v in vals {
        match v {
            Ok(v) => {
                let ricci = v.ricci.amax();
                for (w, x) in worst
                    .iter_mut()
                    .zip([v.riemann_max(), ricci, v.scalar.abs(), v.weyl_max()])
                {
                    *w = w.max(x);
                }
            }
            Err(e) => return Ok(vec![CheckReport::error("curvature", e.to_string(), seed, tol)]),
        }
    }
    Ok(["riemann_zero", "ricci_zero", "scalar_zero", "weyl_zero"]
        .iter()
        .zip(worst)
        .map(|(name, w)| CheckReport::from_residual(*name, w, n, seed, tol))
        .collect())
}

fn petrov(common: &Common, expect: Option<&str>) -> Result<Vec<CheckReport>, UsageError> {
    let model = load_model(common)?;
    let pts = model_points(&model, common)?;
    let g = model.metric(&pts[0])?;
    let cb = curvature_bundle(&g);
    let sides: Vec<Side> = match common.side {
        Some(s) => vec![s.into()],
        None => vec![Side::Plus, Side::Minus],
    };
    let halves: Vec<_> = pts
        .par_iter()
        .map(|p| {
            let v = cb.at(p)?;
            weyl_halves_from_values(&v, g.orientation(), p)
        })
        .collect::<Result<_, crate::geometry::GeometryError>>()
        .map_err(|e| usage(e.to_string()))?;
    let mut out = Vec::new();
    for side in sides {
        let name = format!("petrov_{side}");
        let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
        let mut trace: f64 = 0.0;
        for (wp, wm) in &halves {
            let w = if side == Side::Plus { wp } else { wm };
            trace = trace.max(w.trace().norm());
            let t =
                petrov_classify_with(w, PetrovTolerances::default()).map_or_else(|e| e.to_string(), |t| t.to_string());
            *counts.entry(t).or_default() += 1;
        }
        let summary: Vec<String> = counts.iter().map(|(t, n)| format!("{t}:{n}")).collect();
        let mut r = CheckReport::from_residual(name, trace, pts.len(), common.seed, common.tol)
            .with_detail(format!("types {}", summary.join(" ")));
        if let Some(e) = expect {
            if counts.keys().any(|t| t != e) {
                r.status = Status::Fail;
            }
        }
        out.push(r);
    }
    Ok(out)
}

fn classify(common: &Common, expect: Option<&str>) -> Result<Vec<CheckReport>, UsageError> {
    let model = load_model(common)?;
    let c = model.coframe().ok_or_else(|| usage("classify needs a coframe model"))?;
    let pts = model_points(&model, common)?;
    let g = model.metric(&pts[0])?;
    let side = common.side.map_or(Side::Plus, Side::from);
    let xi = xi_from(common)?;
    let j = xi_structure(c, &xi, side).map_err(|e| usage(e.to_string()))?;
    let label = xi_label(xi.value(&Point::new([0.0; 4])).map_err(|e| usage(e.to_string()))?);
    let compat = compatibility_check(&g, &j, &pts, common.tol, common.seed);
    let class = match classify_structure(&g, &j, &pts, common.tol) {
        Ok(cl) => {
            let mut r = CheckReport::from_residual("classification", 0.0, pts.len(), common.seed, common.tol)
                .with_detail(format!(
                    "{} (max nijenhuis {:e}, max d omega {:e}), xi = {label}, side {side}",
                    cl.kind, cl.max_nijenhuis, cl.max_d_omega
                ));
            if expect.is_some_and(|e| !e.eq_ignore_ascii_case(&cl.kind.to_string())) {
                r.status = Status::Fail;
            }
            r
        }
        Err(e) => CheckReport::error("classification", e.to_string(), common.seed, common.tol),
    };
    Ok(vec![compat, class])
}

fn xi_label(value: Option<num_complex::Complex64>) -> String {
    match value {
        Some(z) => format!("{:.6}{:+.6}i", z.re, z.im),
        None => "inf".to_owned(),
    }
}

fn scan_xi(common: &Common, grid: usize, kind: GridKind) -> Result<Vec<CheckReport>, UsageError> {
    let model = load_model(common)?;
    let c = model.coframe().ok_or_else(|| usage("scan-xi needs a coframe model"))?;
    let pts = model_points(&model, common)?;
    let side = common.side.map_or(Side::Plus, Side::from);
    let xs = match kind {
        GridKind::Circle => unit_circle_grid(grid),
        GridKind::Sphere => stereographic_grid(grid),
    };
    let scan = integrability_scan(c, side, &xs, &pts, common.tol).map_err(|e| usage(e.to_string()))?;
    let mut out: Vec<CheckReport> = scan
        .entries
        .iter()
        .map(|e| {
            let label = xi_label(e.value);
            CheckReport::from_residual(
                format!("integrable xi={label}"),
                e.max_nijenhuis,
                pts.len(),
                common.seed,
                common.tol,
            )
        })
        .collect();
    let n = scan.candidates().count();
    out.push(
        CheckReport::from_residual(
            "at_most_four_candidates",
            n.saturating_sub(4) as f64,
            pts.len(),
            common.seed,
            0.0,
        )
        .with_detail(format!(
            "{n} of {} grid values integrable at tol {:e}",
            xs.len(),
            common.tol
        )),
    );
    Ok(out)
}

fn pde(common: &Common, k: &str, eps: i8) -> Result<Vec<CheckReport>, UsageError> {
    if eps != 1 && eps != -1 {
        return Err(usage("--eps must be 1 or -1"));
    }
    let k = parse_expression(k, &[]).map_err(|e| usage(format!("--K: {e}")))?;
    let (seed, tol) = (common.seed, common.tol);
    let d = match PrzanowskiData::new(k, eps, DomainSpec::u_prime()) {
        Ok(d) => d,
        Err(e) => {
            return Ok(vec![CheckReport::error(
                "przanowski_residual",
                e.to_string(),
                seed,
                tol,
            )])
        }
    };
    let pts = sample_domain(d.domain(), common.samples, seed).map_err(|e| usage(e.to_string()))?;
    let residual = crate::constructions::przanowski_residual(&d);
    let mut out = vec![match probable_zero_at(&residual, &pts, tol) {
        Ok(v) => CheckReport::from_residual("przanowski_residual", v.max_residual, pts.len(), seed, tol),
        Err(e) => CheckReport::error("przanowski_residual", e.to_string(), seed, tol),
    }];
    match d.admissibility(&pts) {
        Ok(a) => {
            out.push(CheckReport::from_lower_bound(
                "admissible K_v > 0",
                a.min_kv,
                0.0,
                pts.len(),
                seed,
            ));
            out.push(CheckReport::from_lower_bound(
                "admissible eps*K_vv > 0",
                a.min_eps_kvv,
                0.0,
                pts.len(),
                seed,
            ));
        }
        Err(e) => out.push(CheckReport::error("admissible", e.to_string(), seed, tol)),
    }
    Ok(out)
}

fn bfp(common: &Common, f: &str) -> Result<Vec<CheckReport>, UsageError> {
    let f = parse_with(f, &chart_vocabulary(ChartId::GibbonsHawking)).map_err(|e| usage(format!("--F: {e}")))?;
    let (seed, tol) = (common.seed, common.tol);
    let r = match bfp_residual(&f) {
        Ok(r) => r,
        Err(e) => return Ok(vec![CheckReport::error("bfp_residual", e.to_string(), seed, tol)]),
    };
    if r.is_zero() {
        return Ok(vec![
            CheckReport::from_residual("bfp_residual", 0.0, 0, seed, tol).with_detail("identically zero")
        ]);
    }
    let domain = DomainSpec::Box([(0.5, 2.0), (-2.0, 2.0), (-2.0, 2.0), (0.0, 0.0)]);
    let pts = match common.point {
        Some(x) => vec![Point::new(x)],
        None => sample_domain(&domain, common.samples, seed).map_err(|e| usage(e.to_string()))?,
    };
    let mut worst: f64 = 0.0;
    for p in &pts {
        match Evaluator::new(p).eval(&r) {
            Ok(v) => worst = worst.max(v.norm()),
            Err(e) => return Ok(vec![CheckReport::error("bfp_residual", e.to_string(), seed, tol)]),
        }
    }
    Ok(vec![CheckReport::from_residual(
        "bfp_residual",
        worst,
        pts.len(),
        seed,
        tol,
    )])
}

fn suite_check(common: &Common, name: &str) -> Result<Vec<CheckReport>, UsageError> {
    let cx = suite::Context::new(SuiteOptions {
        seed: common.seed,
        samples: common.samples,
    })
    .map_err(usage)?;
    Ok(vec![suite::run_check(&cx, name).expect("known check")])
}

/// Execute a parsed command line and return its reports.
pub fn execute(cli: &Cli) -> Result<Vec<CheckReport>, UsageError> {
    let common = &cli.common;
    if common.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    match &cli.command {
        Command::Verify { suite } => match suite.as_str() {
            "paper" => Ok(paper_suite(SuiteOptions {
                seed: common.seed,
                samples: common.samples,
            })),
            other => Err(usage(format!("unknown suite `{other}` (known: paper)"))),
        },
        Command::Curvature => curvature(common),
        Command::Petrov { expect } => petrov(common, expect.as_deref()),
        Command::Classify { expect } => classify(common, expect.as_deref()),
        Command::ScanXi { grid, kind } => scan_xi(common, *grid, *kind),
        Command::Pde { k, eps } => pde(common, k, *eps),
        Command::Bfp { f } => bfp(common, f),
        Command::PullbackGh => suite_check(common, "gibbons_hawking"),
        Command::GlobalChart => suite_check(common, "global_chart"),
    }
}

/// Run the command, write the reports and return the process exit status.
pub fn run(cli: &Cli) -> i32 {
    let reports = match execute(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("akgeo: {e}");
            return 2;
        }
    };
    let text = render(&reports);
    let written = match &cli.common.json {
        Some(path) => fs::write(path, &text).map(|_| {
            for r in &reports {
                println!(
                    "{:5} {} ({:e})",
                    format!("{:?}", r.status).to_uppercase(),
                    r.name,
                    r.max_residual
                );
            }
        }),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("akgeo: {e}");
        return 2;
    }
    exit_status(&reports)
}

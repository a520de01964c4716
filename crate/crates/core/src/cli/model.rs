//! Line-oriented model files.
//!
//! ```text
//! # comment
//! coords: x1 x2 x3 x4
//! param: phi = 0.5
//! coframe:
//!   M = dz1
//!   N = dz2
//! domain:
//!   box -1 1 -1 1 -1 1 -1 1
//! ```
//!
//! A `metric:` block (`g11 = …` through `g44 = …`, upper triangle, missing
//! entries zero) may replace the `coframe:` block. One-forms are written in
//! `dx1..dx4` with the aliases `dz1 = dx1 + i*dx2`, `dz2 = dx3 + i*dx4`,
//! `dz1b`, `dz2b`. Domains are `uprime`, `uprime <u_min> <u_max>` or
//! `box <lo1> <hi1> … <lo4> <hi4>`.

use std::collections::HashMap;

use thiserror::Error;

use crate::domain::{sample_domain, DomainSpec, SampleError};
use crate::geometry::{metric_from_coframe, CoframeField, GeometryError, MetricField};
use crate::sym::{
    parse_with, substitute_params, CRational, EvalError, Evaluator, Expr, ParseError, Point, Vocabulary, DEFAULT_SEED,
};

const DIFFERENTIALS: [&str; 4] = ["dx1", "dx2", "dx3", "dx4"];
const PROBES: usize = 3;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: {source}")]
    Expression {
        line: usize,
        column: usize,
        source: ParseError,
    },
    #[error("{0}")]
    Structure(String),
    #[error("model is degenerate at a probe point: {0}")]
    Degenerate(#[from] GeometryError),
    #[error("domain: {0}")]
    Domain(#[from] SampleError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug)]
pub enum ModelGeometry {
    Coframe(CoframeField),
    Metric(MetricField),
}

#[derive(Clone, Debug)]
pub struct ModelFile {
    pub coords: [String; 4],
    /// Declared parameters with their default values.
    pub params: Vec<(String, f64)>,
    pub geometry: ModelGeometry,
    pub domain: Option<DomainSpec>,
}

#[derive(Clone, Copy, PartialEq)]
enum Block {
    None,
    Coframe,
    Metric,
    Domain,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    indent: usize,
}

impl Line<'_> {
    fn syntax(&self, at: usize, message: impl Into<String>) -> ModelError {
        ModelError::Syntax {
            line: self.number,
            column: self.indent + at + 1,
            message: message.into(),
        }
    }
}

fn vocabulary(coords: &[String; 4], params: &[(String, f64)]) -> Vocabulary {
    let standard = coords.iter().enumerate().all(|(k, c)| *c == format!("x{}", k + 1));
    let base = if standard {
        Vocabulary::standard()
    } else {
        Vocabulary::chart([&coords[0], &coords[1], &coords[2], &coords[3]].map(String::as_str))
    };
    let names: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).chain(DIFFERENTIALS).collect();
    let dx = DIFFERENTIALS.map(Expr::param);
    let i = Expr::imag_unit();
    let dz1 = &dx[0] + &(&i * &dx[1]);
    let dz2 = &dx[2] + &(&i * &dx[3]);
    base.with_params(&names)
        .with_symbol("dz1b", &dx[0] - &(&i * &dx[1]))
        .with_symbol("dz2b", &dx[2] - &(&i * &dx[3]))
        .with_symbol("dz1", dz1)
        .with_symbol("dz2", dz2)
}

fn parse_expr(line: &Line<'_>, at: usize, text: &str, vocab: &Vocabulary) -> Result<Expr, ModelError> {
    parse_with(text, vocab).map_err(|e| ModelError::Expression {
        line: line.number,
        column: line.indent + at + e.offset() + 1,
        source: e,
    })
}

/// Splits `name = expr`, returning the name and the byte offset of `expr`.
fn assignment<'a>(line: &Line<'a>) -> Result<(&'a str, usize, &'a str), ModelError> {
    let eq = line
        .text
        .find('=')
        .ok_or_else(|| line.syntax(0, "expected `name = expression`"))?;
    let name = line.text[..eq].trim();
    let rhs = &line.text[eq + 1..];
    let lead = rhs.len() - rhs.trim_start().len();
    Ok((name, eq + 1 + lead, rhs.trim()))
}

fn one_form(e: &Expr, line: &Line<'_>) -> Result<[Expr; 4], ModelError> {
    let subs = |k: Option<usize>| -> HashMap<String, Expr> {
        DIFFERENTIALS
            .iter()
            .enumerate()
            .map(|(j, d)| ((*d).to_owned(), if Some(j) == k { Expr::one() } else { Expr::zero() }))
            .collect()
    };
    let coeffs: [Expr; 4] = std::array::from_fn(|k| substitute_params(e, &subs(Some(k))));
    // the expression must be linear and homogeneous in the differentials
    let trial = [1.5, -0.25, 0.75, 2.0];
    let values: HashMap<String, Expr> = DIFFERENTIALS
        .iter()
        .zip(trial)
        .map(|(d, t)| ((*d).to_owned(), Expr::constant(CRational::from_f64(t).unwrap())))
        .collect();
    let lhs = substitute_params(e, &values);
    let rhs = Expr::sum(
        coeffs
            .iter()
            .zip(trial)
            .map(|(c, t)| c.scale(&CRational::from_f64(t).unwrap())),
    );
    let probe = Point::new([0.7, -0.3, 0.2, 0.1]);
    let gap = Evaluator::new(&probe).eval(&(&lhs - &rhs));
    match gap {
        Ok(g) if g.norm() > 1e-9 * (1.0 + Evaluator::new(&probe).eval(&lhs).map(|v| v.norm()).unwrap_or(0.0)) => {
            Err(line.syntax(0, "one-form is not linear in dx1..dx4"))
        }
        _ => Ok(coeffs),
    }
}

fn parse_domain(line: &Line<'_>) -> Result<DomainSpec, ModelError> {
    let mut words = line.text.split_whitespace();
    let head = words.next().unwrap_or_default();
    let nums: Vec<f64> = words
        .map(|w| {
            w.parse::<f64>()
                .map_err(|_| line.syntax(0, format!("`{w}` is not a number")))
        })
        .collect::<Result<_, _>>()?;
    match (head, nums.len()) {
        ("uprime", 0) => Ok(DomainSpec::u_prime()),
        ("uprime", 2) => Ok(DomainSpec::u_prime_margin(nums[0], nums[1])),
        ("box", 8) => Ok(DomainSpec::Box(std::array::from_fn(|k| (nums[2 * k], nums[2 * k + 1])))),
        _ => Err(line.syntax(
            0,
            "expected `uprime [u_min u_max]` or `box lo1 hi1 lo2 hi2 lo3 hi3 lo4 hi4`",
        )),
    }
}

fn metric_slot(name: &str) -> Option<(usize, usize)> {
    let b = name.as_bytes();
    if b.len() != 3 || b[0] != b'g' {
        return None;
    }
    let a = (b[1] as char).to_digit(10)? as usize;
    let c = (b[2] as char).to_digit(10)? as usize;
    ((1..=4).contains(&a) && (a..=4).contains(&c)).then(|| (a - 1, c - 1))
}

/// Parse and validate a model, probing nondegeneracy at seeded domain points.
pub fn parse_model_file(text: &str) -> Result<ModelFile, ModelError> {
    parse_model_file_with(text, DEFAULT_SEED)
}

pub fn parse_model_file_with(text: &str, seed: u64) -> Result<ModelFile, ModelError> {
    let mut coords: Option<[String; 4]> = None;
    let mut params: Vec<(String, f64)> = Vec::new();
    let mut block = Block::None;
    let mut seen_coframe = false;
    let mut seen_metric = false;
    let mut m: Option<[Expr; 4]> = None;
    let mut n: Option<[Expr; 4]> = None;
    let mut g: HashMap<(usize, usize), Expr> = HashMap::new();
    let mut domain = None;

    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or_default();
        let trimmed = content.trim_start();
        let line = Line {
            number: k + 1,
            indent: content.len() - trimmed.len(),
            text: trimmed.trim_end(),
        };
        if line.text.is_empty() {
            continue;
        }
        if let Some(rest) = line.text.strip_prefix("coords:") {
            let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            let names: [String; 4] = names
                .try_into()
                .map_err(|_| line.syntax(0, "`coords:` needs exactly four names"))?;
            coords = Some(names);
            block = Block::None;
            continue;
        }
        if let Some(rest) = line.text.strip_prefix("param:") {
            for item in rest.split(',') {
                let (name, value) = match item.split_once('=') {
                    Some((a, b)) => (
                        a.trim(),
                        b.trim()
                            .parse::<f64>()
                            .map_err(|_| line.syntax(0, format!("bad parameter value `{}`", b.trim())))?,
                    ),
                    None => (item.trim(), 0.0),
                };
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(line.syntax(0, format!("bad parameter name `{name}`")));
                }
                params.push((name.to_owned(), value));
            }
            block = Block::None;
            continue;
        }
        match line.text {
            "coframe:" => {
                if seen_metric {
                    return Err(ModelError::Structure(
                        "both `coframe:` and `metric:` blocks present".into(),
                    ));
                }
                seen_coframe = true;
                block = Block::Coframe;
                continue;
            }
            "metric:" => {
                if seen_coframe {
                    return Err(ModelError::Structure(
                        "both `coframe:` and `metric:` blocks present".into(),
                    ));
                }
                seen_metric = true;
                block = Block::Metric;
                continue;
            }
            "domain:" => {
                block = Block::Domain;
                continue;
            }
            _ => {}
        }
        let names = coords
            .clone()
            .unwrap_or_else(|| DIFFERENTIALS.map(|d| d[1..].to_owned()));
        let vocab = vocabulary(&names, &params);
        match block {
            Block::None => return Err(line.syntax(0, "statement outside a block")),
            Block::Domain => domain = Some(parse_domain(&line)?),
            Block::Coframe => {
                let (name, at, rhs) = assignment(&line)?;
                let e = parse_expr(&line, at, rhs, &vocab)?;
                let form = one_form(&e, &line)?;
                match name {
                    "M" => m = Some(form),
                    "N" => n = Some(form),
                    other => return Err(line.syntax(0, format!("unknown coframe entry `{other}`, expected M or N"))),
                }
            }
            Block::Metric => {
                let (name, at, rhs) = assignment(&line)?;
                let slot = metric_slot(name)
                    .ok_or_else(|| line.syntax(0, format!("`{name}` is not an upper-triangle entry g11..g44")))?;
                let e = parse_expr(&line, at, rhs, &vocab)?;
                if DIFFERENTIALS.iter().any(|d| contains_param(&e, d)) {
                    return Err(line.syntax(at, "metric entries must not contain differentials"));
                }
                g.insert(slot, e);
            }
        }
    }

    let coords = coords.ok_or_else(|| ModelError::Structure("missing `coords:` line".into()))?;
    let geometry = if seen_coframe {
        let (m, n) = match (m, n) {
            (Some(m), Some(n)) => (m, n),
            _ => return Err(ModelError::Structure("coframe block needs both M and N".into())),
        };
        ModelGeometry::Coframe(CoframeField::new(m, n))
    } else if seen_metric {
        let upper = std::array::from_fn(|a| {
            std::array::from_fn(|b| g.get(&(a.min(b), a.max(b))).cloned().unwrap_or_else(Expr::zero))
        });
        ModelGeometry::Metric(MetricField::from_upper(upper))
    } else {
        return Err(ModelError::Structure("missing `coframe:` or `metric:` block".into()));
    };
    let model = ModelFile {
        coords,
        params,
        geometry,
        domain,
    };
    model.validate(seed)?;
    Ok(model)
}

fn contains_param(e: &Expr, name: &str) -> bool {
    if !e.has_params() {
        return false;
    }
    let mut values = HashMap::new();
    values.insert(name.to_owned(), Expr::zero());
    substitute_params(e, &values) != *e
}

impl ModelFile {
    /// The declared domain, or the cube `[−1, 1]⁴`.
    pub fn domain(&self) -> DomainSpec {
        self.domain.clone().unwrap_or_else(|| DomainSpec::cube(-1.0, 1.0))
    }

    pub fn coframe(&self) -> Option<&CoframeField> {
        match &self.geometry {
            ModelGeometry::Coframe(c) => Some(c),
            ModelGeometry::Metric(_) => None,
        }
    }

    /// Parameter values: declared defaults overridden by `overrides`.
    pub fn param_values(&self, overrides: &[(String, f64)]) -> Vec<(String, f64)> {
        self.params
            .iter()
            .map(|(name, default)| {
                let v = overrides.iter().find(|(o, _)| o == name).map_or(*default, |(_, v)| *v);
                (name.clone(), v)
            })
            .collect()
    }

    /// Points from the model domain carrying the parameter values.
    pub fn sample(&self, n: usize, seed: u64, overrides: &[(String, f64)]) -> Result<Vec<Point>, SampleError> {
        let values = self.param_values(overrides);
        Ok(sample_domain(&self.domain(), n, seed)?
            .into_iter()
            .map(|p| values.iter().fold(p, |p, (name, v)| p.with_param(name, *v)))
            .collect())
    }

    /// Attach the parameter values to a point.
    pub fn bind(&self, p: Point, overrides: &[(String, f64)]) -> Point {
        self.param_values(overrides)
            .iter()
            .fold(p, |p, (name, v)| p.with_param(name, *v))
    }

    pub fn metric(&self, probe: &Point) -> Result<MetricField, ModelError> {
        match &self.geometry {
            ModelGeometry::Coframe(c) => Ok(metric_from_coframe(c, probe)?),
            ModelGeometry::Metric(g) => Ok(g.clone()),
        }
    }

    fn validate(&self, seed: u64) -> Result<(), ModelError> {
        let probes = self.sample(PROBES, seed, &[])?;
        match &self.geometry {
            ModelGeometry::Coframe(c) => c.check_nondegenerate(&probes)?,
            ModelGeometry::Metric(g) => {
                for p in &probes {
                    let det = g.at(p)?.determinant();
                    if !(det.abs() > 1e-12) {
                        return Err(GeometryError::SingularMetric { point: p.coords }.into());
                    }
                }
            }
        }
        Ok(())
    }
}

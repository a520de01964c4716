//! Pointwise binary64 evaluation.

use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use super::expr::{Expr, Kind};

pub type ComplexValue = Complex64;

/// Relative size of an imaginary part tolerated on a base that must be real.
const REALITY_TOL: f64 = 1e-10;

/// A point of ℝ⁴ with bindings for named real parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub coords: [f64; 4],
    pub params: BTreeMap<String, f64>,
}

impl Point {
    pub fn new(coords: [f64; 4]) -> Self {
        Point {
            coords,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_owned(), value);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|x| x.is_finite()) && self.params.values().all(|x| x.is_finite())
    }
}

impl From<[f64; 4]> for Point {
    fn from(coords: [f64; 4]) -> Self {
        Point::new(coords)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("domain violation: {reason} in `{node}` (base value {value})")]
    DomainViolation {
        node: String,
        value: Complex64,
        reason: &'static str,
    },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("non-finite value in `{node}`")]
    NonFinite { node: String },
}

#[derive(Default)]
pub(crate) struct IdHasher(u64);

impl Hasher for IdHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 = (self.0 << 8) ^ u64::from(*b);
        }
    }
    fn write_usize(&mut self, n: usize) {
        self.0 = (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
}

type IdMap<V> = HashMap<usize, V, BuildHasherDefault<IdHasher>>;

/// Evaluates any number of expressions at one point, sharing work across
/// common subtrees.
pub struct Evaluator<'p> {
    point: &'p Point,
    // the stored handle pins the node so its address cannot be reused
    memo: IdMap<(Expr, Complex64)>,
}

impl<'p> Evaluator<'p> {
    pub fn new(point: &'p Point) -> Self {
        Evaluator {
            point,
            memo: IdMap::default(),
        }
    }

    pub fn point(&self) -> &Point {
        self.point
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Complex64, EvalError> {
        if let Some((_, v)) = self.memo.get(&e.id()) {
            return Ok(*v);
        }
        let v = match e.kind() {
            Kind::Const(c) => c.to_complex64(),
            Kind::Coord(c) => Complex64::new(self.point.coords[c.slot()], 0.0),
            Kind::Param(p) => match self.point.params.get(p.as_ref()) {
                Some(v) => Complex64::new(*v, 0.0),
                None => return Err(EvalError::UnboundParameter(p.to_string())),
            },
            Kind::Sum { constant, terms } => {
                let mut acc = constant.to_complex64();
                for (c, t) in terms {
                    acc += c.to_complex64() * self.eval(t)?;
                }
                acc
            }
            Kind::Product(factors) => {
                let mut acc = Complex64::one();
                for (b, x) in factors {
                    let base = self.eval(b)?;
                    acc *= if x.is_integer() {
                        let k = x.to_i32().ok_or_else(|| EvalError::NonFinite { node: e.to_string() })?;
                        if k < 0 && base.norm_sqr() == 0.0 {
                            return Err(EvalError::DomainViolation {
                                node: b.to_string(),
                                value: base,
                                reason: "division by zero",
                            });
                        }
                        base.powi(k)
                    } else {
                        let r = positive_real(b, base, "non-integer power of non-positive base")?;
                        Complex64::new(r.powf(x.to_f64().unwrap_or(f64::NAN)), 0.0)
                    };
                }
                acc
            }
            Kind::Exp(a) => self.eval(a)?.exp(),
            Kind::Log(a) => {
                let base = self.eval(a)?;
                Complex64::new(positive_real(a, base, "log of non-positive base")?.ln(), 0.0)
            }
        };
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(EvalError::NonFinite { node: e.to_string() });
        }
        self.memo.insert(e.id(), (e.clone(), v));
        Ok(v)
    }

    pub fn eval_real(&mut self, e: &Expr) -> Result<f64, EvalError> {
        Ok(self.eval(e)?.re)
    }
}

fn positive_real(node: &Expr, v: Complex64, reason: &'static str) -> Result<f64, EvalError> {
    if v.re > 0.0 && v.im.abs() <= REALITY_TOL * v.re.max(1.0) {
        Ok(v.re)
    } else {
        Err(EvalError::DomainViolation {
            node: node.to_string(),
            value: v,
            reason,
        })
    }
}

/// One-shot evaluation.
pub fn evaluate(e: &Expr, p: &Point) -> Result<Complex64, EvalError> {
    Evaluator::new(p).eval(e)
}

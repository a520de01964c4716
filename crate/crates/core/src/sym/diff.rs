//! Exact partial derivatives, Wirtinger derivatives and substitution.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;

use super::expr::{Coordinate, Expr, Kind};
use super::rational::CRational;

/// Memoizing differentiator.
///
/// Keep one instance alive while differentiating many expressions that share
/// subtrees (metric components, inverse-metric entries): each shared node is
/// differentiated once per coordinate.
#[derive(Default)]
pub struct Differentiator {
    cache: HashMap<(Expr, Coordinate), Expr>,
}

impl Differentiator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }

    pub fn d(&mut self, e: &Expr, c: Coordinate) -> Expr {
        if !e.depends_on(c) {
            return Expr::zero();
        }
        let key = (e.clone(), c);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = match e.kind() {
            Kind::Const(_) | Kind::Param(_) => Expr::zero(),
            Kind::Coord(x) => {
                if *x == c {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Kind::Sum { terms, .. } => {
                let parts: Vec<Expr> = terms.iter().map(|(k, t)| self.d(t, c).scale(k)).collect();
                Expr::sum(parts)
            }
            Kind::Product(factors) => {
                let mut parts = Vec::with_capacity(factors.len());
                for (i, (base, exp)) in factors.iter().enumerate() {
                    let db = self.d(base, c);
                    if db.is_zero() {
                        continue;
                    }
                    // exp · base^(exp-1) · d(base) · prod_{j != i} factor_j
                    let mut pieces = Vec::with_capacity(factors.len() + 1);
                    pieces.push(base.pow(exp - BigRational::one()));
                    pieces.push(db);
                    for (j, (b, e)) in factors.iter().enumerate() {
                        if j != i {
                            pieces.push(b.pow(e.clone()));
                        }
                    }
                    parts.push(Expr::product(pieces).scale(&CRational::real(exp.clone())));
                }
                Expr::sum(parts)
            }
            Kind::Exp(a) => {
                let da = self.d(a, c);
                &da * e
            }
            Kind::Log(a) => {
                let da = self.d(a, c);
                &da / a
            }
        };
        self.cache.insert(key, out.clone());
        out
    }

    /// Wirtinger derivative with respect to `z_k` (or `z̄_k` when `barred`),
    /// `∂_k = ½(∂_{x^{2k−1}} − i∂_{x^{2k}})`, `∂_k̄ = ½(∂_{x^{2k−1}} + i∂_{x^{2k}})`.
    pub fn wirtinger(&mut self, e: &Expr, k: u8, barred: bool) -> Expr {
        assert!(k == 1 || k == 2, "Wirtinger index must be 1 or 2, got {k}");
        let re = Coordinate::new(2 * k - 1).unwrap();
        let im = Coordinate::new(2 * k).unwrap();
        let d_re = self.d(e, re);
        let d_im = self.d(e, im);
        let sign = if barred { 1 } else { -1 };
        let half_i = CRational::new(
            BigRational::from_integer(0.into()),
            BigRational::new(sign.into(), 2.into()),
        );
        &d_re.scale(&CRational::ratio(1, 2)) + &d_im.scale(&half_i)
    }
}

/// Exact `∂e/∂xᶜ`.
pub fn differentiate(e: &Expr, c: Coordinate) -> Expr {
    Differentiator::new().d(e, c)
}

/// Exact Wirtinger derivative `∂e/∂z_k` or `∂e/∂z̄_k`.
pub fn wirtinger(e: &Expr, k: u8, barred: bool) -> Expr {
    Differentiator::new().wirtinger(e, k, barred)
}

/// Replace coordinates `x1..x4` by the given expressions (composition `e ∘ φ`).
pub fn substitute(e: &Expr, images: &[Expr; 4]) -> Expr {
    let mut memo = HashMap::new();
    rebuild(e, &mut memo, &|node| match node.kind() {
        Kind::Coord(c) => Some(images[c.slot()].clone()),
        _ => None,
    })
}

/// Replace named parameters; unlisted parameters stay symbolic.
pub fn substitute_params(e: &Expr, values: &HashMap<String, Expr>) -> Expr {
    if !e.has_params() {
        return e.clone();
    }
    let mut memo = HashMap::new();
    rebuild(e, &mut memo, &|node| match node.kind() {
        Kind::Param(p) => values.get(p.as_ref()).cloned(),
        _ => None,
    })
}

fn rebuild(e: &Expr, memo: &mut HashMap<usize, Expr>, leaf: &dyn Fn(&Expr) -> Option<Expr>) -> Expr {
    if let Some(hit) = memo.get(&e.id()) {
        return hit.clone();
    }
    let out = match e.kind() {
        Kind::Const(_) => e.clone(),
        Kind::Coord(_) | Kind::Param(_) => leaf(e).unwrap_or_else(|| e.clone()),
        Kind::Sum { constant, terms } => {
            let mut parts = Vec::with_capacity(terms.len() + 1);
            parts.push(Expr::constant(constant.clone()));
            for (c, t) in terms {
                parts.push(rebuild(t, memo, leaf).scale(c));
            }
            Expr::sum(parts)
        }
        Kind::Product(factors) => Expr::product(factors.iter().map(|(b, x)| rebuild(b, memo, leaf).pow(x.clone()))),
        Kind::Exp(a) => rebuild(a, memo, leaf).exp(),
        Kind::Log(a) => rebuild(a, memo, leaf).log(),
    };
    memo.insert(e.id(), out.clone());
    out
}

//! The ξ-family of almost-hermitian structures built from a null coframe.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::geometry::{det_inverse, CoframeField, ExprMatrix, KForm, MetricField, Side};
use crate::sym::{CRational, EvalError, Evaluator, Expr, Point};

use super::HermitianError;

/// `ξ ∈ ℂ ∪ {∞}`. A finite value is any coordinate-free expression, so
/// `exp(i*phi)` with a bound parameter is allowed.
#[derive(Clone, Debug, PartialEq)]
pub enum XiParameter {
    Finite(Expr),
    Infinity,
}

impl XiParameter {
    pub fn zero() -> Self {
        XiParameter::Finite(Expr::zero())
    }

    /// Exact binary value of a finite complex number.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        CRational::from_complex64(z).map(|c| XiParameter::Finite(Expr::constant(c)))
    }

    /// `e^{iφ}` for a real coordinate-free `phi`.
    pub fn unit(phi: &Expr) -> Self {
        XiParameter::Finite((&Expr::imag_unit() * phi).exp())
    }

    pub fn finite(e: Expr) -> Result<Self, HermitianError> {
        if e.is_constant_in_coordinates() {
            Ok(XiParameter::Finite(e))
        } else {
            Err(HermitianError::XiNotConstant(e.to_string()))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, XiParameter::Infinity)
    }

    /// Numeric value, `None` for `∞`.
    pub fn value(&self, p: &Point) -> Result<Option<Complex64>, EvalError> {
        match self {
            XiParameter::Infinity => Ok(None),
            XiParameter::Finite(e) => Evaluator::new(p).eval(e).map(Some),
        }
    }
}

impl fmt::Display for XiParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiParameter::Infinity => f.write_str("inf"),
            XiParameter::Finite(e) => write!(f, "{e}"),
        }
    }
}

/// Accepts `inf`, `a`, `bi`, `a+bi`, `a-bi` with decimal `a`, `b`.
impl FromStr for XiParameter {
    type Err = HermitianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || HermitianError::XiSyntax(s.to_string());
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(XiParameter::Infinity);
        }
        let z = if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not an exponent sign or the leading one
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            let (re, im) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?)
        } else {
            Complex64::new(t.parse().map_err(|_| bad())?, 0.0)
        };
        XiParameter::from_complex(z).ok_or_else(bad)
    }
}

/// Coframe with its dual frame `(m, m̄, n, n̄)`, `M(m) = 1` etc.
#[derive(Clone, Debug)]
pub struct NullFrame {
    coframe: CoframeField,
    /// vectors `m, m̄, n, n̄` by components
    vectors: [[Expr; 4]; 4],
}

impl NullFrame {
    pub fn new(c: &CoframeField) -> Result<Self, HermitianError> {
        let (det, inv) = det_inverse(&c.rows());
        if det.is_zero() {
            return Err(HermitianError::DegenerateCoframe);
        }
        // columns of the inverse are the dual vectors
        let vectors = std::array::from_fn(|i| std::array::from_fn(|a| inv[a][i].clone()));
        Ok(NullFrame {
            coframe: c.clone(),
            vectors,
        })
    }

    pub fn coframe(&self) -> &CoframeField {
        &self.coframe
    }

    pub fn m(&self) -> &[Expr; 4] {
        &self.vectors[0]
    }

    pub fn m_bar(&self) -> &[Expr; 4] {
        &self.vectors[1]
    }

    pub fn n(&self) -> &[Expr; 4] {
        &self.vectors[2]
    }

    pub fn n_bar(&self) -> &[Expr; 4] {
        &self.vectors[3]
    }

    /// `(M_ξ, M̄_ξ, N_ξ, N̄_ξ)` and `(m_ξ, m̄_ξ, n_ξ, n̄_ξ)`.
    pub fn rotated(&self, xi: &XiParameter) -> ([[Expr; 4]; 4], [[Expr; 4]; 4]) {
        let forms = rotated_coframe(&self.coframe, xi);
        let (m, n) = match xi {
            XiParameter::Infinity => (neg(self.n_bar()), self.m_bar().clone()),
            XiParameter::Finite(x) if x.is_zero() => (self.m().clone(), self.n().clone()),
            XiParameter::Finite(x) => {
                let norm = xi_norm(x);
                (
                    std::array::from_fn(|k| &(&self.m()[k] - &(x * &self.n_bar()[k])) * &norm),
                    std::array::from_fn(|k| &(&self.n()[k] + &(x * &self.m_bar()[k])) * &norm),
                )
            }
        };
        let mb = std::array::from_fn(|k| m[k].conj());
        let nb = std::array::from_fn(|k| n[k].conj());
        (forms, [m, mb, n, nb])
    }
}

/// `1/√(1 + ξξ̄)`
fn xi_norm(x: &Expr) -> Expr {
    (&Expr::one() + &(x * &x.conj())).sqrt().recip()
}

fn neg(v: &[Expr; 4]) -> [Expr; 4] {
    std::array::from_fn(|k| -&v[k])
}

/// Where a structure came from, when it was built from a coframe.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub xi: XiParameter,
    pub coframe: CoframeField,
}

/// Mixed tensor `J^a_b` (row `a`, column `b`), acting as `(JX)^a = J^a_b X^b`.
#[derive(Clone, Debug)]
pub struct AlmostComplexStructure {
    j: ExprMatrix,
    side: Option<Side>,
    provenance: Option<Provenance>,
}

impl AlmostComplexStructure {
    pub fn new(j: ExprMatrix) -> Self {
        AlmostComplexStructure {
            j,
            side: None,
            provenance: None,
        }
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = Some(side);
        self
    }

    pub fn components(&self) -> &ExprMatrix {
        &self.j
    }

    pub fn get(&self, a: usize, b: usize) -> &Expr {
        &self.j[a][b]
    }

    pub fn side(&self) -> Option<Side> {
        self.side
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        AlmostComplexStructure {
            j: std::array::from_fn(|a| std::array::from_fn(|b| f(&self.j[a][b]))),
            side: self.side,
            provenance: self.provenance.clone(),
        }
    }

    pub fn eval_with(&self, ev: &mut Evaluator<'_>) -> Result<Matrix4<Complex64>, EvalError> {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                m[(a, b)] = ev.eval(&self.j[a][b])?;
            }
        }
        Ok(m)
    }

    pub fn at(&self, p: &Point) -> Result<Matrix4<Complex64>, EvalError> {
        self.eval_with(&mut Evaluator::new(p))
    }

    /// `J(X)` for a vector given by components.
    pub fn apply(&self, x: &[Expr; 4]) -> [Expr; 4] {
        std::array::from_fn(|a| Expr::sum((0..4).map(|b| &self.j[a][b] * &x[b])))
    }
}

/// `Σ vec^a ⊗ form_b` with signs.
fn outer_sum(terms: &[(i64, &[Expr; 4], &[Expr; 4])], factor: &Expr) -> ExprMatrix {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let parts = terms.iter().filter_map(|(s, v, w)| {
                if v[a].is_zero() || w[b].is_zero() {
                    return None;
                }
                let t = &v[a] * &w[b];
                Some(if *s < 0 { -t } else { t })
            });
            &Expr::sum(parts) * factor
        })
    })
}

/// `J^±_ξ` from a precomputed null frame.
pub fn xi_structure_with(frame: &NullFrame, xi: &XiParameter, side: Side) -> AlmostComplexStructure {
    let ([mf, mbf, nf, nbf], [mv, mbv, nv, nbv]) = frame.rotated(xi);
    // J⁺ = i(m̄ M̄ − m M + n̄ N̄ − n N), J⁻ flips the M pair
    let s = match side {
        Side::Plus => 1,
        Side::Minus => -1,
    };
    let j = outer_sum(
        &[(s, &mbv, &mbf), (-s, &mv, &mf), (1, &nbv, &nbf), (-1, &nv, &nf)],
        &Expr::imag_unit(),
    );
    AlmostComplexStructure {
        j,
        side: Some(side),
        provenance: Some(Provenance {
            xi: xi.clone(),
            coframe: frame.coframe().clone(),
        }),
    }
}

/// `J^±_ξ` of a coframe.
pub fn xi_structure(c: &CoframeField, xi: &XiParameter, side: Side) -> Result<AlmostComplexStructure, HermitianError> {
    Ok(xi_structure_with(&NullFrame::new(c)?, xi, side))
}

/// `ω⁺_ξ = i(M_ξ∧M̄_ξ + N_ξ∧N̄_ξ)`, `ω⁻_ξ = i(M̄_ξ∧M_ξ + N_ξ∧N̄_ξ)`.
pub fn xi_fundamental_form(c: &CoframeField, xi: &XiParameter, side: Side) -> KForm {
    // the rotated coframe does not need the dual frame
    let rot = rotated_coframe(c, xi);
    let one = |k: usize| KForm::one_form(rot[k].clone());
    let mm = match side {
        Side::Plus => one(0).wedge(&one(1)),
        Side::Minus => one(1).wedge(&one(0)),
    };
    mm.add(&one(2).wedge(&one(3))).scale(&Expr::imag_unit())
}

fn rotated_coframe(c: &CoframeField, xi: &XiParameter) -> [[Expr; 4]; 4] {
    let (m, n) = match xi {
        XiParameter::Infinity => (neg(c.n_bar()), c.m_bar().clone()),
        XiParameter::Finite(x) if x.is_zero() => (c.m().clone(), c.n().clone()),
        XiParameter::Finite(x) => {
            let xb = x.conj();
            let norm = xi_norm(x);
            (
                std::array::from_fn(|k| &(&c.m()[k] - &(&xb * &c.n_bar()[k])) * &norm),
                std::array::from_fn(|k| &(&c.n()[k] + &(&xb * &c.m_bar()[k])) * &norm),
            )
        }
    };
    let mb = std::array::from_fn(|k| m[k].conj());
    let nb = std::array::from_fn(|k| n[k].conj());
    [m, mb, n, nb]
}

/// `ω_ab = g_ac J^c_b`, built from the upper triangle.
pub fn fundamental_form(g: &MetricField, j: &AlmostComplexStructure) -> KForm {
    KForm::two_form_from_matrix(&lowered(g, j))
}

fn lowered(g: &MetricField, j: &AlmostComplexStructure) -> ExprMatrix {
    let gc = g.components();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            Expr::sum(
                (0..4)
                    .filter(|&c| !gc[a][c].is_zero() && !j.j[c][b].is_zero())
                    .map(|c| &gc[a][c] * &j.j[c][b]),
            )
        })
    })
}

/// [`fundamental_form`], failing if `g_ac J^c_b` is not antisymmetric within
/// `tol` at the given points.
pub fn fundamental_form_checked(
    g: &MetricField,
    j: &AlmostComplexStructure,
    points: &[Point],
    tol: f64,
) -> Result<KForm, HermitianError> {
    let low = lowered(g, j);
    let mut worst: f64 = 0.0;
    for p in points {
        let mut ev = Evaluator::new(p);
        for a in 0..4 {
            for b in a..4 {
                let s = ev.eval(&low[a][b])? + ev.eval(&low[b][a])?;
                worst = worst.max(s.norm());
            }
        }
    }
    if worst > tol {
        return Err(HermitianError::Incompatible { residual: worst });
    }
    Ok(KForm::two_form_from_matrix(&low))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_xi() {
        assert_eq!("inf".parse::<XiParameter>().unwrap(), XiParameter::Infinity);
        let v = |s: &str| {
            s.parse::<XiParameter>()
                .unwrap()
                .value(&Point::new([0.0; 4]))
                .unwrap()
                .unwrap()
        };
        assert_eq!(v("0.5-2i"), Complex64::new(0.5, -2.0));
        assert_eq!(v("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(v("1e-3+1e-2i"), Complex64::new(1e-3, 1e-2));
        assert_eq!(v("3"), Complex64::new(3.0, 0.0));
        assert!("1+2j".parse::<XiParameter>().is_err());
    }

    #[test]
    fn flat_plus_structure_acts_on_m() {
        let frame = NullFrame::new(&CoframeField::flat()).unwrap();
        let j = xi_structure_with(&frame, &XiParameter::zero(), Side::Plus);
        let jm = j.apply(frame.m());
        let jmb = j.apply(frame.m_bar());
        for k in 0..4 {
            assert_eq!(jm[k], &frame.m()[k] * &Expr::imag_unit().scale(&CRational::int(-1)));
            assert_eq!(jmb[k], &frame.m_bar()[k] * &Expr::imag_unit());
        }
    }

    #[test]
    fn flat_fundamental_forms() {
        let c = CoframeField::flat();
        let e = |a: usize, b: usize| KForm::dx(a).wedge(&KForm::dx(b));
        let plus = xi_fundamental_form(&c, &XiParameter::zero(), Side::Plus);
        assert_eq!(plus, e(0, 1).add(&e(2, 3)).scale(&Expr::int(2)));
        let minus = xi_fundamental_form(&c, &XiParameter::zero(), Side::Minus);
        assert_eq!(minus, e(2, 3).sub(&e(0, 1)).scale(&Expr::int(2)));
        let g = MetricField::euclidean();
        let j = xi_structure(&c, &XiParameter::zero(), Side::Plus).unwrap();
        assert_eq!(fundamental_form(&g, &j), e(0, 1).add(&e(2, 3)));
    }

    #[test]
    fn infinity_is_minus_zero() {
        let c = CoframeField::new(
            [Expr::x(3).exp(), Expr::imag_unit(), Expr::x(1), Expr::zero()],
            [Expr::zero(), Expr::int(2), Expr::one(), Expr::imag_unit()],
        );
        let frame = NullFrame::new(&c).unwrap();
        let j0 = xi_structure_with(&frame, &XiParameter::zero(), Side::Plus);
        let jinf = xi_structure_with(&frame, &XiParameter::Infinity, Side::Plus);
        let p = Point::new([0.2, 0.4, -0.3, 0.8]);
        let diff = j0.at(&p).unwrap() + jinf.at(&p).unwrap();
        assert!(diff.norm() < 1e-12);
    }
}

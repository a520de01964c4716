//! Null coframes, metrics and pullbacks.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::sym::{substitute, CRational, Coordinate, Differentiator, EvalError, Evaluator, Expr, Point};

use super::forms::KForm;
use super::matrix::{det_inverse, ExprMatrix};
use super::GeometryError;

/// Relative threshold below which `|M∧M̄∧N∧N̄|` counts as degenerate.
const DEGENERACY_TOL: f64 = 1e-12;

/// Orientation of ℝ⁴ relative to `dx1∧dx2∧dx3∧dx4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Complex null coframe `(M, M̄, N, N̄)` given by the `dx` components of `M`
/// and `N`; the barred forms are conjugates.
#[derive(Clone, Debug)]
pub struct CoframeField {
    m: [Expr; 4],
    n: [Expr; 4],
    m_bar: [Expr; 4],
    n_bar: [Expr; 4],
}

impl CoframeField {
    pub fn new(m: [Expr; 4], n: [Expr; 4]) -> Self {
        let m_bar = std::array::from_fn(|a| m[a].conj());
        let n_bar = std::array::from_fn(|a| n[a].conj());
        CoframeField { m, n, m_bar, n_bar }
    }

    /// `M = dz1`, `N = dz2`.
    pub fn flat() -> Self {
        let i = Expr::imag_unit();
        CoframeField::new(
            [Expr::one(), i.clone(), Expr::zero(), Expr::zero()],
            [Expr::zero(), Expr::zero(), Expr::one(), i],
        )
    }

    pub fn m(&self) -> &[Expr; 4] {
        &self.m
    }

    pub fn n(&self) -> &[Expr; 4] {
        &self.n
    }

    pub fn m_bar(&self) -> &[Expr; 4] {
        &self.m_bar
    }

    pub fn n_bar(&self) -> &[Expr; 4] {
        &self.n_bar
    }

    /// Rows `M, M̄, N, N̄` of the coframe matrix.
    pub fn rows(&self) -> ExprMatrix {
        [self.m.clone(), self.m_bar.clone(), self.n.clone(), self.n_bar.clone()]
    }

    pub fn one_forms(&self) -> [KForm; 4] {
        [
            KForm::one_form(self.m.clone()),
            KForm::one_form(self.m_bar.clone()),
            KForm::one_form(self.n.clone()),
            KForm::one_form(self.n_bar.clone()),
        ]
    }

    /// `det[M; M̄; N; N̄]`, the coefficient of `M∧M̄∧N∧N̄` on `dx1∧dx2∧dx3∧dx4`.
    pub fn volume_coefficient(&self, p: &Point) -> Result<Complex64, EvalError> {
        let mut ev = Evaluator::new(p);
        let rows = self.rows();
        let mut m = Matrix4::<Complex64>::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = ev.eval(e)?;
            }
        }
        Ok(m.determinant())
    }

    /// Fails if `M∧M̄∧N∧N̄` vanishes at any probe point.
    pub fn check_nondegenerate(&self, points: &[Point]) -> Result<(), GeometryError> {
        for p in points {
            let scale = self.component_scale(p)?;
            let det = self.volume_coefficient(p)?;
            if det.norm() <= DEGENERACY_TOL * scale.powi(4).max(1e-300) {
                return Err(GeometryError::DegenerateCoframe { point: p.coords });
            }
        }
        Ok(())
    }

    fn component_scale(&self, p: &Point) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(p);
        let mut s: f64 = 0.0;
        for e in self.m.iter().chain(&self.n) {
            s = s.max(ev.eval(e)?.norm());
        }
        Ok(s)
    }

    /// Orientation of the real frame `θ¹∧θ²∧θ³∧θ⁴ = −M∧M̄∧N∧N̄`.
    pub fn orientation(&self, p: &Point) -> Result<Orientation, GeometryError> {
        let det = self.volume_coefficient(p)?;
        Ok(if -det.re > 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        })
    }
}

/// Symmetric metric `g_ab` in the coordinate basis, with the orientation used
/// by the Hodge star and the self-dual/anti-self-dual split.
#[derive(Clone, Debug)]
pub struct MetricField {
    g: ExprMatrix,
    orientation: Orientation,
}

impl MetricField {
    /// From the upper triangle; the lower triangle mirrors it exactly.
    pub fn from_upper(upper: [[Expr; 4]; 4]) -> Self {
        let g = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                if a <= b {
                    upper[a][b].clone()
                } else {
                    upper[b][a].clone()
                }
            })
        });
        MetricField {
            g,
            orientation: Orientation::Positive,
        }
    }

    pub fn diagonal(d: [Expr; 4]) -> Self {
        let g = std::array::from_fn(|a| std::array::from_fn(|b| if a == b { d[a].clone() } else { Expr::zero() }));
        MetricField {
            g,
            orientation: Orientation::Positive,
        }
    }

    pub fn euclidean() -> Self {
        MetricField::diagonal(std::array::from_fn(|_| Expr::one()))
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn components(&self) -> &ExprMatrix {
        &self.g
    }

    pub fn get(&self, a: usize, b: usize) -> &Expr {
        &self.g[a][b]
    }

    /// Symbolic determinant and inverse.
    pub fn det_inverse(&self) -> (Expr, ExprMatrix) {
        det_inverse(&self.g)
    }

    pub fn eval_with(&self, ev: &mut Evaluator<'_>) -> Result<Matrix4<f64>, EvalError> {
        let mut m = Matrix4::zeros();
        for a in 0..4 {
            for b in a..4 {
                let v = ev.eval(&self.g[a][b])?.re;
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        Ok(m)
    }

    pub fn at(&self, p: &Point) -> Result<Matrix4<f64>, EvalError> {
        self.eval_with(&mut Evaluator::new(p))
    }

    /// Largest imaginary part of any component at `p` (zero for a real metric).
    pub fn imaginary_residual(&self, p: &Point) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(p);
        let mut r: f64 = 0.0;
        for row in &self.g {
            for e in row {
                r = r.max(ev.eval(e)?.im.abs());
            }
        }
        Ok(r)
    }

    /// Leading principal minors at `p`.
    pub fn leading_minors(&self, p: &Point) -> Result<[f64; 4], EvalError> {
        let m = self.at(p)?;
        Ok(std::array::from_fn(|k| m.view((0, 0), (k + 1, k + 1)).determinant()))
    }

    /// All leading principal minors positive at every point.
    pub fn check_positive_definite(&self, points: &[Point]) -> Result<(), GeometryError> {
        for p in points {
            let minors = self.leading_minors(p)?;
            if minors.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
                return Err(GeometryError::NotPositiveDefinite {
                    point: p.coords,
                    minors,
                });
            }
        }
        Ok(())
    }

    /// Evaluate `g(X, Y)` symbolically for vector fields given by components.
    pub fn pair(&self, x: &[Expr; 4], y: &[Expr; 4]) -> Expr {
        let mut parts = Vec::with_capacity(16);
        for a in 0..4 {
            for b in 0..4 {
                if x[a].is_zero() || y[b].is_zero() || self.g[a][b].is_zero() {
                    continue;
                }
                parts.push(Expr::product([x[a].clone(), self.g[a][b].clone(), y[b].clone()]));
            }
        }
        Expr::sum(parts)
    }
}

/// `g = M⊗M̄ + M̄⊗M + N⊗N̄ + N̄⊗N`, oriented by the coframe.
pub fn metric_from_coframe(c: &CoframeField, probe: &Point) -> Result<MetricField, GeometryError> {
    c.check_nondegenerate(std::slice::from_ref(probe))?;
    let upper = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            if a > b {
                return Expr::zero();
            }
            Expr::sum([
                &c.m[a] * &c.m_bar[b],
                &c.m_bar[a] * &c.m[b],
                &c.n[a] * &c.n_bar[b],
                &c.n_bar[a] * &c.n[b],
            ])
        })
    });
    Ok(MetricField::from_upper(upper).with_orientation(c.orientation(probe)?))
}

/// Pullback `(φ*g)_ab = ∂_a φ^c ∂_b φ^d (g_cd ∘ φ)` along `map`, whose four
/// components are written in the source coordinates `x1..x4`. The result is
/// oriented by the source coordinates.
pub fn pullback_metric(map: &[Expr; 4], g: &MetricField) -> MetricField {
    let mut diff = Differentiator::new();
    let jac: [[Expr; 4]; 4] =
        std::array::from_fn(|c| std::array::from_fn(|a| diff.d(&map[c], Coordinate::from_slot(a))));
    let g_phi: ExprMatrix = std::array::from_fn(|c| std::array::from_fn(|d| substitute(&g.g[c][d], map)));
    let upper = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            if a > b {
                return Expr::zero();
            }
            let mut parts = Vec::new();
            for c in 0..4 {
                for d in 0..4 {
                    if jac[c][a].is_zero() || jac[d][b].is_zero() || g_phi[c][d].is_zero() {
                        continue;
                    }
                    parts.push(Expr::product([
                        jac[c][a].clone(),
                        jac[d][b].clone(),
                        g_phi[c][d].clone(),
                    ]));
                }
            }
            Expr::sum(parts)
        })
    });
    MetricField::from_upper(upper)
}

/// `λ·g`
pub fn scaled(g: &MetricField, factor: &CRational) -> MetricField {
    MetricField {
        g: std::array::from_fn(|a| std::array::from_fn(|b| g.g[a][b].scale(factor))),
        orientation: g.orientation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_coframe_gives_twice_euclidean() {
        let g = metric_from_coframe(&CoframeField::flat(), &Point::new([0.0; 4])).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let expect = if a == b { 2 } else { 0 };
                assert_eq!(*g.get(a, b), Expr::int(expect), "g[{a}][{b}]");
            }
        }
        assert_eq!(g.orientation(), Orientation::Positive);
    }

    #[test]
    fn repeated_one_form_is_degenerate() {
        let dz1 = CoframeField::flat().m().clone();
        let c = CoframeField::new(dz1.clone(), dz1);
        let err = metric_from_coframe(&c, &Point::new([0.0; 4])).unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateCoframe { .. }));
    }

    #[test]
    fn pullback_by_identity_and_dilation() {
        let g = MetricField::euclidean();
        let id: [Expr; 4] = std::array::from_fn(|k| Expr::x(k as u8 + 1));
        let same = pullback_metric(&id, &g);
        assert_eq!(same.components(), g.components());
        let twice: [Expr; 4] = std::array::from_fn(|k| Expr::x(k as u8 + 1).scale(&CRational::int(2)));
        let four = pullback_metric(&twice, &g);
        assert_eq!(four.components(), scaled(&g, &CRational::int(4)).components());
    }
}

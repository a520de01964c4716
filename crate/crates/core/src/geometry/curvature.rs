//! Levi-Civita connection and curvature.
//!
//! Conventions:
//! `Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{db} − ∂_d g_{bc})`,
//! `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} − Γ^a_{de} Γ^e_{cb}`,
//! `R_{bd} = R^a_{bad}`, `R = g^{bd} R_{bd}`, and the Weyl tensor
//! `C_{abcd} = R_{abcd} − ½(g_{ac}R_{bd} − g_{ad}R_{bc} + g_{bd}R_{ac} − g_{bc}R_{ad})
//!  + (R/6)(g_{ac}g_{bd} − g_{ad}g_{bc})`.

use nalgebra::Matrix4;

use crate::sym::{CRational, Coordinate, Differentiator, EvalError, Evaluator, Expr, Point};

use super::matrix::ExprMatrix;
use super::metric::MetricField;

pub type Rank3 = [[[Expr; 4]; 4]; 4];
pub type Rank4 = [[[[Expr; 4]; 4]; 4]; 4];
pub type Num3 = [[[f64; 4]; 4]; 4];
pub type Num4 = [[[[f64; 4]; 4]; 4]; 4];

fn rank3(mut f: impl FnMut(usize, usize, usize) -> Expr) -> Rank3 {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| f(a, b, c))))
}

fn rank4(mut f: impl FnMut(usize, usize, usize, usize) -> Expr) -> Rank4 {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| std::array::from_fn(|d| f(a, b, c, d)))))
}

fn eval3(t: &Rank3, ev: &mut Evaluator<'_>) -> Result<Num3, EvalError> {
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[a][b][c] = ev.eval(&t[a][b][c])?.re;
            }
        }
    }
    Ok(out)
}

fn eval4(t: &Rank4, ev: &mut Evaluator<'_>) -> Result<Num4, EvalError> {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a][b][c][d] = ev.eval(&t[a][b][c][d])?.re;
                }
            }
        }
    }
    Ok(out)
}

fn sum_products<'a>(pairs: impl IntoIterator<Item = (&'a Expr, &'a Expr)>) -> Expr {
    Expr::sum(
        pairs
            .into_iter()
            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
            .map(|(x, y)| x * y),
    )
}

/// Symbolic first jet of the metric together with both kinds of Christoffel symbols.
struct Jet {
    diff: Differentiator,
    ginv: ExprMatrix,
    /// `dg[c][a][b] = ∂_c g_ab`
    dg: Rank3,
    /// `first[d][b][c] = Γ_{d,bc}`
    first: Rank3,
    gamma: Rank3,
}

impl Jet {
    fn new(g: &MetricField) -> Self {
        let mut diff = Differentiator::new();
        let (_, ginv) = g.det_inverse();
        let comps = g.components();
        let dg_vec: Vec<Vec<Vec<Expr>>> = (0..4)
            .map(|c| {
                (0..4)
                    .map(|a| (0..4).map(|b| diff.d(&comps[a][b], Coordinate::from_slot(c))).collect())
                    .collect()
            })
            .collect();
        let dg = rank3(|c, a, b| dg_vec[c][a][b].clone());
        let half = CRational::ratio(1, 2);
        let first = rank3(|d, b, c| {
            if c < b {
                return Expr::zero();
            }
            Expr::sum([dg[b][d][c].clone(), dg[c][d][b].clone(), -&dg[d][b][c]]).scale(&half)
        });
        let first = rank3(|d, b, c| {
            if c < b {
                first[d][c][b].clone()
            } else {
                first[d][b][c].clone()
            }
        });
        let gamma = rank3(|a, b, c| {
            if c < b {
                return Expr::zero();
            }
            sum_products((0..4).map(|d| (&ginv[a][d], &first[d][b][c])))
        });
        let gamma = rank3(|a, b, c| {
            if c < b {
                gamma[a][c][b].clone()
            } else {
                gamma[a][b][c].clone()
            }
        });
        Jet {
            diff,
            ginv,
            dg,
            first,
            gamma,
        }
    }

    /// `dgamma[c][a][d][b] = ∂_c Γ^a_{db}`, using `∂_c g^{ae} = −g^{af} ∂_c g_{fh} g^{he}`.
    fn christoffel_derivatives(&mut self) -> Rank4 {
        let half = CRational::ratio(1, 2);
        let mut ddg: Vec<Vec<Vec<Vec<Expr>>>> = vec![vec![vec![vec![Expr::zero(); 4]; 4]; 4]; 4];
        for c in 0..4 {
            for e in 0..4 {
                for a in 0..4 {
                    for b in 0..4 {
                        ddg[c][e][a][b] = self.diff.d(&self.dg[e][a][b], Coordinate::from_slot(c));
                    }
                }
            }
        }
        let ginv = &self.ginv;
        let dg = &self.dg;
        // ∂_c g^{ae}
        let dginv = rank3(|c, a, e| {
            let mut parts = Vec::new();
            for f in 0..4 {
                for h in 0..4 {
                    if ginv[a][f].is_zero() || dg[c][f][h].is_zero() || ginv[h][e].is_zero() {
                        continue;
                    }
                    parts.push(Expr::product([
                        ginv[a][f].clone(),
                        dg[c][f][h].clone(),
                        ginv[h][e].clone(),
                    ]));
                }
            }
            -Expr::sum(parts)
        });
        // ∂_c Γ_{e,db}
        let dfirst = rank4(|c, e, d, b| {
            Expr::sum([ddg[c][d][e][b].clone(), ddg[c][b][e][d].clone(), -&ddg[c][e][d][b]]).scale(&half)
        });
        let first = &self.first;
        rank4(|c, a, d, b| {
            if b < d {
                return Expr::zero();
            }
            Expr::sum([
                sum_products((0..4).map(|e| (&dginv[c][a][e], &first[e][d][b]))),
                sum_products((0..4).map(|e| (&ginv[a][e], &dfirst[c][e][d][b]))),
            ])
        })
    }
}

/// Levi-Civita connection `Γ^a_{bc}`, symmetric in `(b, c)`.
#[derive(Clone, Debug)]
pub struct Connection {
    gamma: Rank3,
}

impl Connection {
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Expr {
        &self.gamma[a][b][c]
    }

    pub fn components(&self) -> &Rank3 {
        &self.gamma
    }

    pub fn eval_with(&self, ev: &mut Evaluator<'_>) -> Result<Num3, EvalError> {
        eval3(&self.gamma, ev)
    }

    pub fn at(&self, p: &Point) -> Result<Num3, EvalError> {
        self.eval_with(&mut Evaluator::new(p))
    }

    /// `max |∇_a g_bc|` over `points`, with `∂g` evaluated from `g` exactly.
    pub fn metricity_residual(&self, g: &MetricField, points: &[Point]) -> Result<f64, EvalError> {
        let mut diff = Differentiator::new();
        let comps = g.components();
        let dg = rank3(|c, a, b| diff.d(&comps[a][b], Coordinate::from_slot(c)));
        let mut worst: f64 = 0.0;
        for p in points {
            let mut ev = Evaluator::new(p);
            let gm = g.eval_with(&mut ev)?;
            let gam = self.eval_with(&mut ev)?;
            let d = eval3(&dg, &mut ev)?;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let mut r = d[a][b][c];
                        for e in 0..4 {
                            r -= gam[e][a][b] * gm[(e, c)] + gam[e][a][c] * gm[(b, e)];
                        }
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// Symbolic Levi-Civita connection of `g`.
pub fn levi_civita(g: &MetricField) -> Connection {
    Connection {
        gamma: Jet::new(g).gamma,
    }
}

/// Riemann, Ricci, scalar and Weyl tensors of a metric, held symbolically.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    metric: MetricField,
    ginv: ExprMatrix,
    connection: Connection,
    riemann: Rank4,
    ricci: ExprMatrix,
    scalar: Expr,
    weyl: Rank4,
}

/// Numeric values of a [`CurvatureBundle`] at one point.
#[derive(Clone, Debug)]
pub struct CurvatureValues {
    pub metric: Matrix4<f64>,
    pub inverse: Matrix4<f64>,
    pub christoffel: Num3,
    /// `R^a_{bcd}`
    pub riemann: Num4,
    pub ricci: Matrix4<f64>,
    pub scalar: f64,
    /// `C_{abcd}`
    pub weyl: Num4,
}

pub fn curvature_bundle(g: &MetricField) -> CurvatureBundle {
    let mut jet = Jet::new(g);
    let dgamma = jet.christoffel_derivatives();
    let gamma = &jet.gamma;
    let riemann_cd = rank4(|a, b, c, d| {
        if d <= c {
            return Expr::zero();
        }
        let lead = |c: usize, d: usize| {
            if b < d {
                &dgamma[c][a][b][d]
            } else {
                &dgamma[c][a][d][b]
            }
        };
        Expr::sum([
            lead(c, d).clone(),
            -lead(d, c),
            sum_products((0..4).map(|e| (&gamma[a][c][e], &gamma[e][d][b]))),
            -sum_products((0..4).map(|e| (&gamma[a][d][e], &gamma[e][c][b]))),
        ])
    });
    let riemann = rank4(|a, b, c, d| {
        if d > c {
            riemann_cd[a][b][c][d].clone()
        } else if d < c {
            -&riemann_cd[a][b][d][c]
        } else {
            Expr::zero()
        }
    });
    let ricci: ExprMatrix =
        std::array::from_fn(|b| std::array::from_fn(|d| Expr::sum((0..4).map(|a| riemann[a][b][a][d].clone()))));
    let ginv = jet.ginv.clone();
    let scalar = Expr::sum((0..4).flat_map(|b| {
        let ginv = &ginv;
        let ricci = &ricci;
        (0..4).map(move |d| &ginv[b][d] * &ricci[b][d])
    }));
    let gc = g.components();
    let lower = rank4(|a, b, c, d| sum_products((0..4).map(|e| (&gc[a][e], &riemann[e][b][c][d]))));
    let sixth = scalar.scale(&CRational::ratio(1, 6));
    let half = CRational::ratio(1, 2);
    let weyl = rank4(|a, b, c, d| {
        if a == b || c == d {
            return Expr::zero();
        }
        let ricci_part = Expr::sum([
            &gc[a][c] * &ricci[b][d],
            -(&gc[a][d] * &ricci[b][c]),
            &gc[b][d] * &ricci[a][c],
            -(&gc[b][c] * &ricci[a][d]),
        ]);
        let scalar_part = &sixth * &(&(&gc[a][c] * &gc[b][d]) - &(&gc[a][d] * &gc[b][c]));
        Expr::sum([lower[a][b][c][d].clone(), -ricci_part.scale(&half), scalar_part])
    });
    CurvatureBundle {
        metric: g.clone(),
        ginv,
        connection: Connection { gamma: jet.gamma },
        riemann,
        ricci,
        scalar,
        weyl,
    }
}

impl CurvatureBundle {
    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn inverse_metric(&self) -> &ExprMatrix {
        &self.ginv
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    /// `R^a_{bcd}`
    pub fn riemann(&self) -> &Rank4 {
        &self.riemann
    }

    pub fn ricci(&self) -> &ExprMatrix {
        &self.ricci
    }

    pub fn scalar(&self) -> &Expr {
        &self.scalar
    }

    /// `C_{abcd}` with all indices down.
    pub fn weyl(&self) -> &Rank4 {
        &self.weyl
    }

    pub fn at(&self, p: &Point) -> Result<CurvatureValues, EvalError> {
        let mut ev = Evaluator::new(p);
        let metric = self.metric.eval_with(&mut ev)?;
        let mut inverse = Matrix4::zeros();
        let mut ricci = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                inverse[(a, b)] = ev.eval(&self.ginv[a][b])?.re;
                ricci[(a, b)] = ev.eval(&self.ricci[a][b])?.re;
            }
        }
        Ok(CurvatureValues {
            metric,
            inverse,
            christoffel: self.connection.eval_with(&mut ev)?,
            riemann: eval4(&self.riemann, &mut ev)?,
            ricci,
            scalar: ev.eval(&self.scalar)?.re,
            weyl: eval4(&self.weyl, &mut ev)?,
        })
    }
}

impl CurvatureValues {
    /// Largest Ricci component in an orthonormal frame, `max |R(e_i, e_j)|`.
    pub fn ricci_frame_max(&self) -> f64 {
        match self.metric.cholesky() {
            Some(ch) => {
                let lt = ch.l().transpose();
                match lt.try_inverse() {
                    Some(e) => (e.transpose() * self.ricci * e).amax(),
                    None => f64::NAN,
                }
            }
            None => f64::NAN,
        }
    }

    /// `max |R^a_{[bcd]}|`
    pub fn bianchi_residual(&self) -> f64 {
        let r = &self.riemann;
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        worst = worst.max((r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c]).abs());
                    }
                }
            }
        }
        worst
    }

    /// `max |g^{ac} C_{abcd}|`
    pub fn weyl_trace_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for b in 0..4 {
            for d in 0..4 {
                let mut t = 0.0;
                for a in 0..4 {
                    for c in 0..4 {
                        t += self.inverse[(a, c)] * self.weyl[a][b][c][d];
                    }
                }
                worst = worst.max(t.abs());
            }
        }
        worst
    }

    pub fn riemann_max(&self) -> f64 {
        self.riemann
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn weyl_max(&self) -> f64 {
        self.weyl
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::parse_expression;

    fn conformal() -> MetricField {
        let f = parse_expression("exp(2*x1)", &[]).unwrap();
        MetricField::diagonal(std::array::from_fn(|_| f.clone()))
    }

    #[test]
    fn euclidean_is_flat() {
        let g = MetricField::euclidean();
        let c = levi_civita(&g);
        assert!(c.components().iter().flatten().flatten().all(Expr::is_zero));
        let cb = curvature_bundle(&g);
        assert!(cb.riemann().iter().flatten().flatten().flatten().all(Expr::is_zero));
        assert!(cb.scalar().is_zero());
    }

    #[test]
    fn conformal_christoffels() {
        let c = levi_civita(&conformal()).at(&Point::new([0.3, 0.0, 0.0, 0.0])).unwrap();
        assert!((c[0][0][0] - 1.0).abs() < 1e-14);
        assert!((c[0][1][1] + 1.0).abs() < 1e-14);
        assert!((c[1][0][1] - 1.0).abs() < 1e-14);
        assert!(c[2][0][1].abs() < 1e-14);
    }

    #[test]
    fn conformal_scalar_curvature() {
        let cb = curvature_bundle(&conformal());
        for x1 in [0.0, 0.4, -0.7] {
            let vals = cb.at(&Point::new([x1, 0.2, -0.1, 0.5])).unwrap();
            let expect = -6.0 * (-2.0 * x1).exp();
            assert!((vals.scalar - expect).abs() < 1e-12, "{} vs {expect}", vals.scalar);
            // conformally flat
            assert!(vals.weyl_max() < 1e-12);
            assert!(vals.bianchi_residual() < 1e-12);
        }
    }

    #[test]
    fn metricity_holds() {
        let g = MetricField::from_upper(std::array::from_fn(|a| {
            std::array::from_fn(|b| match (a, b) {
                (0, 0) => parse_expression("2 + x2^2", &[]).unwrap(),
                (0, 1) => parse_expression("x3/5", &[]).unwrap(),
                (1, 1) => parse_expression("exp(x1)", &[]).unwrap(),
                (2, 3) => parse_expression("x1*x4/7", &[]).unwrap(),
                (a, b) if a == b => parse_expression("1 + x1^2", &[]).unwrap(),
                _ => Expr::zero(),
            })
        }));
        let c = levi_civita(&g);
        let pts = [Point::new([0.1, 0.2, 0.3, 0.4]), Point::new([-0.5, 0.6, 0.2, -0.3])];
        assert!(c.metricity_residual(&g, &pts).unwrap() < 1e-12);
        let vals = curvature_bundle(&g).at(&pts[1]).unwrap();
        assert!(vals.bianchi_residual() < 1e-12);
        assert!(vals.weyl_trace_residual() < 1e-12);
    }
}

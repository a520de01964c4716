//! Hodge star on two-forms and pointwise orthonormal frames.

use nalgebra::Matrix4;

use super::forms::{index_tuples, KForm};
use super::metric::{MetricField, Orientation};
use super::GeometryError;
use crate::sym::{Expr, Point};

/// Sign of the permutation `(a b c d)` of `(0 1 2 3)`, zero on repeats.
pub(crate) fn levi_civita_symbol(idx: [usize; 4]) -> i64 {
    let mut v = idx;
    let mut sign = 1;
    for i in 0..4 {
        for j in 0..3 - i {
            if v[j] == v[j + 1] {
                return 0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// `(*w)_{ab} = ½ s √det g ε_{cdab} w^{cd}`, with `s` the metric's orientation sign.
pub fn hodge_star(g: &MetricField, w: &KForm) -> Result<KForm, GeometryError> {
    if w.degree() != 2 {
        return Err(GeometryError::Degree {
            expected: 2,
            found: w.degree(),
        });
    }
    let (det, ginv) = g.det_inverse();
    let wm = w.matrix();
    // raised components w^{cd} for c < d
    let raised: Vec<Expr> = index_tuples(2)
        .iter()
        .map(|t| {
            let (c, d) = (t[0], t[1]);
            let mut parts = Vec::new();
            for e in 0..4 {
                for f in 0..4 {
                    if e == f || wm[e][f].is_zero() || ginv[c][e].is_zero() || ginv[d][f].is_zero() {
                        continue;
                    }
                    parts.push(Expr::product([
                        ginv[c][e].clone(),
                        ginv[d][f].clone(),
                        wm[e][f].clone(),
                    ]));
                }
            }
            Expr::sum(parts)
        })
        .collect();
    let mut vol = det.sqrt();
    if g.orientation() == Orientation::Negative {
        vol = -vol;
    }
    let comps = index_tuples(2)
        .iter()
        .map(|ab| {
            let parts = index_tuples(2).iter().zip(&raised).filter_map(|(cd, r)| {
                match levi_civita_symbol([cd[0], cd[1], ab[0], ab[1]]) {
                    0 => None,
                    1 => Some(r.clone()),
                    _ => Some(-r),
                }
            });
            &Expr::sum(parts) * &vol
        })
        .collect();
    Ok(KForm::from_components(2, comps))
}

/// Orthonormal coframe `θ^i = L^T` from `g = L L^T`, oriented to match the
/// metric's orientation, with its dual frame.
#[derive(Clone, Debug)]
pub struct OrthonormalFrame {
    /// Row `i` holds the components `θ^i_a`.
    pub coframe: Matrix4<f64>,
    /// Column `i` holds the components `e_i^a`.
    pub frame: Matrix4<f64>,
}

pub fn orthonormal_frame(
    g: &Matrix4<f64>,
    orientation: Orientation,
    at: &Point,
) -> Result<OrthonormalFrame, GeometryError> {
    let chol = g.cholesky().ok_or(GeometryError::NotPositiveDefinite {
        point: at.coords,
        minors: std::array::from_fn(|k| g.view((0, 0), (k + 1, k + 1)).determinant()),
    })?;
    let mut coframe = chol.l().transpose();
    if orientation == Orientation::Negative {
        for a in 0..4 {
            coframe[(3, a)] = -coframe[(3, a)];
        }
    }
    let frame = coframe
        .try_inverse()
        .ok_or(GeometryError::SingularMetric { point: at.coords })?;
    Ok(OrthonormalFrame { coframe, frame })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::Evaluator;

    #[test]
    fn euclidean_star_on_basis() {
        let g = MetricField::euclidean();
        let e = |a: usize, b: usize| KForm::dx(a).wedge(&KForm::dx(b));
        assert_eq!(hodge_star(&g, &e(0, 1)).unwrap(), e(2, 3));
        assert_eq!(hodge_star(&g, &e(0, 2)).unwrap(), e(1, 3).scale(&Expr::int(-1)));
        let flipped = g.clone().with_orientation(Orientation::Negative);
        assert_eq!(hodge_star(&flipped, &e(0, 1)).unwrap(), e(2, 3).scale(&Expr::int(-1)));
    }

    #[test]
    fn star_is_an_involution_on_a_curved_metric() {
        let g = MetricField::diagonal([
            Expr::x(2).exp(),
            Expr::one(),
            &Expr::x(1).powi(2) + &Expr::int(2),
            Expr::int(3),
        ]);
        let p = Point::new([0.3, -0.2, 0.5, 0.1]);
        for t in index_tuples(2) {
            let w = KForm::dx(t[0]).wedge(&KForm::dx(t[1]));
            let ss = hodge_star(&g, &hodge_star(&g, &w).unwrap()).unwrap();
            let mut ev = Evaluator::new(&p);
            for (x, y) in ss.eval(&mut ev).unwrap().iter().zip(w.eval(&mut ev).unwrap()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn frame_is_orthonormal_and_oriented() {
        let g = Matrix4::new(
            2.0, 0.3, 0.0, 0.1, 0.3, 1.0, 0.2, 0.0, 0.0, 0.2, 3.0, 0.4, 0.1, 0.0, 0.4, 1.5,
        );
        let p = Point::new([0.0; 4]);
        for o in [Orientation::Positive, Orientation::Negative] {
            let f = orthonormal_frame(&g, o, &p).unwrap();
            let gram = f.frame.transpose() * g * f.frame;
            assert!((gram - Matrix4::identity()).amax() < 1e-12);
            assert_eq!(f.coframe.determinant().signum(), o.sign());
        }
    }
}

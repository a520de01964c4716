//! The Boyer-Finley-Plebański (SU(∞) Toda) operator.

use crate::sym::{Coordinate, Differentiator, Expr};

use super::ConstructionError;

/// `F_yy + F_zz + (e^F)_xx` for `F` written in chart slots `(x, y, z) = (x1, x2, x3)`.
pub fn bfp_residual(f: &Expr) -> Result<Expr, ConstructionError> {
    if f.depends_on(Coordinate::from_slot(3)) {
        let d = Differentiator::new().d(f, Coordinate::from_slot(3));
        if !d.is_zero() {
            return Err(ConstructionError::Dependence {
                what: "F",
                coordinate: "q",
            });
        }
    }
    let mut d = Differentiator::new();
    let [x, y, z] = [0, 1, 2].map(Coordinate::from_slot);
    let fy = d.d(f, y);
    let fyy = d.d(&fy, y);
    let fz = d.d(f, z);
    let fzz = d.d(&fz, z);
    let ex = d.d(&f.exp(), x);
    let exx = d.d(&ex, x);
    Ok(Expr::sum([fyy, fzz, exx]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{chart_vocabulary, ChartId};
    use crate::sym::{parse_with, Evaluator, Point};

    #[test]
    fn instances() {
        assert!(bfp_residual(&Expr::zero()).unwrap().is_zero());
        assert!(bfp_residual(&Expr::int(7)).unwrap().is_zero());
        let vocab = chart_vocabulary(ChartId::GibbonsHawking);
        let f = parse_with("x^2", &vocab).unwrap();
        let r = bfp_residual(&f).unwrap();
        let at = |x: f64| Evaluator::new(&Point::new([x, 0.3, -0.2, 0.0])).eval(&r).unwrap().re;
        assert_eq!(at(0.0), 2.0);
        let x: f64 = 0.7;
        assert!((at(x) - (x * x).exp() * (2.0 + 4.0 * x * x)).abs() < 1e-13);
        assert!(bfp_residual(&parse_with("x*q", &vocab).unwrap()).is_err());
    }
}

//! The Gibbons-Hawking chart `(x, y, z, q)` and the global chart `(t, y, z, q)`.
//!
//! Both are given as maps into `(x¹, x², x³, x⁴)`:
//! `z₂ = (y + iz)/2`, `v = x² + (y² + z²)/2` (or `e^{2t} + …`), `z₁ = v/2 + iq`.

use serde::Serialize;

use crate::geometry::MetricField;
use crate::sym::{CRational, Expr, Point, Vocabulary};

use super::ConstructionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartId {
    GibbonsHawking,
    Global,
}

impl ChartId {
    pub fn coordinate_names(self) -> [&'static str; 4] {
        match self {
            ChartId::GibbonsHawking => ["x", "y", "z", "q"],
            ChartId::Global => ["t", "y", "z", "q"],
        }
    }
}

/// Parsing vocabulary naming the chart coordinates.
pub fn chart_vocabulary(id: ChartId) -> Vocabulary {
    Vocabulary::chart(id.coordinate_names())
}

/// The chart map written in the chart coordinates (slots `x1..x4`).
pub fn chart_map_exprs(id: ChartId) -> [Expr; 4] {
    let [a, y, z, q] = [Expr::x(1), Expr::x(2), Expr::x(3), Expr::x(4)];
    let lead = match id {
        ChartId::GibbonsHawking => a.powi(2),
        ChartId::Global => a.scale(&CRational::int(2)).exp(),
    };
    let half = CRational::ratio(1, 2);
    let v = &lead + &(&y.powi(2) + &z.powi(2)).scale(&half);
    [v.scale(&half), q, y.scale(&half), z.scale(&half)]
}

/// Image of a chart point in `(x¹..x⁴)`.
pub fn chart_map(id: ChartId, p: &Point) -> Result<Point, ConstructionError> {
    let [a, y, z, q] = p.coords;
    let lead = match id {
        ChartId::GibbonsHawking => {
            if !(a > 0.0) {
                return Err(ConstructionError::ChartDomain(a));
            }
            a * a
        }
        ChartId::Global => (2.0 * a).exp(),
    };
    let v = lead + (y * y + z * z) / 2.0;
    let mut out = p.clone();
    out.coords = [v / 2.0, q, y / 2.0, z / 2.0];
    Ok(out)
}

/// `x(dx² + dy² + dz²) + (1/x)(½z dy − ½y dz + dq)²` in `(x, y, z, q)`.
pub fn gh_form_metric() -> MetricField {
    let [x, y, z, _] = [Expr::x(1), Expr::x(2), Expr::x(3), Expr::x(4)];
    let half = CRational::ratio(1, 2);
    let theta = [
        Expr::zero(),
        z.scale(&half),
        y.scale(&CRational::ratio(-1, 2)),
        Expr::one(),
    ];
    let inv = x.recip();
    MetricField::from_upper(std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let conn = Expr::product([theta[a].clone(), theta[b].clone(), inv.clone()]);
            if a == b && a < 3 {
                &x + &conn
            } else {
                conn
            }
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let p = chart_map(ChartId::GibbonsHawking, &Point::new([2f64.sqrt(), 0.0, 0.0, 0.0])).unwrap();
        assert!((p.coords[0] - 1.0).abs() < 1e-15 && p.coords[1..].iter().all(|c| *c == 0.0));
        let p = chart_map(ChartId::GibbonsHawking, &Point::new([1.0, 2.0, 0.0, 0.0])).unwrap();
        assert_eq!(p.coords, [1.5, 0.0, 1.0, 0.0]);
        let p = chart_map(ChartId::Global, &Point::new([0.0; 4])).unwrap();
        assert_eq!(p.coords, [0.5, 0.0, 0.0, 0.0]);
        assert!(chart_map(ChartId::GibbonsHawking, &Point::new([0.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn gh_metric_hand_values() {
        let g = gh_form_metric();
        let m = g.at(&Point::new([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(m, nalgebra::Matrix4::identity());
        let m = g.at(&Point::new([2.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(m, nalgebra::Matrix4::from_diagonal(&[2.0, 2.0, 2.0, 0.5].into()));
    }
}

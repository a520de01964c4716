//! Compatibility, (almost-)Kähler classification and ξ scans.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{CoframeField, KForm, MetricField, Side};
use crate::report::CheckReport;
use crate::sym::{CRational, Differentiator, EvalError, Evaluator, Expr, Point};

use super::nijenhuis::nijenhuis_tensor;
use super::structure::{fundamental_form, xi_structure_with, AlmostComplexStructure, NullFrame, XiParameter};
use super::HermitianError;

fn max_modulus(m: &Matrix4<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Max residuals of `J² + id` and `JᵀgJ − g` over `points`.
pub fn compatibility_residuals(
    g: &MetricField,
    j: &AlmostComplexStructure,
    points: &[Point],
) -> Result<(f64, f64), EvalError> {
    let id = Matrix4::<Complex64>::identity();
    let mut square: f64 = 0.0;
    let mut metric: f64 = 0.0;
    for p in points {
        let mut ev = Evaluator::new(p);
        let jm = j.eval_with(&mut ev)?;
        let gm = g.eval_with(&mut ev)?.map(|x| Complex64::new(x, 0.0));
        square = square.max(max_modulus(&(jm * jm + id)));
        metric = metric.max(max_modulus(&(jm.transpose() * gm * jm - gm)));
    }
    Ok((square, metric))
}

pub fn compatibility_check(
    g: &MetricField,
    j: &AlmostComplexStructure,
    points: &[Point],
    tol: f64,
    seed: u64,
) -> CheckReport {
    match compatibility_residuals(g, j, points) {
        Ok((sq, me)) => CheckReport::from_residual("compatibility", sq.max(me), points.len(), seed, tol)
            .with_detail(format!("J^2+id {sq:e}, J^T g J - g {me:e}")),
        Err(e) => CheckReport::error("compatibility", e.to_string(), seed, tol),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructureKind {
    Kahler,
    AlmostKahlerNonKahler,
    HermitianNonKahler,
    Generic,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Kahler => "Kahler",
            StructureKind::AlmostKahlerNonKahler => "AlmostKahlerNonKahler",
            StructureKind::HermitianNonKahler => "HermitianNonKahler",
            StructureKind::Generic => "Generic",
        })
    }
}

/// Sampled verdict together with the residuals it rests on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StructureClass {
    pub kind: StructureKind,
    pub max_nijenhuis: f64,
    pub max_d_omega: f64,
    pub samples: usize,
}

/// Largest component of a form over `points`.
pub fn max_component(w: &KForm, points: &[Point]) -> Result<f64, EvalError> {
    let mut worst: f64 = 0.0;
    for p in points {
        let mut ev = Evaluator::new(p);
        for v in w.eval(&mut ev)? {
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

pub fn classify_structure(
    g: &MetricField,
    j: &AlmostComplexStructure,
    points: &[Point],
    tol: f64,
) -> Result<StructureClass, HermitianError> {
    let omega = fundamental_form(g, j);
    let d_omega = omega.exterior_derivative(&mut Differentiator::new())?;
    let max_d_omega = max_component(&d_omega, points)?;
    let max_nijenhuis = nijenhuis_tensor(j).max_abs(points)?;
    let kind = match (max_d_omega <= tol, max_nijenhuis <= tol) {
        (true, true) => StructureKind::Kahler,
        (true, false) => StructureKind::AlmostKahlerNonKahler,
        (false, true) => StructureKind::HermitianNonKahler,
        (false, false) => StructureKind::Generic,
    };
    Ok(StructureClass {
        kind,
        max_nijenhuis,
        max_d_omega,
        samples: points.len(),
    })
}

#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub xi: XiParameter,
    /// `None` for `ξ = ∞`.
    pub value: Option<Complex64>,
    pub max_nijenhuis: f64,
}

#[derive(Clone, Debug)]
pub struct XiScan {
    pub side: Side,
    pub tol: f64,
    pub entries: Vec<ScanEntry>,
}

impl XiScan {
    /// Entries whose sampled Nijenhuis norm is within tolerance.
    pub fn candidates(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(move |e| e.max_nijenhuis <= self.tol)
    }
}

/// Sampled Nijenhuis norm of `J^side_ξ` for every ξ in `grid`.
pub fn integrability_scan(
    c: &CoframeField,
    side: Side,
    grid: &[XiParameter],
    points: &[Point],
    tol: f64,
) -> Result<XiScan, HermitianError> {
    let frame = NullFrame::new(c)?;
    let origin = Point::new([0.0; 4]);
    let entries = grid
        .par_iter()
        .map(|xi| {
            let j = xi_structure_with(&frame, xi, side);
            let max_nijenhuis = nijenhuis_tensor(&j).max_abs(points)?;
            Ok(ScanEntry {
                xi: xi.clone(),
                value: xi.value(&origin)?,
                max_nijenhuis,
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(XiScan { side, tol, entries })
}

fn exact(x: f64) -> Expr {
    Expr::constant(CRational::from_f64(x).expect("finite grid value"))
}

/// `ξ_k = e^{iφ_k}`, `φ_k = 2πk/n`, kept symbolic so `|ξ| = 1` exactly.
pub fn unit_circle_grid(n: usize) -> Vec<XiParameter> {
    (0..n)
        .map(|k| XiParameter::unit(&exact(2.0 * PI * k as f64 / n as f64)))
        .collect()
}

/// `n` near-uniform points on the Riemann sphere (Fibonacci lattice),
/// stereographically projected; the north pole maps to `∞`.
pub fn stereographic_grid(n: usize) -> Vec<XiParameter> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let theta = golden * k as f64;
            if 1.0 - z < 1e-12 {
                return XiParameter::Infinity;
            }
            let w = Complex64::new(r * theta.cos(), r * theta.sin()) / (1.0 - z);
            XiParameter::from_complex(w).expect("finite grid point")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::xi_structure;

    #[test]
    fn flat_kahler_and_compatible() {
        let c = CoframeField::flat();
        let g = MetricField::diagonal(std::array::from_fn(|_| Expr::int(2)));
        let j = xi_structure(&c, &XiParameter::zero(), Side::Plus).unwrap();
        let pts = [Point::new([0.1, 0.2, 0.3, 0.4])];
        let r = compatibility_check(&g, &j, &pts, 1e-12, 42);
        assert!(r.passed());
        assert_eq!(r.max_residual, 0.0);
        let cls = classify_structure(&g, &j, &pts, 1e-9).unwrap();
        assert_eq!(cls.kind, StructureKind::Kahler);
        let doubled = j.map(|e| e.scale(&CRational::int(2)));
        let r = compatibility_check(&g, &doubled, &pts, 1e-9, 42);
        assert!(!r.passed());
        assert!((compatibility_residuals(&g, &doubled, &pts).unwrap().0 - 3.0).abs() < 1e-15);
    }

    #[test]
    fn flat_scan_is_all_candidates() {
        let grid = stereographic_grid(16);
        let scan = integrability_scan(&CoframeField::flat(), Side::Plus, &grid, &[Point::new([0.3; 4])], 1e-7).unwrap();
        assert_eq!(scan.candidates().count(), 16);
    }

    #[test]
    fn unit_grid_has_exact_modulus() {
        for xi in unit_circle_grid(8) {
            let XiParameter::Finite(e) = xi else { panic!() };
            assert!((&e * &e.conj()).is_one());
        }
    }
}

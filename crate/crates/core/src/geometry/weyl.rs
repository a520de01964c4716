//! Self-dual/anti-self-dual Weyl operators and Petrov type.

use std::fmt;

use nalgebra::{Matrix3, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use super::curvature::{CurvatureBundle, CurvatureValues};
use super::hodge::orthonormal_frame;
use super::metric::Orientation;
use super::GeometryError;
use crate::sym::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

/// Weyl operator restricted to `Λ²±`, in the unit basis
/// `σ¹ = θ¹²±θ³⁴`, `σ² = θ¹³±θ⁴²`, `σ³ = θ¹⁴±θ²³` (each divided by `√2`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeylHalf {
    pub side: Side,
    pub matrix: Matrix3<Complex64>,
}

impl WeylHalf {
    pub fn new(side: Side, matrix: Matrix3<Complex64>) -> Self {
        WeylHalf { side, matrix }
    }

    pub fn from_real(side: Side, m: Matrix3<f64>) -> Self {
        WeylHalf::new(side, m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn max_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> [Complex64; 3] {
        let ev = self.matrix.schur().eigenvalues().unwrap_or_else(|| {
            // Schur always converges for 3×3 in practice; fall back to the diagonal
            self.matrix.diagonal()
        });
        let mut v = [ev[0], ev[1], ev[2]];
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

fn sigma(side: Side) -> [Matrix4<f64>; 3] {
    let s = side.sign();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let pair = |a: usize, b: usize, c: usize, d: usize| {
        let mut m = Matrix4::zeros();
        m[(a, b)] = r;
        m[(b, a)] = -r;
        m[(c, d)] += s * r;
        m[(d, c)] -= s * r;
        m
    };
    [pair(0, 1, 2, 3), pair(0, 2, 3, 1), pair(0, 3, 1, 2)]
}

/// Both Weyl halves from pointwise curvature values.
pub fn weyl_halves_from_values(
    vals: &CurvatureValues,
    orientation: Orientation,
    at: &Point,
) -> Result<(WeylHalf, WeylHalf), GeometryError> {
    let frame = orthonormal_frame(&vals.metric, orientation, at)?.frame;
    // C_ijkl in the orthonormal frame
    let c = &vals.weyl;
    let mut tmp = [[[[0.0f64; 4]; 4]; 4]; 4];
    let mut out = [[[[0.0f64; 4]; 4]; 4]; 4];
    // contract one index at a time
    for step in 0..4 {
        let src = if step == 0 { c } else { &out };
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let mut acc = 0.0;
                        for a in 0..4 {
                            let (v, e) = match step {
                                0 => (src[a][j][k][l], frame[(a, i)]),
                                1 => (src[i][a][k][l], frame[(a, j)]),
                                2 => (src[i][j][a][l], frame[(a, k)]),
                                _ => (src[i][j][k][a], frame[(a, l)]),
                            };
                            acc += v * e;
                        }
                        tmp[i][j][k][l] = acc;
                    }
                }
            }
        }
        out = tmp;
    }
    let half = |side: Side| {
        let s = sigma(side);
        let m = Matrix3::from_fn(|a, b| {
            let mut acc = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    if s[a][(i, j)] == 0.0 {
                        continue;
                    }
                    for k in 0..4 {
                        for l in 0..4 {
                            acc += s[a][(i, j)] * out[i][j][k][l] * s[b][(k, l)];
                        }
                    }
                }
            }
            acc / 4.0
        });
        WeylHalf::from_real(side, m)
    };
    Ok((half(Side::Plus), half(Side::Minus)))
}

/// `(W⁺, W⁻)` at `p`.
pub fn weyl_halves(cb: &CurvatureBundle, p: &Point) -> Result<(WeylHalf, WeylHalf), GeometryError> {
    let vals = cb.at(p)?;
    weyl_halves_from_values(&vals, cb.metric().orientation(), p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PetrovType {
    I,
    II,
    D,
    III,
    N,
    O,
}

impl fmt::Display for PetrovType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PetrovType::I => "I",
            PetrovType::II => "II",
            PetrovType::D => "D",
            PetrovType::III => "III",
            PetrovType::N => "N",
            PetrovType::O => "O",
        };
        f.write_str(s)
    }
}

/// Relative thresholds for [`petrov_classify`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PetrovTolerances {
    /// `O` iff `‖w‖ ≤ zero·(1 + ‖w‖)`.
    pub zero: f64,
    /// Eigenvalues coincide iff `|λi − λj| ≤ degenerate·max(1, max|λ|)`.
    pub degenerate: f64,
    /// Singular values below `rank·max(1, max|λ|)` count as zero.
    pub rank: f64,
}

impl Default for PetrovTolerances {
    fn default() -> Self {
        PetrovTolerances {
            zero: 1e-6,
            degenerate: 1e-6,
            rank: 1e-6,
        }
    }
}

fn rank(m: &Matrix3<Complex64>, threshold: f64) -> usize {
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s > threshold)
        .count()
}

/// Petrov type from the eigenstructure of a trace-free Weyl half.
pub fn petrov_classify(w: &WeylHalf, tol_zero: f64, tol_degenerate: f64) -> Result<PetrovType, GeometryError> {
    petrov_classify_with(
        w,
        PetrovTolerances {
            zero: tol_zero,
            degenerate: tol_degenerate,
            ..PetrovTolerances::default()
        },
    )
}

pub fn petrov_classify_with(w: &WeylHalf, tol: PetrovTolerances) -> Result<PetrovType, GeometryError> {
    let norm = w.norm();
    if !norm.is_finite() {
        return Err(GeometryError::Classification("non-finite Weyl operator".into()));
    }
    if norm <= tol.zero * (1.0 + norm) {
        return Ok(PetrovType::O);
    }
    let lam = w.eigenvalues();
    let scale = lam.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    if w.trace().norm() > tol.degenerate * scale.max(norm) * 10.0 {
        return Err(GeometryError::Classification(format!(
            "Weyl operator is not trace-free (trace {})",
            w.trace()
        )));
    }
    let eq = |a: usize, b: usize| (lam[a] - lam[b]).norm() <= tol.degenerate * scale;
    let pairs = [eq(0, 1), eq(0, 2), eq(1, 2)];
    let n_equal = pairs.iter().filter(|p| **p).count();
    let id = Matrix3::<Complex64>::identity();
    let threshold = tol.rank * scale;
    match n_equal {
        0 => Ok(PetrovType::I),
        1 => {
            let (a, b) = if pairs[0] {
                (0, 1)
            } else if pairs[1] {
                (0, 2)
            } else {
                (1, 2)
            };
            let l = (lam[a] + lam[b]) / 2.0;
            match rank(&(w.matrix - id * l), threshold) {
                1 => Ok(PetrovType::D),
                2 => Ok(PetrovType::II),
                r => Err(GeometryError::Classification(format!(
                    "rank {r} at a double eigenvalue {l}"
                ))),
            }
        }
        3 => match rank(&w.matrix, threshold) {
            1 => Ok(PetrovType::N),
            2 => Ok(PetrovType::III),
            0 => Ok(PetrovType::O),
            r => Err(GeometryError::Classification(format!(
                "triple eigenvalue with rank {r}"
            ))),
        },
        _ => Err(GeometryError::Classification(format!(
            "inconsistent eigenvalue coincidences {lam:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(m: Matrix3<f64>) -> PetrovType {
        petrov_classify_with(&WeylHalf::from_real(Side::Minus, m), PetrovTolerances::default()).unwrap()
    }

    #[test]
    fn basic_types() {
        assert_eq!(classify(Matrix3::zeros()), PetrovType::O);
        assert_eq!(
            classify(Matrix3::from_diagonal(&[1.0, 2.0, -3.0].into())),
            PetrovType::I
        );
        assert_eq!(
            classify(Matrix3::from_diagonal(&[1.0, 1.0, -2.0].into())),
            PetrovType::D
        );
        // nilpotent blocks
        let n = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(classify(n), PetrovType::N);
        let iii = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(classify(iii), PetrovType::III);
        let ii = Matrix3::new(1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -2.0);
        assert_eq!(classify(ii), PetrovType::II);
    }

    #[test]
    fn not_trace_free_is_rejected() {
        let w = WeylHalf::from_real(Side::Plus, Matrix3::identity());
        assert!(petrov_classify(&w, 1e-6, 1e-6).is_err());
    }

    #[test]
    fn sigma_basis_is_orthonormal_and_dual() {
        for side in [Side::Plus, Side::Minus] {
            let s = sigma(side);
            for a in 0..3 {
                for b in 0..3 {
                    let ip: f64 = s[a].component_mul(&s[b]).sum() / 2.0;
                    assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15);
                }
            }
        }
    }
}

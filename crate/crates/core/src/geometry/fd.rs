//! Finite-difference curvature, an independent check on the symbolic pipeline.

use nalgebra::Matrix4;

use super::curvature::{Num3, Num4};
use super::metric::MetricField;
use crate::sym::{EvalError, Point};

fn shifted(p: &Point, c: usize, h: f64) -> Point {
    let mut q = p.clone();
    q.coords[c] += h;
    q
}

/// Five-point central weights `(offset in steps, weight)`; divide by `12h`.
const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// `Γ^a_{bc}` from fourth-order central differences of `g` with step `h`.
pub fn christoffel(g: &MetricField, p: &Point, h: f64) -> Result<Num3, EvalError> {
    let ginv = g
        .at(p)?
        .try_inverse()
        .unwrap_or_else(|| Matrix4::from_element(f64::NAN));
    let mut dg = [Matrix4::<f64>::zeros(); 4];
    for (c, d) in dg.iter_mut().enumerate() {
        for (k, w) in STENCIL {
            *d += g.at(&shifted(p, c, k * h))? * (w / (12.0 * h));
        }
    }
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for d in 0..4 {
                    acc += ginv[(a, d)] * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)]);
                }
                out[a][b][c] = acc / 2.0;
            }
        }
    }
    Ok(out)
}

/// `R^a_{bcd}` from fourth-order central differences of [`christoffel`];
/// `inner` is the metric step and `outer` the connection step.
pub fn riemann(g: &MetricField, p: &Point, inner: f64, outer: f64) -> Result<Num4, EvalError> {
    let gam = christoffel(g, p, inner)?;
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for (c, slot) in dgam.iter_mut().enumerate() {
        for (k, w) in STENCIL {
            let shifted_gam = christoffel(g, &shifted(p, c, k * outer), inner)?;
            for a in 0..4 {
                for b in 0..4 {
                    for d in 0..4 {
                        slot[a][b][d] += shifted_gam[a][b][d] * (w / (12.0 * outer));
                    }
                }
            }
        }
    }
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut r = dgam[c][a][d][b] - dgam[d][a][c][b];
                    for e in 0..4 {
                        r += gam[a][c][e] * gam[e][d][b] - gam[a][d][e] * gam[e][c][b];
                    }
                    out[a][b][c][d] = r;
                }
            }
        }
    }
    Ok(out)
}

//! Randomized identity testing.

use crate::domain::{DomainSpec, SampleError};

use super::eval::{EvalError, Evaluator, Point};
use super::expr::Expr;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Outcome of a sampled zero test.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroVerdict {
    pub is_zero: bool,
    pub max_residual: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ZeroTestError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{rejected} samples hit domain guards; giving up after {accepted} usable points")]
    GuardRetryCap { rejected: usize, accepted: usize },
}

/// True iff `|e(p)| ≤ tol` at `n` seeded points of `domain`.
///
/// A literal zero short-circuits with residual 0. Points at which a domain
/// guard fires are skipped and redrawn, up to `10·n` such rejections.
pub fn probable_zero(
    e: &Expr,
    domain: &DomainSpec,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<ZeroVerdict, ZeroTestError> {
    if n == 0 {
        return Err(SampleError::NoSamples.into());
    }
    if e.is_zero() {
        return Ok(ZeroVerdict {
            is_zero: true,
            max_residual: 0.0,
            samples: n,
        });
    }
    let mut sampler = domain.sampler(seed);
    let draw_cap = 1000 * n;
    let guard_cap = 10 * n;
    let mut draws = 0;
    let mut rejected = 0;
    let mut accepted = 0;
    let mut max_residual: f64 = 0.0;
    while accepted < n {
        if draws >= draw_cap {
            return Err(SampleError::RetryCapExceeded {
                cap: draw_cap,
                accepted,
                wanted: n,
            }
            .into());
        }
        draws += 1;
        let Some(p) = sampler.draw() else { continue };
        match Evaluator::new(&p).eval(e) {
            Ok(v) => {
                accepted += 1;
                max_residual = max_residual.max(v.norm());
            }
            Err(EvalError::DomainViolation { .. }) => {
                rejected += 1;
                if rejected > guard_cap {
                    return Err(ZeroTestError::GuardRetryCap { rejected, accepted });
                }
            }
            Err(other) => return Err(other.into()),
        }
    }
    Ok(ZeroVerdict {
        is_zero: max_residual <= tol,
        max_residual,
        samples: accepted,
    })
}

/// Zero test over caller-supplied points (for parameter-carrying points).
pub fn probable_zero_at(e: &Expr, points: &[Point], tol: f64) -> Result<ZeroVerdict, EvalError> {
    let mut max_residual: f64 = 0.0;
    if !e.is_zero() {
        for p in points {
            max_residual = max_residual.max(Evaluator::new(p).eval(e)?.norm());
        }
    }
    Ok(ZeroVerdict {
        is_zero: max_residual <= tol,
        max_residual,
        samples: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::{parse_expression, wirtinger};

    #[test]
    fn antiholomorphic_derivative_vanishes() {
        let z1b = parse_expression("z1b", &[]).unwrap();
        let d = wirtinger(&z1b, 1, false);
        let v = probable_zero(&d, &DomainSpec::cube(-2.0, 2.0), 20, 42, 1e-8).unwrap();
        assert!(v.is_zero);
        assert_eq!(v.max_residual, 0.0);
    }

    #[test]
    fn tiny_but_nonzero_is_detected() {
        let e = parse_expression("x1 * 1e-9", &[]).unwrap();
        let v = probable_zero(&e, &DomainSpec::cube(-2.0, 2.0), 50, 42, 1e-10).unwrap();
        assert!(!v.is_zero);
        assert!(v.max_residual > 1e-10 && v.max_residual <= 2e-9);
    }

    #[test]
    fn guarded_samples_are_redrawn() {
        // log(x1) is undefined on half the cube
        let e = parse_expression("log(x1) - log(x1)", &[]).unwrap();
        assert!(e.is_zero());
        let e = parse_expression("sqrt(x1)*sqrt(x1 + 1) - sqrt(x1*(x1 + 1))", &[]).unwrap();
        assert!(!e.is_zero());
        let v = probable_zero(&e, &DomainSpec::cube(-1.0, 1.0), 10, 42, 1e-12).unwrap();
        assert!(v.is_zero);
        assert_eq!(v.samples, 10);
    }
}

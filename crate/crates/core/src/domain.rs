//! Sampling regions and deterministic point generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::sym::Point;

/// Region of ℝ⁴ (in `x1..x4`) used for seeded verification.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    /// `u = v − 2|z₂|² ∈ [u_min, u_max]`, `|z₂| ≤ z2_max`, `Im z₁ ∈ [−im_z1_max, im_z1_max]`.
    UPrime {
        u_min: f64,
        u_max: f64,
        z2_max: f64,
        im_z1_max: f64,
    },
    /// Coordinate intervals; degenerate intervals pin a coordinate.
    Box([(f64, f64); 4]),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SampleError {
    #[error(
        "retry cap of {cap} draws exceeded after accepting {accepted} of {wanted} points; domain too thin or empty"
    )]
    RetryCapExceeded { cap: usize, accepted: usize, wanted: usize },
    #[error("sample count must be at least 1")]
    NoSamples,
}

impl DomainSpec {
    /// The default margin keeps `u` away from the singular boundary `u = 0`.
    pub fn u_prime() -> Self {
        DomainSpec::UPrime {
            u_min: 0.5,
            u_max: 4.0,
            z2_max: 1.0,
            im_z1_max: 2.0,
        }
    }

    pub fn u_prime_margin(u_min: f64, u_max: f64) -> Self {
        DomainSpec::UPrime {
            u_min,
            u_max,
            z2_max: 1.0,
            im_z1_max: 2.0,
        }
    }

    pub fn cube(lo: f64, hi: f64) -> Self {
        DomainSpec::Box([(lo, hi); 4])
    }

    /// `u = v − 2 z₂ z̄₂ = 2x¹ − 2(x³² + x⁴²)`.
    pub fn u_value(x: &[f64; 4]) -> f64 {
        2.0 * x[0] - 2.0 * (x[2] * x[2] + x[3] * x[3])
    }

    pub fn contains(&self, x: &[f64; 4]) -> bool {
        match self {
            DomainSpec::UPrime {
                u_min,
                u_max,
                z2_max,
                im_z1_max,
            } => {
                let u = Self::u_value(x);
                let r2 = x[2] * x[2] + x[3] * x[3];
                u >= *u_min && u <= *u_max && r2 <= z2_max * z2_max && x[1].abs() <= *im_z1_max
            }
            DomainSpec::Box(b) => b.iter().zip(x).all(|((lo, hi), v)| *v >= *lo && *v <= *hi),
        }
    }

    fn bounding_box(&self) -> [(f64, f64); 4] {
        match self {
            DomainSpec::UPrime {
                u_min,
                u_max,
                z2_max,
                im_z1_max,
            } => {
                let r2max = z2_max * z2_max;
                [
                    (u_min / 2.0, (u_max + 2.0 * r2max) / 2.0),
                    (-im_z1_max, *im_z1_max),
                    (-z2_max, *z2_max),
                    (-z2_max, *z2_max),
                ]
            }
            DomainSpec::Box(b) => *b,
        }
    }

    /// Endless stream of candidate points drawn uniformly from the bounding
    /// box and filtered through the domain predicate.
    pub fn sampler(&self, seed: u64) -> Sampler<'_> {
        Sampler {
            domain: self,
            bounds: self.bounding_box(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

pub struct Sampler<'d> {
    domain: &'d DomainSpec,
    bounds: [(f64, f64); 4],
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    /// One draw; `None` when the candidate is rejected.
    pub fn draw(&mut self) -> Option<Point> {
        let mut x = [0.0; 4];
        for (slot, (lo, hi)) in x.iter_mut().zip(self.bounds) {
            *slot = if hi > lo { self.rng.random_range(lo..=hi) } else { lo };
        }
        self.domain.contains(&x).then(|| Point::new(x))
    }

    /// `n` accepted points using at most `cap` draws.
    pub fn take(&mut self, n: usize, cap: usize) -> Result<Vec<Point>, SampleError> {
        let mut out = Vec::with_capacity(n);
        let mut draws = 0;
        while out.len() < n {
            if draws >= cap {
                return Err(SampleError::RetryCapExceeded {
                    cap,
                    accepted: out.len(),
                    wanted: n,
                });
            }
            draws += 1;
            if let Some(p) = self.draw() {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// Deterministic rejection sampling with a retry cap of `1000·n` draws.
pub fn sample_domain(d: &DomainSpec, n: usize, seed: u64) -> Result<Vec<Point>, SampleError> {
    if n == 0 {
        return Err(SampleError::NoSamples);
    }
    d.sampler(seed).take(n, 1000 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_prime_points_satisfy_margin() {
        let pts = sample_domain(&DomainSpec::u_prime(), 10, 42).unwrap();
        assert_eq!(pts.len(), 10);
        for p in &pts {
            let u = DomainSpec::u_value(&p.coords);
            assert!((0.5..=4.0).contains(&u), "u = {u}");
        }
    }

    #[test]
    fn degenerate_box_repeats_point() {
        let d = DomainSpec::Box([(1.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let pts = sample_domain(&d, 3, 7).unwrap();
        assert!(pts.iter().all(|p| p.coords == [1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn empty_margin_hits_retry_cap() {
        let err = sample_domain(&DomainSpec::u_prime_margin(5.0, 4.0), 4, 42).unwrap_err();
        assert!(matches!(err, SampleError::RetryCapExceeded { cap: 4000, .. }));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_domain(&DomainSpec::u_prime(), 5, 9).unwrap();
        let b = sample_domain(&DomainSpec::u_prime(), 5, 9).unwrap();
        assert_eq!(a, b);
        let c = sample_domain(&DomainSpec::u_prime(), 5, 10).unwrap();
        assert_ne!(a, c);
    }
}

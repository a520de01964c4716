//! Named verification results.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One check: `status` is `pass` iff `max_residual ≤ tol`, unless the check
/// could not run at all (`error`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub max_residual: f64,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn from_residual(name: impl Into<String>, max_residual: f64, samples: usize, seed: u64, tol: f64) -> Self {
        let status = if max_residual <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckReport {
            name: name.into(),
            status,
            max_residual,
            samples,
            seed,
            tol,
            ms: 0,
            detail: None,
        }
    }

    /// A check that a quantity stays above `threshold` (e.g. a tensor that must
    /// not vanish). The residual is the shortfall `max(0, threshold − min)`
    /// against tolerance 0, so the pass rule is the same as for other checks.
    pub fn from_lower_bound(
        name: impl Into<String>,
        min_value: f64,
        threshold: f64,
        samples: usize,
        seed: u64,
    ) -> Self {
        let shortfall = if min_value > threshold {
            0.0
        } else if min_value.is_nan() {
            f64::INFINITY
        } else {
            (threshold - min_value).max(f64::MIN_POSITIVE)
        };
        CheckReport::from_residual(name, shortfall, samples, seed, 0.0)
            .with_detail(format!("min {min_value:e}, required > {threshold:e}"))
    }

    pub fn error(name: impl Into<String>, message: impl Into<String>, seed: u64, tol: f64) -> Self {
        CheckReport {
            name: name.into(),
            status: Status::Error,
            max_residual: f64::NAN,
            samples: 0,
            seed,
            tol,
            ms: 0,
            detail: Some(message.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_elapsed(mut self, since: Instant) -> Self {
        self.ms = since.elapsed().as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

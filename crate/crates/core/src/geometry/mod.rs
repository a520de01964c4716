//! Differential forms, metrics, curvature, Hodge duality and the Weyl split.

mod curvature;
pub mod fd;
mod forms;
mod hodge;
mod matrix;
mod metric;
mod weyl;

use thiserror::Error;

use crate::sym::EvalError;

pub use curvature::{
    curvature_bundle, levi_civita, Connection, CurvatureBundle, CurvatureValues, Num3, Num4, Rank3, Rank4,
};
pub use forms::{exterior_derivative, index_tuples, KForm};
pub use hodge::{hodge_star, orthonormal_frame, OrthonormalFrame};
pub use matrix::{det_adjugate, det_inverse, ExprMatrix};
pub use metric::{metric_from_coframe, pullback_metric, scaled, CoframeField, MetricField, Orientation};
pub use weyl::{
    petrov_classify, petrov_classify_with, weyl_halves, weyl_halves_from_values, PetrovTolerances, PetrovType, Side,
    WeylHalf,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("coframe is degenerate at {point:?}: M∧M̄∧N∧N̄ vanishes")]
    DegenerateCoframe { point: [f64; 4] },
    #[error("metric is singular at {point:?}")]
    SingularMetric { point: [f64; 4] },
    #[error("metric is not positive definite at {point:?} (leading minors {minors:?})")]
    NotPositiveDefinite { point: [f64; 4], minors: [f64; 4] },
    #[error("expected a {expected}-form, got degree {found}")]
    Degree { expected: usize, found: usize },
    #[error("exterior derivative of a 4-form is not defined in dimension 4")]
    TopDegree,
    #[error("Petrov classification failed: {0}")]
    Classification(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

//! Builders for the (f, h) coframe family, the Przanowski ansatz, the
//! Białecki solution and its charts, the Boyer-Finley-Plebański operator and
//! the opposite-orientation Kähler structure.

mod bfp;
mod charts;
mod fh;
mod przanowski;
mod section6;
mod theorem1;

use thiserror::Error;

use crate::domain::SampleError;
use crate::geometry::GeometryError;
use crate::hermitian::HermitianError;
use crate::sym::{EvalError, ZeroTestError};

pub use bfp::bfp_residual;
pub use charts::{chart_map, chart_map_exprs, chart_vocabulary, gh_form_metric, ChartId};
pub use fh::{coframe_from_fh, dz1, dz1b, dz2, dz2b, lemma2_form, lemma2_structure, wirtinger_vector};
pub use przanowski::{bialecki_potential, przanowski_metric, przanowski_residual, Admissibility, PrzanowskiData};
pub use section6::section6_structure;
pub use theorem1::{theorem1_coframe, theorem1_f, theorem1_h, theorem1_metric, theorem1_package, Theorem1Package};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConstructionError {
    #[error("f must be real: {0}")]
    NotReal(String),
    #[error("f vanishes at {point:?}")]
    Vanishing { point: [f64; 4] },
    #[error("admissibility fails at {point:?}: {condition} (value {value:e})")]
    Admissibility {
        condition: &'static str,
        value: f64,
        point: [f64; 4],
    },
    #[error("{what} must not depend on {coordinate}")]
    Dependence {
        what: &'static str,
        coordinate: &'static str,
    },
    #[error("chart coordinate x must be positive, got {0}")]
    ChartDomain(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    ZeroTest(#[from] ZeroTestError),
}

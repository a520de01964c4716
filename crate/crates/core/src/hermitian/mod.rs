//! Almost-hermitian structures, fundamental forms and integrability.

mod classify;
mod nijenhuis;
mod structure;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::sym::EvalError;

pub use classify::{
    classify_structure, compatibility_check, compatibility_residuals, integrability_scan, max_component,
    stereographic_grid, unit_circle_grid, ScanEntry, StructureClass, StructureKind, XiScan,
};
pub use nijenhuis::{nijenhuis_tensor, NijenhuisField};
pub use structure::{
    fundamental_form, fundamental_form_checked, xi_fundamental_form, xi_structure, xi_structure_with,
    AlmostComplexStructure, NullFrame, Provenance, XiParameter,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HermitianError {
    #[error("coframe is degenerate")]
    DegenerateCoframe,
    #[error("ξ must not depend on the coordinates: {0}")]
    XiNotConstant(String),
    #[error("cannot read `{0}` as ξ (expected `inf` or `a+bi`)")]
    XiSyntax(String),
    #[error("g and J are incompatible: g·J antisymmetry residual {residual:e}")]
    Incompatible { residual: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

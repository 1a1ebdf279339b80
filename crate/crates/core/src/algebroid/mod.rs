//! (dg) Lie algebroids on a polynomial patch: models, axioms and the Chevalley–Eilenberg complex.

pub mod axioms;
pub mod ce;
pub mod model;

use thiserror::Error;

use crate::exact_algebra::ExactError;

pub use axioms::{check_axioms, jacobiator};
pub use ce::{anchor_pullback, ce_cohomology, ce_complex, ce_differential, CeAlgebra, SliceMode, SliceResult};
pub use model::{apply_vector_field, vector_field_bracket, BundleModel, ConnectionModel, LieAlgebroidModel, Patch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebroidError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("unknown name '{0}'")]
    UnknownName(String),
    #[error("weight mode requires weight-homogeneous data: {0}")]
    NotHomogeneous(String),
    #[error("algebroid axioms fail: {0}")]
    AxiomFailure(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

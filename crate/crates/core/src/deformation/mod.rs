//! Deformation complex of a (dg) Lie algebroid: multiderivations, the Gerstenhaber
//! bracket, Maurer–Cartan encoding and the correspondence with derivations of `C(L)`.

pub mod bracket;
pub mod complex;
pub mod derivations;
pub mod multider;
pub mod random;

use thiserror::Error;

use crate::algebroid::AlgebroidError;
use crate::exact_algebra::ExactError;

pub use bracket::{circle, gerstenhaber, DerSum};
pub use complex::{algebroid_of_mc, def_cohomology, def_differential, mc_of_algebroid, DefSlice};
pub use derivations::{as_derivation, as_derivation_sum, derivation_to_multider, derivation_to_multider_checked};
pub use multider::{Multiderivation, Pure, Section, VectorField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("multiderivations live on different bundles")]
    BundleMismatch,
    #[error("not a multiderivation: {0}")]
    NotMultiderivation(String),
    #[error("not a derivation: {0}")]
    NotDerivation(String),
    #[error("Maurer-Cartan element has components of arity {0:?}")]
    BadMcArity(Vec<i32>),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

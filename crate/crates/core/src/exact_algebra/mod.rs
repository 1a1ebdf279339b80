//! Exact arithmetic layer: rationals, polynomials, forms, graded algebras, matrices and complexes.

pub mod complex;
pub mod expr;
pub mod form;
pub mod graded;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod rational;

use thiserror::Error;

pub use complex::{Cohomology, ComplexSlice};
pub use form::PolyForm;
pub use graded::{AlgMap, Derivation, Elem, GcAlgebra, Generator, Mono, Truncation};
pub use linalg::Matrix;
pub use module::GradedFreeModule;
pub use poly::MultiPoly;
pub use rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("patch mismatch: dimension {0} vs {1}")]
    PatchMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("d^2 != 0 starting in degree {degree} (witness basis vector {basis_label})")]
    ComplexViolation {
        degree: i32,
        witness: Vec<Rational>,
        basis_label: String,
    },
    #[error("slice not closed under the differential: {0}")]
    SliceNotClosed(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("duplicate generator name '{0}'")]
    DuplicateName(String),
}

//! Representations up to homotopy of a Lie algebroid, presented as dg modules over
//! `C(L)` that are free on a graded frame.
//!
//! A representation stores `D(eps_i) = sum_j w_ij eps_j` with `w_ij` in `C(L)`; the
//! component `D_k` is the part of `w` of form degree `k` in the generators `xi`.

pub mod adjoint;
pub mod map;
pub mod rep;
pub mod weq;

use thiserror::Error;

use crate::algebroid::AlgebroidError;
use crate::exact_algebra::ExactError;

pub use adjoint::{adjoint, adjoint_change_of_connection, coadjoint, AdjointFrame};
pub use map::RepMap;
pub use rep::{rep_cohomology, RepCohomology, RepUH};
pub use weq::{cone_evidence, is_weak_equivalence, sample_points, SampleEvidence, SamplePolicy, WeakEquivalence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuthError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("representations live over different algebroids")]
    AlgebroidMismatch,
    #[error("invalid representation: {0}")]
    Invalid(String),
    #[error("not a cochain map: {0}")]
    NotCochainMap(String),
    #[error("unsupported slice: {0}")]
    Slice(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

//! Truncated jets, the Grothendieck connection and the Fedosov-type model `enh(L)`.
//!
//! Jets live in `Q[x, y]` where `y_i` are the formal jet variables. The jet filtration `F^k`
//! is spanned by terms of `y`-degree at least `k`. Every "mod `F^{K+1}`" statement in this module
//! is exact: stored data carries one extra order so that one application of `D`, which lowers
//! the `y`-degree by at most one, never reaches a dropped term.

pub mod enh;
pub mod gr;
pub mod jets;
pub mod mc;
pub mod module;
pub mod tangent;

use thiserror::Error;

use crate::algebroid::AlgebroidError;
use crate::exact_algebra::ExactError;
use crate::ruth::RuthError;

pub use enh::{build_enh, extract_brackets, j_infty_compare, EnhSpace};
pub use gr::{gr_weak_equivalence, GrWeakEquivalence};
pub use jets::{
    contracting_homotopy_check, grothendieck, is_horizontal, jet_algebra, jet_mult, jet_prolong, jet_tensor, JetSection,
};
pub use mc::{mc_check, McResult, NilpotentBase};
pub use module::{enh_mod, EnhModule};
pub use tangent::tangent_compare;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnhError {
    #[error("jet sections do not match: {0}")]
    Mismatch(String),
    #[error("algebroid fails its axioms: {0}")]
    Axioms(String),
    #[error("truncation order must be at least {min}, got {got}")]
    Order { min: u32, got: u32 },
    #[error("connection does not live on the expected bundle")]
    Connection,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("Maurer-Cartan input is not in I·V: {0}")]
    NotInIdeal(String),
    #[error("map is not filtration preserving: {0}")]
    NotFiltered(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Ruth(#[from] RuthError),
}

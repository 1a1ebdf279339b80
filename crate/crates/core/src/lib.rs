//! Exact symbolic toolkit for Lie algebroids over polynomial coordinate patches.

pub mod exact_algebra;
pub mod algebroid;
pub mod verdict;
pub mod fixtures;
pub mod deformation;
pub mod ruth;
pub mod weil;
pub mod jets_enh;
pub mod symplectic;

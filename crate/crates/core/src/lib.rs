//! Exact arithmetic for rank-`r` Ulrich bundles on polarized surfaces with
//! `p_g = q = 0`, working purely from Picard lattice data.
//!
//! Everything here is numerical: a class or a set of Chern data passing a
//! check only satisfies the necessary conditions an Ulrich bundle imposes.
//! Cohomological facts that cannot be computed from the lattice (very
//! ampleness, non-speciality, a few vanishings) enter as [`TriState`] flags
//! on the surface, and every verdict that depends on them says so.
//!
//! ```
//! use ulrich_core::catalog::builtin;
//! use ulrich_core::enumerate::enumerate_rank2_exact;
//!
//! let quadric = builtin("p1xp1-2-3").unwrap();
//! let lines: Vec<String> = enumerate_rank2_exact(&quadric)
//!     .unwrap()
//!     .iter()
//!     .map(|d| d.to_string())
//!     .collect();
//! assert_eq!(lines, ["(1, 5)", "(3, 2)"]);
//! ```

pub mod catalog;
pub mod classify;
pub mod document;
pub mod enumerate;
pub mod invariants;
pub mod lattice;
mod serde_num;
pub mod ulrich;

pub use invariants::{ChernData, HypothesisFlags, PolarizedSurface, SurfaceKind, TriState};
pub use lattice::{DivisorClass, IntersectionLattice};

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Invariants(#[from] invariants::InvariantsError),
    #[error(transparent)]
    Ulrich(#[from] ulrich::UlrichError),
    #[error(transparent)]
    Enumerate(#[from] enumerate::EnumerateError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
    #[error(transparent)]
    Document(#[from] document::DocumentError),
}

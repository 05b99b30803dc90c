//! Exact computation with twisting cochains, the homological perturbation
//! lemma, twisted tensor products, simplicial principal bundles, and the
//! orbit sets that classify them.
//!
//! The crate works with finite or truncated instances throughout: chain
//! complexes carry explicit bases per degree, simplicial sets are given by
//! nondegenerate generators with face tables, and every classification or
//! verification is an exact computation over Z or Z/m.

pub mod catnerve;
pub mod chaincore;
pub mod coeffs;
pub mod error;
pub mod serial;
pub mod simplicial;
pub mod twisting;

pub use error::{Error, Result};

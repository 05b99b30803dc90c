//! Simplicial sets, simplicial groups, twisting functions, twisted
//! cartesian products, normalized chains with the Alexander-Whitney
//! coalgebra structure, the Eilenberg-Zilber contraction, the twisting
//! cochain of a twisting function via the perturbation lemma, the W and
//! W-bar constructions, and bundle classification over a fixed base.

pub mod chains;
pub mod ez;
pub mod product;
pub mod sgroup;
pub mod simplex;
pub mod smap;
pub mod sset;
pub mod tcp;
pub mod twisting_function;

pub use chains::{normalized_chains_algebra, normalized_chains_coalgebra, NormalizedChains};
pub use ez::ez_contraction;
pub use product::product_sset;
pub use sgroup::SimplicialGroup;
pub use simplex::Simp;
pub use smap::SimplicialMap;
pub use sset::{validate_simplicial_set, SSet, SimplicialData};
pub use tcp::{extract_twisting_function, twisted_cartesian_product, TwistedCartesianProduct};
pub use twisting_function::{check_twisting_function, TwistingFunction};

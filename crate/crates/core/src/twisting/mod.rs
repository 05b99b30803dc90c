//! The differential graded convolution algebra Hom(C, A), twisting
//! cochains, twisted tensor products, homotopies, bundle morphisms, the
//! gauge action, and the decision procedure for gauge equivalence.

pub mod cochain;
pub mod convolution;
pub mod gauge;
pub mod homotopy;
pub mod structures;

pub use cochain::{check_twisting_cochain, extract_twisting_cochain, twisted_tensor_product, TwistingCochain};
pub use convolution::Convolution;
pub use gauge::{decide_gauge_equivalence, gauge_act, GaugeDecision};
pub use homotopy::{check_homotopy, compose_bundle_morphism, BundleMorphismInput, TwistingHomotopy};
pub use structures::{DgAlgebra, DgCoalgebra};

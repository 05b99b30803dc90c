//! Chain complexes, graded maps, the Hom differential, contractions with
//! side conditions, and the basic perturbation lemma with
//! filtration-based series termination.

pub mod complex;
pub mod contraction;
pub mod graded;
pub mod perturb;
pub mod tensor;

pub use complex::{hom_differential, ChainComplex, Filtration};
pub use contraction::{normalize_side_conditions, CheckLine, Contraction, ContractionReport};
pub use graded::{GradedMap, GradedModule, SparseVec};
pub use perturb::{perturb_contraction, Perturbation};
pub use tensor::{splice_map, tensor_of_maps, TargetShape, TensorComplex, TensorSpace};

//! Finite categories, nerves, path categories, the universal twisting
//! function, functor-induced principal bundles, the orbit set D(C, G),
//! barycentric subdivision, and the cover/transition-function dictionary.

pub mod group;

pub use group::FiniteGroup;

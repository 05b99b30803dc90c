//! Simplicial maps given by their values on nondegenerate generators,
//! extended to degenerate simplices by commuting with degeneracies.

use super::chains::NormalizedChains;
use super::simplex::Simp;
use super::sset::SSet;
use crate::chaincore::GradedMap;
use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Debug, Clone)]
pub struct SimplicialMap {
    pub from: SSet,
    pub to: SSet,
    /// images[n][idx] = image simplex (possibly degenerate) of generator.
    pub images: Vec<Vec<Simp>>,
}

impl SimplicialMap {
    pub fn new(from: SSet, to: SSet, images: Vec<Vec<Simp>>) -> Result<Self> {
        let m = SimplicialMap { from, to, images };
        m.verify()?;
        Ok(m)
    }

    /// Image of an arbitrary simplex.
    pub fn apply(&self, s: &Simp) -> Simp {
        let core = self.images[s.gen_degree][s.gen_index].clone();
        core.apply_word(&s.word)
    }

    /// Simpliciality: f(∂_i g) = ∂_i f(g) on every generator (degeneracy
    /// compatibility is definitional for the extension).
    pub fn verify(&self) -> Result<()> {
        if self.images.len() < self.from.generators.len() {
            return Err(Error::Invalid("image table incomplete".into()));
        }
        for (n, gens) in self.from.generators.iter().enumerate() {
            if self.images[n].len() != gens.len() {
                return Err(Error::Invalid(format!("image table incomplete in degree {n}")));
            }
            for (idx, img) in self.images[n].iter().enumerate() {
                if img.degree() != n {
                    return Err(Error::Invalid(format!(
                        "image of `{}` has degree {}, expected {n}",
                        gens[idx],
                        img.degree()
                    )));
                }
                if n >= 1 {
                    for i in 0..=n {
                        let lhs = self.apply(&self.from.face(&Simp::generator(n, idx), i));
                        let rhs = self.to.face(img, i);
                        if lhs != rhs {
                            return Err(Error::identity(
                                "f∂_i = ∂_i f",
                                n as i64,
                                &self.from.display(&Simp::generator(n, idx)),
                                &format!("face {i} does not commute"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Levelwise bijectivity up to the common bound: nondegenerate
    /// generators map bijectively onto nondegenerate generators.
    pub fn is_levelwise_bijective(&self) -> bool {
        let bound = self.from.degree_bound.min(self.to.degree_bound);
        for n in 0..=bound {
            let mut seen = std::collections::BTreeSet::new();
            if self.from.generator_count(n) != self.to.generator_count(n) {
                return false;
            }
            for img in &self.images[n] {
                if !img.is_nondegenerate() {
                    return false;
                }
                if !seen.insert(img.gen_index) {
                    return false;
                }
            }
        }
        true
    }

    /// Induced map on normalized chains (degenerate images vanish).
    pub fn chain_map(&self, src: &NormalizedChains, tgt: &NormalizedChains) -> Result<GradedMap> {
        let sm = &src.complex.module;
        let tm = &tgt.complex.module;
        GradedMap::from_columns(sm, tm, 0, sm.degrees(), |deg, idx| {
            let img = &self.images[deg as usize][idx];
            if img.is_nondegenerate() {
                Ok(vec![(img.gen_index, BigInt::from(1))])
            } else {
                Ok(Vec::new())
            }
        })
    }

    pub fn compose(&self, first: &SimplicialMap) -> Result<SimplicialMap> {
        let mut images = Vec::new();
        for (n, gens) in first.from.generators.iter().enumerate() {
            let mut level = Vec::new();
            for idx in 0..gens.len() {
                level.push(self.apply(&first.images[n][idx]));
            }
            images.push(level);
        }
        SimplicialMap::new(first.from.clone(), self.to.clone(), images)
    }
}

//! Normalized chain complexes of simplicial sets, the Alexander-Whitney
//! diagonal making them dg coalgebras, and the Eilenberg-MacLane algebra
//! structure on the chains of a simplicial group.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::sgroup::SGroupSSet;
use super::simplex::Simp;
use super::sset::SSet;
use crate::chaincore::tensor::TensorSpace;
use crate::chaincore::{ChainComplex, GradedMap, GradedModule};
use crate::coeffs::{ExactMatrix, RingSpec};
use crate::error::{Error, Result};
use crate::twisting::structures::{DgAlgebra, DgCoalgebra};

#[derive(Debug, Clone)]
pub struct NormalizedChains {
    pub sset: SSet,
    pub complex: ChainComplex,
}

/// Normalized chains: basis the nondegenerate simplices, differential the
/// alternating face sum with degenerate faces dropped.
pub fn normalized_chains(s: &SSet, ring: RingSpec) -> Result<NormalizedChains> {
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for (n, gens) in s.generators.iter().enumerate() {
        if !gens.is_empty() {
            basis.insert(n as i64, gens.clone());
        }
    }
    let module = GradedModule::new(ring, basis, Some(s.degree_bound as i64))?;
    let mut d = GradedMap::zero(&module, &module, -1);
    for n in 1..=s.degree_bound {
        let cols = s.generator_count(n);
        if cols == 0 {
            continue;
        }
        let mut block = ExactMatrix::zero(s.generator_count(n - 1), cols, ring);
        for idx in 0..cols {
            for i in 0..=n {
                let f = &s.faces[n][idx][i];
                if f.is_nondegenerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    block.add_to(f.gen_index, idx, BigInt::from(sign));
                }
            }
        }
        d.set_block(n as i64, block)?;
    }
    let complex = ChainComplex::new(module, d, None)?;
    Ok(NormalizedChains {
        sset: s.clone(),
        complex,
    })
}

/// Front face of a simplex: restrict to vertices 0..=i.
pub fn front_face(s: &SSet, simp: &Simp, i: usize) -> Simp {
    let mut f = simp.clone();
    for k in ((i + 1)..=simp.degree()).rev() {
        f = s.face(&f, k);
    }
    f
}

/// Back face: restrict to the last j+1 vertices.
pub fn back_face(s: &SSet, simp: &Simp, j: usize) -> Simp {
    let mut f = simp.clone();
    for _ in 0..(simp.degree() - j) {
        f = s.face(&f, 0);
    }
    f
}

/// The Alexander-Whitney diagonal Δ(x) = Σ front_i(x) ⊗ back_{n-i}(x) on
/// normalized chains, as a map into the tensor square.
pub fn aw_diagonal(chains: &NormalizedChains, square: &TensorSpace) -> Result<GradedMap> {
    let s = &chains.sset;
    let module = &chains.complex.module;
    GradedMap::from_columns(module, &square.module, 0, module.degrees(), |deg, idx| {
        let n = deg as usize;
        let simp = Simp::generator(n, idx);
        let mut out: Vec<(usize, BigInt)> = Vec::new();
        for i in 0..=n {
            let front = front_face(s, &simp, i);
            let back = back_face(s, &simp, n - i);
            if front.is_nondegenerate() && back.is_nondegenerate() {
                let t = vec![
                    (i as i64, front.gen_index),
                    ((n - i) as i64, back.gen_index),
                ];
                let row = square
                    .index_of(deg, &t)
                    .ok_or_else(|| Error::Internal("AW tuple missing in tensor square".into()))?;
                out.push((row, BigInt::from(1)));
            }
        }
        Ok(out)
    })
}

/// Normalized chains as a dg coalgebra. The coaugmentation is the first
/// vertex in generator order (every base here is connected with a
/// preferred vertex; flags that depend on the choice are reported
/// relative to it).
pub fn normalized_chains_coalgebra(s: &SSet, ring: RingSpec) -> Result<(NormalizedChains, DgCoalgebra)> {
    let chains = normalized_chains(s, ring)?;
    let module = &chains.complex.module;
    let square = TensorSpace::new(vec![module.clone(), module.clone()])?;
    let diagonal = aw_diagonal(&chains, &square)?;
    let ground = GradedModule::ground(ring);
    let mut counit = GradedMap::zero(module, &ground, 0);
    if module.dim(0) > 0 {
        let mut block = ExactMatrix::zero(1, module.dim(0), ring);
        for c in 0..module.dim(0) {
            block.set(0, c, BigInt::from(1));
        }
        counit.set_block(0, block)?;
    }
    let coaugmentation = if module.dim(0) > 0 {
        let mut eta = GradedMap::zero(&ground, module, 0);
        let mut block = ExactMatrix::zero(module.dim(0), 1, ring);
        block.set(0, 0, BigInt::from(1));
        eta.set_block(0, block)?;
        Some(eta)
    } else {
        None
    };
    let coalg = DgCoalgebra::new(chains.complex.clone(), diagonal, counit, coaugmentation)?;
    Ok((chains, coalg))
}

/// |Rf| of a levelwise map on generators given by `image`: nondegenerate
/// generator (deg, idx) ↦ simplex (degenerate images die in normalized
/// chains).
pub fn chain_map_of_simplicial<F>(
    src: &NormalizedChains,
    tgt: &NormalizedChains,
    mut image: F,
) -> Result<GradedMap>
where
    F: FnMut(usize, usize) -> Simp,
{
    let sm = &src.complex.module;
    let tm = &tgt.complex.module;
    GradedMap::from_columns(sm, tm, 0, sm.degrees(), |deg, idx| {
        let img = image(deg as usize, idx);
        if img.is_nondegenerate() {
            debug_assert_eq!(img.gen_degree, deg as usize);
            Ok(vec![(img.gen_index, BigInt::from(1))])
        } else {
            Ok(Vec::new())
        }
    })
}

/// The chains of a simplicial group as an augmented dg algebra: the
/// multiplication is |Rμ| ∘ (shuffle map), with μ the levelwise group
/// multiplication.
pub fn normalized_chains_algebra(
    k: &SGroupSSet,
    ring: RingSpec,
) -> Result<(NormalizedChains, DgAlgebra)> {
    let bound = k.sset.degree_bound;
    let chains = normalized_chains(&k.sset, ring)?;
    let module = &chains.complex.module;
    let square = TensorSpace::new(vec![module.clone(), module.clone()])?;

    // Product simplicial set K × K and its chains.
    let (prod, pairs) = super::product::product_sset(&k.sset, &k.sset, bound)?;
    let prod_chains = normalized_chains(&prod, ring)?;

    // Shuffle map |RK| ⊗ |RK| → |R(K×K)|.
    let shuffle = super::ez::shuffle_map(&k.sset, &k.sset, &prod, &pairs, &square, &prod_chains)?;

    // |Rμ|: normalized chains of K×K → chains of K.
    let mu = chain_map_of_simplicial(&prod_chains, &chains, |deg, idx| {
        let (a, b) = &pairs[deg][idx];
        let xa = k.elem_of_simp(a);
        let xb = k.elem_of_simp(b);
        let prod_elem = k.group.levels[deg].mul(xa, xb);
        k.simp_of_elem(deg, prod_elem)
    })?;

    let multiplication = mu.compose(&shuffle)?;

    let ground = GradedModule::ground(ring);
    let mut unit = GradedMap::zero(&ground, module, 0);
    {
        let e = k.identity_simp(0);
        let mut block = ExactMatrix::zero(module.dim(0), 1, ring);
        block.set(e.gen_index, 0, BigInt::from(1));
        unit.set_block(0, block)?;
    }
    let mut augmentation = GradedMap::zero(module, &ground, 0);
    if module.dim(0) > 0 {
        let mut block = ExactMatrix::zero(1, module.dim(0), ring);
        for c in 0..module.dim(0) {
            block.set(0, c, BigInt::from(1));
        }
        augmentation.set_block(0, block)?;
    }

    let alg = DgAlgebra::new(chains.complex.clone(), multiplication, unit, Some(augmentation))?;
    Ok((chains, alg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catnerve::group::FiniteGroup;
    use crate::coeffs::HomologyGroup;
    use crate::simplicial::sgroup::SimplicialGroup;
    use crate::simplicial::sset::{minimal_circle, standard_simplex};

    #[test]
    fn point_coalgebra() {
        let d0 = standard_simplex(0, 3).unwrap();
        let (chains, coalg) = normalized_chains_coalgebra(&d0, RingSpec::Integers).unwrap();
        assert_eq!(chains.complex.module.total_dim(), 1);
        // Δ(v) = v ⊗ v
        let block = coalg.diagonal.block(0);
        assert_eq!(block.get(0, 0), BigInt::from(1));
        assert_eq!(block.nnz(), 1);
    }

    #[test]
    fn circle_chains_and_diagonal() {
        let s1 = minimal_circle(6).unwrap();
        let (chains, coalg) = normalized_chains_coalgebra(&s1, RingSpec::Integers).unwrap();
        assert_eq!(chains.complex.homology(0).unwrap(), HomologyGroup::free(1));
        assert_eq!(chains.complex.homology(1).unwrap(), HomologyGroup::free(1));
        // Δ(σ) = σ⊗v + v⊗σ
        let block = coalg.diagonal.block(1);
        assert_eq!(block.nnz(), 2);
        let t1 = coalg.square.index_of(1, &[(1, 0), (0, 0)]).unwrap();
        let t2 = coalg.square.index_of(1, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(block.get(t1, 0), BigInt::from(1));
        assert_eq!(block.get(t2, 0), BigInt::from(1));
    }

    #[test]
    fn group_ring_of_z2() {
        let g = FiniteGroup::cyclic(2);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 4)).unwrap();
        let (chains, alg) = normalized_chains_algebra(&k, RingSpec::Integers).unwrap();
        // Concentrated in degree 0 with the group-ring multiplication.
        assert_eq!(chains.complex.module.total_dim(), 2);
        let e = 0usize; // label order: e, g
        let gidx = 1usize;
        let t = alg.square.index_of(0, &[(0, gidx), (0, gidx)]).unwrap();
        let block = alg.multiplication.block(0);
        assert_eq!(block.get(e, t), BigInt::from(1));
    }
}

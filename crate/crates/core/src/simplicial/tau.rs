//! The twisting cochain of a twisting function: perturb the
//! Eilenberg-Zilber contraction by ∂^ρ = d(B ×_ρ K) − d(B × K) (a
//! Serre-filtration-lowering perturbation) and read off
//!
//!   τ^ρ = (ε⊗Id) ∘ 𝒟^ρ ∘ (Id⊗η) : |RB| → |RK|.
//!
//! The transferred perturbation is verified to equal τ^ρ∩, so the
//! perturbed small complex is the twisted tensor product |RB| ⊗_{τ^ρ} |RK|
//! and the perturbed contraction retracts |R(B ×_ρ K)| onto it.

use super::chains::normalized_chains;
use super::ez::{ez_contraction, EzData};
use super::tcp::{twisted_cartesian_product, TwistedCartesianProduct};
use super::twisting_function::TwistingFunction;
use crate::chaincore::{perturb_contraction, ChainComplex, Contraction, GradedMap, Perturbation};
use crate::coeffs::RingSpec;
use crate::error::{Error, Result};
use crate::twisting::cochain::{check_twisting_cochain, TwistingCochain};
use crate::twisting::Convolution;

#[derive(Debug, Clone)]
pub struct TauFromRho {
    /// τ^ρ, validated (augmented when the algebra is augmented).
    pub cochain: TwistingCochain,
    /// Perturbed contraction: |RB| ⊗_{τ^ρ} |RK| ⇄ |R(B ×_ρ K)|.
    pub contraction: Contraction,
    /// The transferred perturbation 𝒟^ρ on |RB| ⊗ |RK| (equals τ^ρ∩).
    pub transferred: GradedMap,
    /// Convolution context for (|RB|, |RK|).
    pub convolution: Convolution,
    /// Unperturbed Eilenberg-Zilber data.
    pub ez: EzData,
    /// The twisted cartesian product B ×_ρ K.
    pub tcp: TwistedCartesianProduct,
}

pub fn tau_from_rho(rho: &TwistingFunction, ring: RingSpec) -> Result<TauFromRho> {
    let bound = rho.base.degree_bound;
    if rho.group.sset.degree_bound < bound {
        return Err(Error::Truncation {
            needed: bound as i64,
            bound: rho.group.sset.degree_bound as i64,
            context: "group must be built up to the base bound".into(),
        });
    }

    let ez = ez_contraction(&rho.base, &rho.group.sset, ring, bound)?;
    let tcp = twisted_cartesian_product(rho)?;

    // The twisted and untwisted products share generators (degeneracies
    // are untwisted), so their chains live on one module.
    let twisted_chains = normalized_chains(&tcp.total, ring)?;
    if twisted_chains.complex.module != ez.contraction.big.module {
        return Err(Error::Internal(
            "twisted and untwisted products disagree on generators".into(),
        ));
    }
    let delta = twisted_chains
        .complex
        .differential
        .sub(&ez.contraction.big.differential)?;
    let perturbation = Perturbation::new(ez.contraction.big.clone(), delta)?;
    let (contraction, transferred) =
        perturb_contraction(&ez.contraction, &perturbation, bound as i64)?;
    contraction.verify_strict()?;

    // Convolution context over the same chain modules.
    let (_, coalg) = super::chains::normalized_chains_coalgebra(&rho.base, ring)?;
    let (_, alg) = super::chains::normalized_chains_algebra(&rho.group, ring)?;
    let convolution = Convolution::new(coalg, alg)?;
    if convolution.pair.complex.module != ez.tensor.complex.module {
        return Err(Error::Internal(
            "convolution pair does not match the Eilenberg-Zilber tensor side".into(),
        ));
    }

    let tau = convolution
        .project_fiber()?
        .compose(&transferred)?
        .compose(&convolution.include_fiber()?)?;
    let cochain = check_twisting_cochain(&convolution, &tau)?;

    // 𝒟^ρ = τ^ρ∩ exactly: the perturbed differential is the twisted one.
    let cap = convolution.cap(&tau)?;
    if let Some((deg, w)) = transferred.sub(&cap)?.first_nonzero_witness() {
        return Err(Error::identity(
            "𝒟^ρ = τ^ρ∩",
            deg,
            &w,
            "transferred perturbation is not the cap with τ^ρ",
        ));
    }

    Ok(TauFromRho {
        cochain,
        contraction,
        transferred,
        convolution,
        ez,
        tcp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catnerve::group::FiniteGroup;
    use crate::coeffs::HomologyGroup;
    use crate::simplicial::sgroup::{SGroupSSet, SimplicialGroup};
    use crate::simplicial::sset::minimal_circle;
    use num_bigint::BigInt;
    use std::collections::BTreeMap;

    fn circle_rho(m: usize, value: usize, bound: usize) -> TwistingFunction {
        let s1 = minimal_circle(bound).unwrap();
        let g = FiniteGroup::cyclic(m);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, bound)).unwrap();
        let mut values = BTreeMap::new();
        values.insert((1usize, 0usize), value);
        TwistingFunction::new(s1, k, values).unwrap()
    }

    #[test]
    fn trivial_rho_gives_zero_tau() {
        let s1 = minimal_circle(4).unwrap();
        let g = FiniteGroup::cyclic(2);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 4)).unwrap();
        let rho = TwistingFunction::trivial(&s1, &k);
        let out = tau_from_rho(&rho, RingSpec::Integers).unwrap();
        assert!(out.cochain.map.is_zero());
        assert!(out.transferred.is_zero());
    }

    #[test]
    fn circle_z2_leading_term() {
        // τ^ρ(σ) = 1 − g: forced by the master equation for the sign
        // convention Dτ + τ∪τ = 0 (checked independently in the W-bar
        // instance, where 2τ(c1) = τ(c1)² pins τ(c1) = 1 − g).
        let rho = circle_rho(2, 1, 5);
        let out = tau_from_rho(&rho, RingSpec::Integers).unwrap();
        assert!(out.cochain.augmented);
        let col = out.cochain.map.block(1).column(0);
        let as_map: BTreeMap<usize, BigInt> = col.into_iter().collect();
        // A basis order: e, g
        assert_eq!(as_map.get(&0), Some(&BigInt::from(1)));
        assert_eq!(as_map.get(&1), Some(&BigInt::from(-1)));
    }

    #[test]
    fn twisted_complex_computes_double_cover_homology() {
        let rho = circle_rho(2, 1, 5);
        let out = tau_from_rho(&rho, RingSpec::Integers).unwrap();
        let twisted = out.contraction.small.clone();
        assert_eq!(twisted.homology(0).unwrap(), HomologyGroup::free(1));
        assert_eq!(twisted.homology(1).unwrap(), HomologyGroup::free(1));
        // And it matches the chains of the twisted cartesian product.
        let big = out.contraction.big.clone();
        assert_eq!(big.homology(0).unwrap(), HomologyGroup::free(1));
        assert_eq!(big.homology(1).unwrap(), HomologyGroup::free(1));
    }
}

//! The action of degree-zero morphisms θ: B → K on twisting functions,
//!
//!   (θ*ρ)(b) = θ(∂_p b) · ρ(b) · (∂_p θ(b))⁻¹,
//!
//! and the induced augmented homotopy h^θ: τ^{ρ} ≃ τ^{θ*ρ} built from
//! Ψ^θ = g₂ ∘ |R(θ*)| ∘ ι₁ through the perturbed contractions.

use std::collections::BTreeMap;

use super::simplex::Simp;
use super::smap::SimplicialMap;
use super::sset::SSet;
use super::tau::{tau_from_rho, TauFromRho};
use super::twisting_function::TwistingFunction;
use crate::chaincore::GradedMap;
use crate::coeffs::RingSpec;
use crate::error::{Error, Result};
use crate::simplicial::sgroup::SGroupSSet;
use crate::twisting::homotopy::{check_homotopy, TwistingHomotopy};

/// A degree-zero morphism of graded sets B → K, tabulated on every
/// representable simplex.
#[derive(Debug, Clone)]
pub struct Theta {
    pub base: SSet,
    pub group: SGroupSSet,
    /// simplex (any, in normal form) → element of K at the same level.
    pub values: BTreeMap<Simp, usize>,
}

impl Theta {
    pub fn value(&self, s: &Simp) -> usize {
        self.values[s]
    }

    /// θ from a vertex assignment (Complement-style): θ(b) = φ(last
    /// vertex of b). Such θ commute with every face except the last and
    /// with all degeneracies, hence satisfy the compatibility needed for
    /// θ* to be simplicial.
    pub fn from_vertex_map(base: &SSet, group: &SGroupSSet, phi: &[usize]) -> Result<Theta> {
        if !group.group.trivially_simplicial {
            return Err(Error::Unsupported(
                "vertex-map thetas require a trivially simplicial group".into(),
            ));
        }
        if phi.len() != base.generator_count(0) {
            return Err(Error::Invalid("vertex map has wrong length".into()));
        }
        let mut values = BTreeMap::new();
        for n in 0..=base.degree_bound {
            for s in base.simplices(n) {
                let mut v = s.clone();
                for _ in 0..n {
                    v = base.face(&v, 0);
                }
                let g0 = phi[v.gen_index];
                // Constant at level n of the trivially simplicial group.
                values.insert(s, g0);
            }
        }
        Ok(Theta {
            base: base.clone(),
            group: group.clone(),
            values,
        })
    }

    /// The compatibility set that makes θ*: B×_ρ K → B×_{θ*ρ} K
    /// simplicial: θ commutes with ∂_i (i < p) and all s_i. This implies
    /// the (mort) condition ∂_{p-1}θ(∂_{p-1}b) = ∂_{p-1}∂_pθ(b).
    pub fn verify_tame(&self) -> Result<()> {
        let b = &self.base;
        let k = &self.group.group;
        for p in 1..=b.degree_bound {
            for s in b.simplices(p) {
                let ts = self.value(&s);
                for i in 0..p {
                    let lhs = self.value(&b.face(&s, i));
                    let rhs = k.face(p, i, ts);
                    if lhs != rhs {
                        return Err(Error::identity(
                            "θ∂_i = ∂_iθ (i < p)",
                            p as i64,
                            &b.display(&s),
                            &format!("fails at i={i}"),
                        ));
                    }
                }
                if p + 1 <= b.degree_bound {
                    for i in 0..=p {
                        let lhs = self.value(&s.degeneracy(i));
                        let rhs = k.degeneracy(p, i, ts);
                        if lhs != rhs {
                            return Err(Error::identity(
                                "θs_i = s_iθ",
                                p as i64,
                                &b.display(&s),
                                &format!("fails at i={i}"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The (mort) condition alone (what the action needs).
    pub fn verify_mort(&self) -> Result<()> {
        let b = &self.base;
        let k = &self.group.group;
        for p in 2..=b.degree_bound {
            for s in b.simplices(p) {
                let lhs = k.face(p - 1, p - 1, self.value(&b.face(&s, p - 1)));
                let rhs = k.face(p - 1, p - 1, k.face(p, p, self.value(&s)));
                if lhs != rhs {
                    return Err(Error::identity(
                        "∂_{p-1}θ(∂_{p-1}b) = ∂_{p-1}∂_pθ(b)",
                        p as i64,
                        &b.display(&s),
                        "(mort) fails",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// θ*ρ per the composite diagram; the result is fully revalidated.
pub fn theta_act(theta: &Theta, rho: &TwistingFunction) -> Result<TwistingFunction> {
    theta.verify_mort()?;
    let b = &rho.base;
    let k = &rho.group;
    let mut values = BTreeMap::new();
    for p in 1..=b.degree_bound {
        for idx in 0..b.generator_count(p) {
            let s = Simp::generator(p, idx);
            let t_last = theta.value(&b.face(&s, p));
            let r = rho.value(&s);
            let t_self = k.group.face(p, p, theta.value(&s));
            let lvl = &k.group.levels[p - 1];
            let v = lvl.mul(lvl.mul(t_last, r), lvl.inv(t_self));
            values.insert((p, idx), v);
        }
    }
    let out = TwistingFunction::new(b.clone(), k.clone(), values)?;
    super::twisting_function::check_twisting_function(&out)?;
    Ok(out)
}

#[derive(Debug)]
pub struct ThetaHomotopy {
    pub homotopy: TwistingHomotopy,
    /// Ψ^θ = h^θ∩ as a matrix on |RB| ⊗ |RK|.
    pub psi: GradedMap,
    pub tau1: TauFromRho,
    pub tau2: TauFromRho,
}

/// Theorem-level pipeline: from θ and ρ₁ build ρ₂ = θ*ρ₁, the twisted
/// cochains τ^{ρ₁}, τ^{ρ₂}, the chain map |R(θ*)|, and the augmented
/// homotopy h^θ = (ε⊗Id) Ψ^θ (Id⊗η) with Ψ^θ = g₂ |R(θ*)| ι₁.
/// Verifies h^θ∩ = Ψ^θ and the commuting square ι₂ Ψ^θ = |R(θ*)| ι₁.
pub fn theta_to_homotopy(
    theta: &Theta,
    rho1: &TwistingFunction,
    ring: RingSpec,
) -> Result<ThetaHomotopy> {
    theta.verify_tame()?;
    let rho2 = theta_act(theta, rho1)?;
    let tau1 = tau_from_rho(rho1, ring)?;
    let tau2 = tau_from_rho(&rho2, ring)?;

    // θ*: E₁ → E₂, (b, x) ↦ (b, θ(b)·x) on nondegenerate pairs.
    let e1 = &tau1.tcp;
    let e2 = &tau2.tcp;
    let k = &rho1.group;
    let mut images = Vec::new();
    for (level, pairs) in e1.pairs.iter().enumerate() {
        let mut row = Vec::new();
        for (u, x) in pairs {
            let tx = k
                .group
                .levels[level]
                .mul(theta.value(u), k.elem_of_simp(x));
            let moved = (u.clone(), k.simp_of_elem(level, tx));
            let pos = e2.pairs[level]
                .iter()
                .position(|p| *p == moved)
                .ok_or_else(|| Error::Internal("θ* image pair missing".into()))?;
            row.push(Simp::generator(level, pos));
        }
        images.push(row);
    }
    let theta_star = SimplicialMap::new(e1.total.clone(), e2.total.clone(), images)?;
    if !theta_star.is_levelwise_bijective() {
        return Err(Error::Internal("θ* must be a levelwise bijection".into()));
    }

    let chains1 = super::chains::normalized_chains(&e1.total, ring)?;
    let chains2 = super::chains::normalized_chains(&e2.total, ring)?;
    let r_theta = theta_star.chain_map(&chains1, &chains2)?;

    let iota1 = &tau1.contraction.inject;
    let g2 = &tau2.contraction.project;
    let psi = g2.compose(&r_theta.compose(iota1)?)?;

    let ctx = &tau1.convolution;
    let h = ctx
        .project_fiber()?
        .compose(&psi)?
        .compose(&ctx.include_fiber()?)?;
    let (homotopy, hcap) = check_homotopy(ctx, &h, &tau1.cochain, &tau2.cochain)?;
    if !homotopy.augmented {
        return Err(Error::Internal("h^θ must be augmented".into()));
    }
    if let Some((deg, w)) = hcap.sub(&psi)?.first_nonzero_witness() {
        return Err(Error::identity(
            "Ψ^θ = h^θ∩",
            deg,
            &w,
            "cap of the extracted homotopy differs from Ψ^θ",
        ));
    }
    // Commuting square with the perturbed injections.
    let iota2 = &tau2.contraction.inject;
    let lhs = iota2.compose(&psi)?;
    let rhs = r_theta.compose(iota1)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity(
            "ι₂ Ψ^θ = |R(θ*)| ι₁",
            deg,
            &w,
            "square with the twisted injections does not commute",
        ));
    }

    Ok(ThetaHomotopy {
        homotopy,
        psi,
        tau1,
        tau2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catnerve::group::FiniteGroup;
    use crate::simplicial::sgroup::SimplicialGroup;
    use crate::simplicial::sset::minimal_circle;

    fn s3_circle(value: usize, bound: usize) -> (TwistingFunction, SGroupSSet, SSet) {
        let s1 = minimal_circle(bound).unwrap();
        let g = FiniteGroup::symmetric(3);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, bound)).unwrap();
        let mut values = BTreeMap::new();
        values.insert((1usize, 0usize), value);
        (
            TwistingFunction::new(s1.clone(), k.clone(), values).unwrap(),
            k,
            s1,
        )
    }

    #[test]
    fn identity_theta_fixes_rho() {
        let (rho, k, s1) = s3_circle(3, 4);
        let theta = Theta::from_vertex_map(&s1, &k, &[k.group.identity_at(0)]).unwrap();
        let acted = theta_act(&theta, &rho).unwrap();
        assert_eq!(acted.values, rho.values);
    }

    #[test]
    fn constant_theta_conjugates() {
        let (rho, k, s1) = s3_circle(1, 4);
        let g = &k.group.levels[0];
        for t in 0..g.order() {
            let theta = Theta::from_vertex_map(&s1, &k, &[t]).unwrap();
            let acted = theta_act(&theta, &rho).unwrap();
            let expect = g.mul(g.mul(t, rho.values[&(1, 0)]), g.inv(t));
            assert_eq!(acted.values[&(1, 0)], expect);
        }
    }

    #[test]
    fn composed_action_is_action() {
        // θ₂*(θ₁*ρ) = (θ₂θ₁)*ρ with the pointwise product
        // (θ₂θ₁)(x) = θ₂(x)·θ₁(x): expanding the two conjugations makes
        // the inner factors telescope.
        let (rho, k, s1) = s3_circle(4, 4);
        let t1 = Theta::from_vertex_map(&s1, &k, &[2]).unwrap();
        let t2 = Theta::from_vertex_map(&s1, &k, &[5]).unwrap();
        let a = theta_act(&t2, &theta_act(&t1, &rho).unwrap()).unwrap();
        let g = &k.group.levels[0];
        let t21 = Theta::from_vertex_map(&s1, &k, &[g.mul(5, 2)]).unwrap();
        let b = theta_act(&t21, &rho).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn theta_homotopy_on_circle_s3() {
        let (rho, k, s1) = s3_circle(1, 4);
        let theta = Theta::from_vertex_map(&s1, &k, &[3]).unwrap();
        let out = theta_to_homotopy(&theta, &rho, RingSpec::Integers).unwrap();
        assert!(out.homotopy.augmented);
    }
}

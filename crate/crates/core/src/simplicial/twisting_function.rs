//! Twisting functions ρ: B_p → K_{p-1} with the nonabelian cocycle
//! condition, stored on nondegenerate simplices and extended to all
//! simplices by the compatibility rules
//!
//!   ρ(∂_i b) = ∂_i ρ(b)        0 <= i <= p-2,
//!   ρ(s_i b) = s_i ρ(b)        0 <= i <= p-1,
//!   ρ(s_p b) = e,
//!
//! together with the defining cocycle identity
//!
//!   ρ(∂_p b) · ∂_{p-1} ρ(b) = ρ(∂_{p-1} b),   p >= 2.
//!
//! The full compatibility set (not just the last two rules) is what makes
//! the twisted cartesian product simplicial; `check_twisting_function`
//! verifies all of it on every representable simplex.

use std::collections::BTreeMap;

use super::sgroup::SGroupSSet;
use super::simplex::Simp;
use super::sset::SSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TwistingFunction {
    pub base: SSet,
    pub group: SGroupSSet,
    /// (degree p, generator index) -> element index in K_{p-1}, for the
    /// nondegenerate simplices of degree >= 1.
    pub values: BTreeMap<(usize, usize), usize>,
}

impl TwistingFunction {
    /// Construct with completeness and range checks on the stored values;
    /// use [`check_twisting_function`] to verify the cocycle conditions.
    pub fn new(
        base: SSet,
        group: SGroupSSet,
        values: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        if group.group.bound + 1 < base.degree_bound {
            return Err(Error::Invalid(format!(
                "group bound {} too small for base bound {}",
                group.group.bound, base.degree_bound
            )));
        }
        for p in 1..=base.degree_bound {
            for idx in 0..base.generator_count(p) {
                let v = values.get(&(p, idx)).ok_or_else(|| {
                    Error::Invalid(format!(
                        "missing twisting value on `{}` (degree {p})",
                        base.generator_label(p, idx)
                    ))
                })?;
                if *v >= group.group.levels[p - 1].order() {
                    return Err(Error::Invalid(format!(
                        "twisting value out of range on `{}`",
                        base.generator_label(p, idx)
                    )));
                }
            }
        }
        Ok(TwistingFunction {
            base,
            group,
            values,
        })
    }

    /// The constant-identity twisting function (the trivial bundle).
    pub fn trivial(base: &SSet, group: &SGroupSSet) -> Self {
        let mut values = BTreeMap::new();
        for p in 1..=base.degree_bound {
            for idx in 0..base.generator_count(p) {
                values.insert((p, idx), group.group.identity_at(p - 1));
            }
        }
        TwistingFunction {
            base: base.clone(),
            group: group.clone(),
            values,
        }
    }

    /// ρ on an arbitrary simplex of degree p >= 1, by the extension rules.
    pub fn value(&self, u: &Simp) -> usize {
        let p = u.degree();
        debug_assert!(p >= 1);
        if u.word.is_empty() {
            return self.values[&(u.gen_degree, u.gen_index)];
        }
        let j = u.word[0];
        let rest = Simp {
            word: u.word[1..].to_vec(),
            gen_degree: u.gen_degree,
            gen_index: u.gen_index,
        };
        if j == p - 1 {
            // u = s_{p-1}(rest) with rest of degree p-1: ρ(u) = e.
            self.group.group.identity_at(p - 1)
        } else {
            // j <= p-2: ρ(s_j rest) = s_j ρ(rest), ρ(rest) ∈ K_{p-2}.
            let r = self.value(&rest);
            self.group.group.degeneracy(p - 2, j, r)
        }
    }
}

/// Validate a candidate twisting function: the cocycle identity plus the
/// full compatibility set, on every representable simplex.
pub fn check_twisting_function(rho: &TwistingFunction) -> Result<()> {
    let b = &rho.base;
    let k = &rho.group;
    for p in 1..=b.degree_bound {
        for u in b.simplices(p) {
            let ru = rho.value(&u);
            // cocycle (p >= 2): ρ(∂_p u) ∂_{p-1}(ρ u) = ρ(∂_{p-1} u)
            if p >= 2 {
                let lhs = k.group.levels[p - 2].mul(
                    rho.value(&b.face(&u, p)),
                    k.group.face(p - 1, p - 1, ru),
                );
                let rhs = rho.value(&b.face(&u, p - 1));
                if lhs != rhs {
                    return Err(Error::identity(
                        "ρ(∂_p b)·∂_{p-1}ρ(b) = ρ(∂_{p-1} b)",
                        p as i64,
                        &b.display(&u),
                        "twisting-function cocycle condition",
                    ));
                }
            }
            // face compatibility: ∂_i ρ(u) = ρ(∂_i u) for i <= p-2
            if p >= 2 {
                for i in 0..=(p - 2) {
                    if k.group.face(p - 1, i, ru) != rho.value(&b.face(&u, i)) {
                        return Err(Error::identity(
                            "∂_i ρ = ρ ∂_i",
                            p as i64,
                            &b.display(&u),
                            &format!("fails at i={i}"),
                        ));
                    }
                }
            }
            // degeneracy compatibility and ρ(s_p b) = e, when the target
            // degree stays representable.
            if p + 1 <= b.degree_bound {
                for i in 0..=(p - 1) {
                    let lhs = k.group.degeneracy(p - 1, i, ru);
                    let rhs = rho.value(&u.degeneracy(i));
                    if lhs != rhs {
                        return Err(Error::identity(
                            "s_i ρ = ρ s_i",
                            p as i64,
                            &b.display(&u),
                            &format!("fails at i={i}"),
                        ));
                    }
                }
                let e = rho.value(&u.degeneracy(p));
                if e != k.group.identity_at(p) {
                    return Err(Error::identity(
                        "ρ(s_p b) = e",
                        p as i64,
                        &b.display(&u),
                        "degenerate top face must carry the identity",
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catnerve::group::FiniteGroup;
    use crate::simplicial::sgroup::SimplicialGroup;
    use crate::simplicial::sset::minimal_circle;

    pub fn circle_rho(m: usize, value: usize, bound: usize) -> TwistingFunction {
        let s1 = minimal_circle(bound).unwrap();
        let g = FiniteGroup::cyclic(m);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, bound)).unwrap();
        let mut values = BTreeMap::new();
        values.insert((1usize, 0usize), value);
        TwistingFunction {
            base: s1,
            group: k,
            values,
        }
    }

    #[test]
    fn circle_twist_by_generator_is_valid() {
        let rho = circle_rho(2, 1, 6);
        check_twisting_function(&rho).unwrap();
    }

    #[test]
    fn trivial_twist_valid() {
        let s1 = minimal_circle(5).unwrap();
        let g = FiniteGroup::symmetric(3);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 5)).unwrap();
        let rho = TwistingFunction::trivial(&s1, &k);
        check_twisting_function(&rho).unwrap();
    }
}

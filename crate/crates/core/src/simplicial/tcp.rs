//! Twisted cartesian products B ×_ρ K: the simplicial principal K-bundle
//! with underlying graded set B × K, all faces untwisted except the last:
//!
//!   ∂_j(u, x) = (∂_j u, ∂_j x)            0 <= j < p,
//!   ∂_p(u, x) = (∂_p u, ρ_p(u) · ∂_p x),
//!   s_j(u, x) = (s_j u, s_j x).

use super::product::base_filtration;
use super::sgroup::SGroupSSet;
use super::simplex::Simp;
use super::sset::{build_sset, validate_simplicial_set, SSet, SimplicialData};
use super::twisting_function::{check_twisting_function, TwistingFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TwistedCartesianProduct {
    pub total: SSet,
    /// Nondegenerate (base simplex, fiber simplex) pairs per level,
    /// parallel to the generators of `total`.
    pub pairs: Vec<Vec<(Simp, Simp)>>,
    pub twist: TwistingFunction,
}

struct TcpData<'a> {
    rho: &'a TwistingFunction,
    fiber: &'a SSet,
}

impl SimplicialData for TcpData<'_> {
    type Elem = (Simp, Simp);

    fn elements(&self, level: usize) -> Vec<(Simp, Simp)> {
        let xs = self.rho.base.simplices(level);
        let ys = self.fiber.simplices(level);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for a in &xs {
            for b in &ys {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    fn face(&self, level: usize, e: &(Simp, Simp), i: usize) -> (Simp, Simp) {
        let p = level;
        if i < p {
            (self.rho.base.face(&e.0, i), self.fiber.face(&e.1, i))
        } else {
            let bu = self.rho.base.face(&e.0, p);
            let g = &self.rho.group;
            let xv = g.elem_of_simp(&self.fiber.face(&e.1, p));
            let tw = g.group.levels[p - 1].mul(self.rho.value(&e.0), xv);
            (bu, g.simp_of_elem(p - 1, tw))
        }
    }

    fn degeneracy(&self, _level: usize, e: &(Simp, Simp), i: usize) -> (Simp, Simp) {
        (e.0.degeneracy(i), e.1.degeneracy(i))
    }

    fn label(&self, _level: usize, e: &(Simp, Simp)) -> String {
        format!(
            "({};{})",
            self.rho.base.display(&e.0),
            self.fiber.display(&e.1)
        )
    }
}

/// Build and validate B ×_ρ K (rho must already pass
/// `check_twisting_function`; the result is revalidated as a simplicial
/// set, which would catch a rho accepted in error).
pub fn twisted_cartesian_product(rho: &TwistingFunction) -> Result<TwistedCartesianProduct> {
    check_twisting_function(rho)?;
    let fiber = rho.group.sset.clone();
    let bound = rho.base.degree_bound;
    let (total, pairs) = build_sset(
        &TcpData {
            rho,
            fiber: &fiber,
        },
        bound,
    )?;
    let report = validate_simplicial_set(&total);
    if !report.pass() {
        return Err(Error::Internal(format!(
            "twisted cartesian product is not simplicial: {}",
            report.failures[0]
        )));
    }
    Ok(TwistedCartesianProduct {
        total,
        pairs,
        twist: rho.clone(),
    })
}

impl TwistedCartesianProduct {
    /// Serre filtration on the total space (base core degree per pair).
    pub fn serre_filtration(&self) -> Vec<Vec<i64>> {
        base_filtration(&self.pairs)
    }

    /// The right K-action on one level: (u, x)·k = (u, x·k). Returns the
    /// permutation action on generator indices of `total` at `level`.
    pub fn action(&self, level: usize, k_elem: usize) -> Result<Vec<usize>> {
        let g = &self.twist.group;
        let mut out = Vec::with_capacity(self.pairs[level].len());
        for (u, x) in &self.pairs[level] {
            let xe = g.elem_of_simp(x);
            let prod = g.group.levels[level].mul(xe, k_elem);
            let moved = (u.clone(), g.simp_of_elem(level, prod));
            let idx = self
                .pairs[level]
                .iter()
                .position(|p| *p == moved)
                .ok_or_else(|| Error::Internal("K-action left the nondegenerate pairs".into()))?;
            out.push(idx);
        }
        Ok(out)
    }

    /// Verify the action is free and simplicial, and the projection to the
    /// base is simplicial: the bundle structure of Prop.-level statements.
    pub fn verify_principal(&self) -> Result<()> {
        let g = &self.twist.group;
        for level in 0..=self.total.degree_bound {
            let order = g.group.levels[level].order();
            for k in 0..order {
                let perm = self.action(level, k)?;
                // Freeness: only the identity fixes a point.
                if k != g.group.identity_at(level) && perm.iter().enumerate().any(|(i, &j)| i == j)
                {
                    return Err(Error::identity(
                        "free K-action",
                        level as i64,
                        g.group.levels[level].label(k),
                        "non-identity element has a fixed point",
                    ));
                }
            }
        }
        // Simpliciality of the action: ∂_i((u,x)·k) = ∂_i(u,x)·∂_i(k),
        // and the twisted last face commutes with right translation by
        // construction; verify on generators.
        for level in 1..=self.total.degree_bound {
            let order = g.group.levels[level].order();
            for (idx, (u, x)) in self.pairs[level].iter().enumerate() {
                for k in 0..order {
                    let xk = g.group.levels[level].mul(g.elem_of_simp(x), k);
                    let moved = (u.clone(), g.simp_of_elem(level, xk));
                    for i in 0..=level {
                        let data = TcpData {
                            rho: &self.twist,
                            fiber: &g.sset,
                        };
                        let lhs = data.face(level, &moved, i);
                        let rhs = {
                            let (fu, fx) = data.face(level, &(u.clone(), x.clone()), i);
                            let fk = g.group.face(level, i, k);
                            let fxk = g
                                .group
                                .levels[level - 1]
                                .mul(g.elem_of_simp(&fx), fk);
                            (fu, g.simp_of_elem(level - 1, fxk))
                        };
                        if lhs != rhs {
                            return Err(Error::identity(
                                "K-action is simplicial",
                                level as i64,
                                &self.total.generators[level][idx],
                                &format!("face {i} does not commute with the action"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Recover the twisting function of a principal structure on B × K:
/// ρ = pr_K ∘ ∂_last ∘ (Id × {e}). The input is any simplicial set whose
/// generators are (base, fiber) pairs with untwisted non-last faces;
/// rejection names the violated identity.
pub fn extract_twisting_function(
    total: &SSet,
    pairs: &[Vec<(Simp, Simp)>],
    base: &SSet,
    group: &SGroupSSet,
) -> Result<TwistingFunction> {
    // Check untwisted non-last faces and untwisted degeneracies.
    for level in 1..=total.degree_bound {
        for (idx, fs) in total.faces[level].iter().enumerate() {
            let (u, x) = &pairs[level][idx];
            for (i, f) in fs.iter().enumerate().take(level) {
                // face i < level: must be (∂_i u, ∂_i x) up to normal form
                let expect_u = base.face(u, i);
                let expect_x = group.sset.face(x, i);
                let got = resolve_pair(pairs, f);
                if got != (expect_u.clone(), expect_x.clone()) {
                    return Err(Error::identity(
                        "non-last faces untwisted",
                        level as i64,
                        &total.generators[level][idx],
                        &format!("face {i} is not the product face"),
                    ));
                }
            }
        }
    }
    // Extract ρ on nondegenerate base simplices via (Id × e).
    let mut values = std::collections::BTreeMap::new();
    for p in 1..=base.degree_bound {
        for bidx in 0..base.generator_count(p) {
            let u = Simp::generator(p, bidx);
            let e_simp = group.identity_simp(p);
            let pair = (u.clone(), e_simp);
            // Locate (u, e) in the total space (it is nondegenerate: u is).
            let pos = pairs[p]
                .iter()
                .position(|q| *q == pair)
                .ok_or_else(|| {
                    Error::identity(
                        "underlying graded set is B × K",
                        p as i64,
                        base.generator_label(p, bidx),
                        "(b, e) is not a simplex of the total object",
                    )
                })?;
            let last = &total.faces[p][pos][p];
            let (_, fx) = resolve_pair(pairs, last);
            values.insert((p, bidx), group.elem_of_simp(&fx));
        }
    }
    TwistingFunction::new(base.clone(), group.clone(), values)
}

/// Expand a (possibly degenerate) simplex of the total space back into its
/// (base, fiber) pair of simplices.
fn resolve_pair(pairs: &[Vec<(Simp, Simp)>], s: &Simp) -> (Simp, Simp) {
    let (u, x) = pairs[s.gen_degree][s.gen_index].clone();
    (u.apply_word(&s.word), x.apply_word(&s.word))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catnerve::group::FiniteGroup;
    use crate::simplicial::sgroup::SimplicialGroup;
    use crate::simplicial::sset::minimal_circle;
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
    fn trivial_rho_gives_product() {
        let s1 = minimal_circle(4).unwrap();
        let g = FiniteGroup::cyclic(2);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, 4)).unwrap();
        let rho = TwistingFunction::trivial(&s1, &k);
        let tcp = twisted_cartesian_product(&rho).unwrap();
        let (plain, _) = crate::simplicial::product::product_sset(&s1, &k.sset, 4).unwrap();
        assert_eq!(tcp.total.generators, plain.generators);
        assert_eq!(tcp.total.faces, plain.faces);
    }

    #[test]
    fn double_cover_of_circle() {
        let rho = circle_rho(2, 1, 5);
        let tcp = twisted_cartesian_product(&rho).unwrap();
        tcp.verify_principal().unwrap();
        assert_eq!(tcp.total.generator_count(0), 2);
        assert_eq!(tcp.total.generator_count(1), 2);
    }

    #[test]
    fn extraction_roundtrip() {
        for v in 0..3usize {
            let rho = circle_rho(3, v, 5);
            let tcp = twisted_cartesian_product(&rho).unwrap();
            let back = extract_twisting_function(
                &tcp.total,
                &tcp.pairs,
                &rho.base,
                &rho.group,
            )
            .unwrap();
            assert_eq!(back.values, rho.values);
            // And rebuilding reproduces the total object.
            let again = twisted_cartesian_product(&back).unwrap();
            assert_eq!(again.total.faces, tcp.total.faces);
        }
    }
}

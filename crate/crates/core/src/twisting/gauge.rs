//! The gauge action φ*τ = φ∪τ∪φ⁻¹ − (Dφ)∪φ⁻¹ of invertible degree-zero
//! convolution elements on twisting cochains, and the linear decision
//! procedure for gauge equivalence over a prime field.

use num_bigint::BigInt;

use super::cochain::{check_twisting_cochain, TwistingCochain};
use super::convolution::{element_unknowns, solve_linear_element, Convolution};
use super::homotopy::{check_homotopy, TwistingHomotopy};
use crate::chaincore::GradedMap;
use crate::coeffs::RingSpec;
use crate::error::{Error, Result};

/// Act on a twisting cochain by an invertible degree-zero element. The
/// inverse is computed (geometric series or exact solve); the result is
/// validated against the master equation.
pub fn gauge_act(ctx: &Convolution, phi: &GradedMap, t: &TwistingCochain, bound: i64) -> Result<TwistingCochain> {
    let inv = ctx.inverse(phi, bound)?;
    gauge_act_with_inverse(ctx, phi, &inv, t)
}

pub fn gauge_act_with_inverse(
    ctx: &Convolution,
    phi: &GradedMap,
    phi_inv: &GradedMap,
    t: &TwistingCochain,
) -> Result<TwistingCochain> {
    let conj = ctx.cup(phi, &ctx.cup(&t.map, phi_inv)?)?;
    let dphi = ctx.hom_diff(phi)?;
    let correction = ctx.cup(&dphi, phi_inv)?;
    let result = conj.sub(&correction)?;
    check_twisting_cochain(ctx, &result)
}

/// Outcome of the gauge-equivalence decision at a truncation bound: an
/// explicit homotopy, or inequivalence certified up to that degree only.
#[derive(Debug, Clone)]
pub enum GaugeDecision {
    Equivalent(TwistingHomotopy),
    InequivalentUpToDegree(i64),
}

/// Decide whether some h with hη = η satisfies τ₂∪h = h∪τ₁ − Dh, by exact
/// linear algebra over Z/p. In the coaugmented case any such h is
/// invertible (geometric series), so this decides gauge equivalence up to
/// the truncation degree.
pub fn decide_gauge_equivalence(
    ctx: &Convolution,
    t1: &TwistingCochain,
    t2: &TwistingCochain,
    bound: i64,
) -> Result<GaugeDecision> {
    match ctx.ring() {
        RingSpec::ModM(p) if RingSpec::ModM(p).is_field() => {}
        other => {
            return Err(Error::Unsupported(format!(
                "decide_gauge_equivalence needs a prime field, got {other}"
            )))
        }
    }
    let eta = ctx.coalgebra.coaugmentation.as_ref().ok_or_else(|| {
        Error::Unsupported("decide_gauge_equivalence needs a coaugmented coalgebra".into())
    })?;

    let unknowns = element_unknowns(ctx);
    // Pins: h ∘ η = η_A. η picks out a degree-0 vector in C; for basis
    // coaugmentations (single vertex) this pins one column of h.
    let eta_vec = eta.apply(0, &vec![(0, BigInt::from(1))])?;
    let unit_vec = ctx.algebra.unit_vector()?;
    let mut pins = Vec::new();
    if eta_vec.len() != 1 {
        return Err(Error::Unsupported(
            "decide_gauge_equivalence expects a basis-vertex coaugmentation".into(),
        ));
    }
    let (vtx, ref c) = eta_vec[0];
    if !(c == &BigInt::from(1)) {
        return Err(Error::Unsupported("coaugmentation must be a basis vector".into()));
    }
    for (k, &(deg, i, j)) in unknowns.iter().enumerate() {
        if deg == 0 && j == vtx {
            let val = unit_vec
                .iter()
                .find(|(ai, _)| *ai == i)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| BigInt::from(0));
            pins.push((k, val));
        }
    }

    // Linear operator in h: τ₂∪h − h∪τ₁ + Dh (shift −1 valued).
    let lin = |h: &GradedMap| -> Result<GradedMap> {
        ctx.cup(&t2.map, h)?
            .sub(&ctx.cup(h, &t1.map)?)?
            .add(&ctx.hom_diff(h)?)
    };
    let zero_rhs = GradedMap::zero(
        &ctx.coalgebra.complex.module,
        &ctx.algebra.complex.module,
        -1,
    );
    match solve_linear_element(ctx, &unknowns, lin, &zero_rhs, &pins)? {
        None => Ok(GaugeDecision::InequivalentUpToDegree(bound)),
        Some(h) => {
            let (homotopy, _) = check_homotopy(ctx, &h, t1, t2)?;
            Ok(GaugeDecision::Equivalent(homotopy))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::sset::minimal_circle;
    use crate::simplicial::{normalized_chains_algebra, normalized_chains_coalgebra};
    use crate::simplicial::sgroup::{SGroupSSet, SimplicialGroup};
    use crate::catnerve::group::FiniteGroup;
    use crate::coeffs::ExactMatrix;
    use crate::twisting::cochain::zero_cochain;

    fn circle_context(p: u64, group_order: usize, bound: usize) -> Convolution {
        let s1 = minimal_circle(bound).unwrap();
        let (_, coalg) = normalized_chains_coalgebra(&s1, RingSpec::ModM(p)).unwrap();
        let g = FiniteGroup::cyclic(group_order);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, bound)).unwrap();
        let (_, alg) = normalized_chains_algebra(&k, RingSpec::ModM(p)).unwrap();
        Convolution::new(coalg, alg).unwrap()
    }

    fn interval_context(p: u64, group_order: usize, bound: usize) -> Convolution {
        let d1 = crate::simplicial::sset::standard_simplex(1, bound).unwrap();
        let (_, coalg) = normalized_chains_coalgebra(&d1, RingSpec::ModM(p)).unwrap();
        let g = FiniteGroup::cyclic(group_order);
        let k = SGroupSSet::new(SimplicialGroup::trivial(&g, bound)).unwrap();
        let (_, alg) = normalized_chains_algebra(&k, RingSpec::ModM(p)).unwrap();
        Convolution::new(coalg, alg).unwrap()
    }

    /// Degree-0 element with the given group-ring values at the two
    /// vertices of the interval (edge component is forced to zero).
    fn interval_phi(ctx: &Convolution, at_v: &[i64], at_w: &[i64]) -> GradedMap {
        let n = ctx.algebra.complex.module.dim(0);
        let mut block = ExactMatrix::zero(n, 2, ctx.ring());
        for (i, &c) in at_v.iter().enumerate().take(n) {
            block.set(i, 0, BigInt::from(c));
        }
        for (i, &c) in at_w.iter().enumerate().take(n) {
            block.set(i, 1, BigInt::from(c));
        }
        let mut phi = GradedMap::zero(
            &ctx.coalgebra.complex.module,
            &ctx.algebra.complex.module,
            0,
        );
        phi.set_block(0, block).unwrap();
        phi
    }

    fn interval_cochain(ctx: &Convolution, edge: &[i64]) -> TwistingCochain {
        let n = ctx.algebra.complex.module.dim(0);
        let mut block = ExactMatrix::zero(n, 1, ctx.ring());
        for (i, &c) in edge.iter().enumerate().take(n) {
            block.set(i, 0, BigInt::from(c));
        }
        let mut map = GradedMap::zero(
            &ctx.coalgebra.complex.module,
            &ctx.algebra.complex.module,
            -1,
        );
        map.set_block(1, block).unwrap();
        check_twisting_cochain(ctx, &map).unwrap()
    }

    /// Any degree −1 map is a twisting cochain on the circle (no
    /// nondegenerate 2-simplices), which makes it a convenient test bed.
    fn cochain_on_circle(ctx: &Convolution, coeffs: &[i64]) -> TwistingCochain {
        let mut map = GradedMap::zero(
            &ctx.coalgebra.complex.module,
            &ctx.algebra.complex.module,
            -1,
        );
        let n = ctx.algebra.complex.module.dim(0);
        let mut block = ExactMatrix::zero(n, 1, ctx.ring());
        for (i, &v) in coeffs.iter().enumerate().take(n) {
            block.set(i, 0, BigInt::from(v));
        }
        map.set_block(1, block).unwrap();
        check_twisting_cochain(ctx, &map).unwrap()
    }

    #[test]
    fn unit_acts_trivially() {
        let ctx = circle_context(5, 5, 4);
        let t = cochain_on_circle(&ctx, &[1, 2, 0, 3, 4]);
        let unit = ctx.unit().unwrap();
        let acted = gauge_act(&ctx, &unit, &t, 8).unwrap();
        assert_eq!(acted.map, t.map);
    }

    #[test]
    fn equal_cochains_are_equivalent() {
        let ctx = circle_context(5, 5, 4);
        let t = cochain_on_circle(&ctx, &[0, 1, 0, 0, 2]);
        match decide_gauge_equivalence(&ctx, &t, &t, 4).unwrap() {
            GaugeDecision::Equivalent(h) => {
                assert!(h.coaugmented);
            }
            GaugeDecision::InequivalentUpToDegree(_) => panic!("t ~ t must hold"),
        }
    }

    #[test]
    fn gauge_action_is_compatible_with_composition() {
        // (φ₂∪φ₁)*t = φ₂*(φ₁*t) with solver-path inverses (the interval
        // coalgebra is not cocomplete, so the geometric series does not
        // apply to these elements).
        let ctx = interval_context(5, 5, 4);
        let t = interval_cochain(&ctx, &[0, 1, 2, 0, 0]);
        let phi1 = interval_phi(&ctx, &[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0]);
        let phi2 = interval_phi(&ctx, &[2, 0, 0, 0, 0], &[3, 0, 0, 0, 0]);
        let a = gauge_act(&ctx, &phi1, &t, 8).unwrap();
        let b = gauge_act(&ctx, &phi2, &a, 8).unwrap();
        let composed = ctx.cup(&phi2, &phi1).unwrap();
        let c = gauge_act(&ctx, &composed, &t, 8).unwrap();
        assert_eq!(b.map, c.map);
    }

    #[test]
    fn inequivalent_pair_reported() {
        // Group ring F7[Z/3]; τ₁(σ) = 1 − g and τ₂(σ) = 1 − g² are not
        // gauge equivalent: h is pinned by hη = η and A is concentrated
        // in degree 0, so (htw) forces τ₁ = τ₂.
        let ctx = circle_context(7, 3, 4);
        let t1 = cochain_on_circle(&ctx, &[1, -1, 0]);
        let t2 = cochain_on_circle(&ctx, &[1, 0, -1]);
        match decide_gauge_equivalence(&ctx, &t1, &t2, 4).unwrap() {
            GaugeDecision::Equivalent(_) => panic!("must be inequivalent"),
            GaugeDecision::InequivalentUpToDegree(d) => assert_eq!(d, 4),
        }
    }

    #[test]
    fn zero_cochain_acts_to_maurer_cartan() {
        // φ*0 = −(Dφ)∪φ⁻¹ is nonzero when Dφ ≠ 0 and still satisfies the
        // master equation (validated inside gauge_act).
        let ctx = interval_context(5, 5, 4);
        let t0 = zero_cochain(&ctx).unwrap();
        let phi = interval_phi(&ctx, &[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]);
        let acted = gauge_act(&ctx, &phi, &t0, 8).unwrap();
        assert!(!acted.map.is_zero());
        let inv = ctx.inverse(&phi, 8).unwrap();
        let expect = ctx
            .cup(&ctx.hom_diff(&phi).unwrap(), &inv)
            .unwrap()
            .scale(&BigInt::from(-1));
        assert_eq!(acted.map, expect);
    }
}

//! Homotopies of twisting cochains (τ₂∪h = h∪τ₁ − Dh), the bundle
//! morphisms h∩ they induce, and general (φ,χ)-morphisms of twisted
//! tensor products.

use super::cochain::TwistingCochain;
use super::convolution::Convolution;
use super::structures::{DgAlgebra, DgCoalgebra};
use crate::chaincore::tensor::{splice_map, TargetShape, TensorSpace};
use crate::chaincore::GradedMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TwistingHomotopy {
    pub map: GradedMap,
    pub from: TwistingCochain,
    pub to: TwistingCochain,
    pub augmented: bool,
    pub coaugmented: bool,
}

/// Validate h: τ₁ ≃ τ₂ and return the homotopy together with the bundle
/// morphism h∩: C⊗_{τ₁}A → C⊗_{τ₂}A, verified to be a chain map.
pub fn check_homotopy(
    ctx: &Convolution,
    h: &GradedMap,
    t1: &TwistingCochain,
    t2: &TwistingCochain,
) -> Result<(TwistingHomotopy, GradedMap)> {
    if h.shift != 0 {
        return Err(Error::Shape("homotopy must have shift 0".into()));
    }
    // τ₂∪h − h∪τ₁ + Dh = 0
    let lhs = ctx
        .cup(&t2.map, h)?
        .sub(&ctx.cup(h, &t1.map)?)?
        .add(&ctx.hom_diff(h)?)?;
    if let Some((deg, w)) = lhs.first_nonzero_witness() {
        return Err(Error::identity(
            "τ₂∪h = h∪τ₁ − Dh",
            deg,
            &w,
            "homotopy equation fails",
        ));
    }
    let augmented = match &ctx.algebra.augmentation {
        Some(eps) => eps.compose(h)? == ctx.coalgebra.counit,
        None => false,
    };
    let coaugmented = match &ctx.coalgebra.coaugmentation {
        Some(eta) => &h.compose(eta)? == &ctx.algebra.unit,
        None => false,
    };
    let cap = ctx.cap(h)?;
    // Chain-map square: (d⊗ + τ₂∩) h∩ = h∩ (d⊗ + τ₁∩).
    let d1 = ctx.twisted_complex(&t1.map)?.differential;
    let d2 = ctx.twisted_complex(&t2.map)?.differential;
    let square = d2.compose(&cap)?.sub(&cap.compose(&d1)?)?;
    if let Some((deg, w)) = square.first_nonzero_witness() {
        return Err(Error::identity(
            "h∩ chain map",
            deg,
            &w,
            "bundle morphism does not commute with the twisted differentials",
        ));
    }
    Ok((
        TwistingHomotopy {
            map: h.clone(),
            from: t1.clone(),
            to: t2.clone(),
            augmented,
            coaugmented,
        },
        cap,
    ))
}

/// Data for a (φ,χ)-morphism of bundles: coalgebra morphism χ: C₁ → C₂,
/// algebra morphism φ: A₁ → A₂, and a homotopy h: φτ₁ ≃ τ₂χ in the mixed
/// convolution pair (C₁, A₂).
pub struct BundleMorphismInput<'a> {
    pub source: &'a Convolution,
    pub target: &'a Convolution,
    pub mixed: &'a Convolution,
    pub chi: &'a GradedMap,
    pub phi: &'a GradedMap,
    pub h: &'a GradedMap,
    pub tau1: &'a TwistingCochain,
    pub tau2: &'a TwistingCochain,
}

/// [χ,h,φ] = (χ⊗Id) ∘ (h∩) ∘ (Id⊗φ): C₁⊗_{τ₁}A₁ → C₂⊗_{τ₂}A₂, verified
/// to be a chain map, A₁-linear via φ and C₂-colinear via χ.
pub fn compose_bundle_morphism(input: &BundleMorphismInput<'_>) -> Result<GradedMap> {
    let BundleMorphismInput {
        source,
        target,
        mixed,
        chi,
        phi,
        h,
        tau1,
        tau2,
    } = input;
    verify_coalgebra_morphism(&source.coalgebra, &target.coalgebra, chi)?;
    verify_algebra_morphism(&source.algebra, &target.algebra, phi)?;

    // Endpoints: h must run φτ₁ ≃ τ₂χ over (C₁, A₂).
    let phi_tau1 = phi.compose(&tau1.map)?;
    let tau2_chi = tau2.map.compose(chi)?;
    let t1m = super::cochain::check_twisting_cochain(mixed, &phi_tau1)?;
    let t2m = super::cochain::check_twisting_cochain(mixed, &tau2_chi)?;
    let (_, hcap) = check_homotopy(mixed, h, &t1m, &t2m)?;

    // (Id_{C1} ⊗ φ): C₁⊗A₁ → C₁⊗A₂
    let (mid, id_phi) = splice_map(&source.pair.space, 1, 1, phi, None, TargetShape::Single)?;
    if mid.module != mixed.pair.space.module {
        return Err(Error::Internal("Id⊗φ should land in the mixed pair".into()));
    }
    // (χ ⊗ Id_{A2}): C₁⊗A₂ → C₂⊗A₂
    let (out, chi_id) = splice_map(&mixed.pair.space, 0, 1, chi, None, TargetShape::Single)?;
    if out.module != target.pair.space.module {
        return Err(Error::Internal("χ⊗Id should land in the target pair".into()));
    }
    let theta = chi_id.compose(&hcap)?.compose(&id_phi)?;

    // Chain map between the twisted complexes.
    let d1 = source.twisted_complex(&tau1.map)?.differential;
    let d2 = target.twisted_complex(&tau2.map)?.differential;
    let square = d2.compose(&theta)?.sub(&theta.compose(&d1)?)?;
    if let Some((deg, w)) = square.first_nonzero_witness() {
        return Err(Error::identity(
            "[χ,h,φ] chain map",
            deg,
            &w,
            "composite does not commute with the twisted differentials",
        ));
    }

    // A₁-linearity via φ: Θ ∘ act₁ = act₂ ∘ (Θ ⊗ φ) on C₁⊗A₁⊗A₁.
    let caa1 = TensorSpace::new(vec![
        source.coalgebra.complex.module.clone(),
        source.algebra.complex.module.clone(),
        source.algebra.complex.module.clone(),
    ])?;
    let (_, act1) = splice_map(
        &caa1,
        1,
        2,
        &source.algebra.multiplication,
        Some(&source.algebra.square),
        TargetShape::Single,
    )?;
    let (after_phi, phi_last) = splice_map(&caa1, 2, 1, phi, None, TargetShape::Single)?;
    let (_, theta_front) = splice_map(
        &after_phi,
        0,
        2,
        &theta,
        Some(&source.pair.space),
        TargetShape::Tensor(&target.pair.space),
    )?;
    let caa2 = TensorSpace::new(vec![
        target.coalgebra.complex.module.clone(),
        target.algebra.complex.module.clone(),
        target.algebra.complex.module.clone(),
    ])?;
    let (_, act2) = splice_map(
        &caa2,
        1,
        2,
        &target.algebra.multiplication,
        Some(&target.algebra.square),
        TargetShape::Single,
    )?;
    let lhs = theta.compose(&act1)?;
    let rhs = act2.compose(&theta_front.compose(&phi_last)?)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity(
            "A₁-linearity via φ",
            deg,
            &w,
            "composite is not module-linear along φ",
        ));
    }

    // C₂-colinearity via χ: λ₂ ∘ Θ = (χ ⊗ Θ) ∘ λ₁.
    let (cca1, lambda1) = splice_map(
        &source.pair.space,
        0,
        1,
        &source.coalgebra.diagonal,
        None,
        TargetShape::Tensor(&source.coalgebra.square),
    )?;
    let (_, lambda2) = splice_map(
        &target.pair.space,
        0,
        1,
        &target.coalgebra.diagonal,
        None,
        TargetShape::Tensor(&target.coalgebra.square),
    )?;
    let (after_chi, chi_first) = splice_map(&cca1, 0, 1, chi, None, TargetShape::Single)?;
    let (_, theta_rest) = splice_map(
        &after_chi,
        1,
        2,
        &theta,
        Some(&source.pair.space),
        TargetShape::Tensor(&target.pair.space),
    )?;
    let lhs = lambda2.compose(&theta)?;
    let rhs = theta_rest.compose(&chi_first)?.compose(&lambda1)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity(
            "C₂-colinearity via χ",
            deg,
            &w,
            "composite is not comodule-colinear along χ",
        ));
    }

    Ok(theta)
}

/// χ must be a chain map commuting with diagonals, counits, and (when
/// present) coaugmentations.
pub fn verify_coalgebra_morphism(
    src: &DgCoalgebra,
    tgt: &DgCoalgebra,
    chi: &GradedMap,
) -> Result<()> {
    if chi.shift != 0 || chi.source != src.complex.module || chi.target != tgt.complex.module {
        return Err(Error::Shape("χ must be a shift-0 map C₁ → C₂".into()));
    }
    let d = tgt
        .complex
        .differential
        .compose(chi)?
        .sub(&chi.compose(&src.complex.differential)?)?;
    if let Some((deg, w)) = d.first_nonzero_witness() {
        return Err(Error::identity("Dχ = 0", deg, &w, "χ not a chain map"));
    }
    let sq_src = &src.square;
    let sq_tgt = &tgt.square;
    let chichi = crate::chaincore::tensor::tensor_of_maps(sq_src, sq_tgt, &[chi, chi])?;
    let lhs = tgt.diagonal.compose(chi)?;
    let rhs = chichi.compose(&src.diagonal)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity("Δχ = (χ⊗χ)Δ", deg, &w, "χ not comultiplicative"));
    }
    let eps = tgt.counit.compose(chi)?;
    if let Some((deg, w)) = eps.sub(&src.counit)?.first_nonzero_witness() {
        return Err(Error::identity("εχ = ε", deg, &w, "χ not counital"));
    }
    Ok(())
}

pub fn verify_algebra_morphism(src: &DgAlgebra, tgt: &DgAlgebra, phi: &GradedMap) -> Result<()> {
    if phi.shift != 0 || phi.source != src.complex.module || phi.target != tgt.complex.module {
        return Err(Error::Shape("φ must be a shift-0 map A₁ → A₂".into()));
    }
    let d = tgt
        .complex
        .differential
        .compose(phi)?
        .sub(&phi.compose(&src.complex.differential)?)?;
    if let Some((deg, w)) = d.first_nonzero_witness() {
        return Err(Error::identity("Dφ = 0", deg, &w, "φ not a chain map"));
    }
    let phiphi = crate::chaincore::tensor::tensor_of_maps(&src.square, &tgt.square, &[phi, phi])?;
    let lhs = phi.compose(&src.multiplication)?;
    let rhs = tgt.multiplication.compose(&phiphi)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity("φμ = μ(φ⊗φ)", deg, &w, "φ not multiplicative"));
    }
    let unit = phi.compose(&src.unit)?;
    if let Some((deg, w)) = unit.sub(&tgt.unit)?.first_nonzero_witness() {
        return Err(Error::identity("φη = η", deg, &w, "φ not unital"));
    }
    Ok(())
}

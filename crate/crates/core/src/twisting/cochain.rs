//! Twisting cochains (degree −1 solutions of Dτ + τ∪τ = 0), the twisted
//! tensor product C ⊗_τ A they define, and the inverse extraction of τ
//! from a bundle differential.

use num_bigint::BigInt;

use super::convolution::Convolution;
use crate::chaincore::tensor::{splice_map, TargetShape};
use crate::chaincore::{ChainComplex, GradedMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TwistingCochain {
    pub map: GradedMap,
    pub augmented: bool,
    pub coaugmented: bool,
}

/// Validate the master equation Dτ + τ∪τ = 0 degreewise and compute the
/// augmentation flags (ετ = 0, τη = 0 where the structure maps exist).
pub fn check_twisting_cochain(ctx: &Convolution, tau: &GradedMap) -> Result<TwistingCochain> {
    if tau.shift != -1 {
        return Err(Error::Shape(format!(
            "twisting cochain must have shift -1, got {}",
            tau.shift
        )));
    }
    let master = ctx.hom_diff(tau)?.add(&ctx.cup(tau, tau)?)?;
    if let Some((deg, w)) = master.first_nonzero_witness() {
        return Err(Error::identity(
            "Dτ + τ∪τ = 0",
            deg,
            &w,
            "master equation fails",
        ));
    }
    let augmented = match &ctx.algebra.augmentation {
        Some(eps) => eps.compose(tau)?.is_zero(),
        None => false,
    };
    let coaugmented = match &ctx.coalgebra.coaugmentation {
        Some(eta) => tau.compose(eta)?.is_zero(),
        None => false,
    };
    Ok(TwistingCochain {
        map: tau.clone(),
        augmented,
        coaugmented,
    })
}

/// The twisted tensor product: C ⊗ A with differential d⊗ + τ∩.
pub fn twisted_tensor_product(ctx: &Convolution, tau: &TwistingCochain) -> Result<ChainComplex> {
    ctx.twisted_complex(&tau.map)
}

/// Extract τ_D = (ε⊗Id) ∘ D ∘ (Id⊗η) from a candidate bundle differential
/// on C ⊗ A, after verifying right-A-linearity, left-C-colinearity and
/// square-zero; the reconstruction d⊗ + τ_D∩ = D is checked exactly.
pub fn extract_twisting_cochain(ctx: &Convolution, d: &GradedMap) -> Result<TwistingCochain> {
    let space = &ctx.pair.space;
    if d.source != space.module || d.target != space.module || d.shift != -1 {
        return Err(Error::Shape(
            "bundle differential must be a shift −1 operator on C⊗A".into(),
        ));
    }
    let dd = d.compose(d)?;
    if let Some((deg, w)) = dd.first_nonzero_witness() {
        return Err(Error::identity("D² = 0", deg, &w, "not a differential"));
    }

    // Right A-linearity: D ∘ act = act ∘ (D⊗Id + Id⊗d_A) on C⊗A⊗A.
    let caa = crate::chaincore::tensor::TensorSpace::new(vec![
        ctx.coalgebra.complex.module.clone(),
        ctx.algebra.complex.module.clone(),
        ctx.algebra.complex.module.clone(),
    ])?;
    let (_, act) = splice_map(
        &caa,
        1,
        2,
        &ctx.algebra.multiplication,
        Some(&ctx.algebra.square),
        TargetShape::Single,
    )?;
    let (_, d_on_pair) = splice_map(&caa, 0, 2, d, Some(space), TargetShape::Tensor(space))?;
    let (_, d_on_fiber) = splice_map(&caa, 2, 1, &ctx.algebra.complex.differential, None, TargetShape::Single)?;
    let lhs = d.compose(&act)?;
    let rhs = act.compose(&d_on_pair.add(&d_on_fiber)?)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity(
            "right A-linearity of D",
            deg,
            &w,
            "D is not a module differential for the extended A-action",
        ));
    }

    // Left C-colinearity: λ ∘ D = (d_C⊗Id + Id⊗D) ∘ λ with λ = Δ⊗Id.
    let (cca, lambda) = splice_map(
        space,
        0,
        1,
        &ctx.coalgebra.diagonal,
        None,
        TargetShape::Tensor(&ctx.coalgebra.square),
    )?;
    let (_, dc_first) = splice_map(&cca, 0, 1, &ctx.coalgebra.complex.differential, None, TargetShape::Single)?;
    let (_, d_rest) = splice_map(&cca, 1, 2, d, Some(space), TargetShape::Tensor(space))?;
    let lhs = lambda.compose(d)?;
    let rhs = dc_first.add(&d_rest)?.compose(&lambda)?;
    if let Some((deg, w)) = lhs.sub(&rhs)?.first_nonzero_witness() {
        return Err(Error::identity(
            "left C-colinearity of D",
            deg,
            &w,
            "D is not a comodule differential for the extended C-coaction",
        ));
    }

    let tau = ctx
        .project_fiber()?
        .compose(d)?
        .compose(&ctx.include_fiber()?)?;
    let cochain = check_twisting_cochain(ctx, &tau)?;
    let rebuilt = ctx.pair.complex.differential.add(&ctx.cap(&tau)?)?;
    if let Some((deg, w)) = rebuilt.sub(d)?.first_nonzero_witness() {
        return Err(Error::identity(
            "D = d⊗ + τ_D∩",
            deg,
            &w,
            "extraction does not reproduce the differential",
        ));
    }
    Ok(cochain)
}

/// Zero twisting cochain (the untwisted tensor product).
pub fn zero_cochain(ctx: &Convolution) -> Result<TwistingCochain> {
    let z = GradedMap::zero(
        &ctx.coalgebra.complex.module,
        &ctx.algebra.complex.module,
        -1,
    );
    check_twisting_cochain(ctx, &z)
}

/// Convenience: τ as a map plus flags asserted by the caller, revalidated.
pub fn cochain_from_map(ctx: &Convolution, map: GradedMap) -> Result<TwistingCochain> {
    check_twisting_cochain(ctx, &map)
}

/// First nonzero value of τ on a degree-1 basis element, for reports.
pub fn leading_values(ctx: &Convolution, tau: &TwistingCochain) -> Vec<(String, Vec<(String, BigInt)>)> {
    let mut out = Vec::new();
    let cm = &ctx.coalgebra.complex.module;
    let am = &ctx.algebra.complex.module;
    for deg in cm.degrees() {
        if deg < 1 {
            continue;
        }
        for j in 0..cm.dim(deg) {
            let img = tau
                .map
                .apply(deg, &vec![(j, BigInt::from(1))])
                .unwrap_or_default();
            if !img.is_empty() {
                let terms = img
                    .into_iter()
                    .map(|(i, v)| (am.label(deg - 1, i).to_string(), v))
                    .collect();
                out.push((cm.label(deg, j).to_string(), terms));
            }
        }
    }
    out
}

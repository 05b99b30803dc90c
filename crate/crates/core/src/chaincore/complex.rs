//! Chain complexes: a graded module with a square-zero degree -1
//! differential, optionally filtered by an integer per basis element.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graded::{GradedMap, GradedModule};
use crate::error::{Error, Result};

/// Filtration degree per basis element, aligned with the basis order.
pub type Filtration = BTreeMap<i64, Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub module: GradedModule,
    pub differential: GradedMap,
    pub filtration: Option<Filtration>,
}

impl ChainComplex {
    /// Construct and verify d∘d = 0 in every representable degree, plus
    /// filtration compatibility when a filtration is supplied.
    pub fn new(
        module: GradedModule,
        differential: GradedMap,
        filtration: Option<Filtration>,
    ) -> Result<Self> {
        if differential.shift != -1 {
            return Err(Error::Shape(format!(
                "differential must have shift -1, got {}",
                differential.shift
            )));
        }
        if differential.source != module || differential.target != module {
            return Err(Error::Shape(
                "differential source/target must be the underlying module".into(),
            ));
        }
        let complex = ChainComplex {
            module,
            differential,
            filtration,
        };
        complex.check_square_zero()?;
        if complex.filtration.is_some() {
            complex.check_filtration()?;
        }
        Ok(complex)
    }

    fn check_square_zero(&self) -> Result<()> {
        let dd = self.differential.compose(&self.differential)?;
        if let Some((deg, label)) = dd.first_nonzero_witness() {
            return Err(Error::identity(
                "d∘d = 0",
                deg,
                &label,
                "differential does not square to zero",
            ));
        }
        Ok(())
    }

    /// The differential must preserve or lower filtration.
    fn check_filtration(&self) -> Result<()> {
        let filt = self.filtration.as_ref().unwrap();
        for (&deg, block) in &self.differential.blocks {
            for (r, c, _) in block.iter() {
                let fs = self.filtration_of(deg, c)?;
                let ft = self.filtration_of(deg - 1, r)?;
                if ft > fs {
                    return Err(Error::identity(
                        "differential preserves filtration",
                        deg,
                        self.module.label(deg, c),
                        &format!(
                            "image term {} has filtration {ft} > {fs}",
                            self.module.label(deg - 1, r)
                        ),
                    ));
                }
            }
        }
        let _ = filt;
        Ok(())
    }

    pub fn filtration_of(&self, degree: i64, idx: usize) -> Result<i64> {
        let filt = self
            .filtration
            .as_ref()
            .ok_or_else(|| Error::Invalid("complex carries no filtration".into()))?;
        filt.get(&degree)
            .and_then(|v| v.get(idx))
            .copied()
            .ok_or_else(|| {
                Error::Internal(format!(
                    "missing filtration entry for degree {degree} index {idx}"
                ))
            })
    }

    pub fn ring(&self) -> crate::coeffs::RingSpec {
        self.module.ring
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.module.dim(degree)
    }

    /// Homology in one degree (needs degree+1 representable).
    pub fn homology(&self, degree: i64) -> Result<crate::coeffs::HomologyGroup> {
        if !self.module.representable(degree + 1) {
            return Err(Error::Truncation {
                needed: degree + 1,
                bound: self.module.degree_bound.unwrap_or(i64::MAX),
                context: format!("homology in degree {degree} needs the incoming differential"),
            });
        }
        let d_out = self.differential.block(degree);
        let d_in = self.differential.block(degree + 1);
        crate::coeffs::homology_of_pair(&d_out, &d_in)
    }
}

/// Hom differential: D(f) = d_target ∘ f − (−1)^{|f|} f ∘ d_source.
///
/// `f` must run between the underlying modules of `source` and `target`.
pub fn hom_differential(f: &GradedMap, source: &ChainComplex, target: &ChainComplex) -> Result<GradedMap> {
    if f.source != source.module || f.target != target.module {
        return Err(Error::Shape(
            "hom_differential: map does not run between the given complexes".into(),
        ));
    }
    let df = target.differential.compose(f)?;
    let fd = f.compose(&source.differential)?;
    if f.shift % 2 == 0 {
        df.sub(&fd)
    } else {
        df.add(&fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{ExactMatrix, RingSpec};
    use num_bigint::BigInt;

    fn two_term(ring: RingSpec, d_entry: i64) -> ChainComplex {
        let mut basis = BTreeMap::new();
        basis.insert(0, vec!["a".to_string()]);
        basis.insert(1, vec!["b".to_string()]);
        let module = GradedModule::new(ring, basis, None).unwrap();
        let mut d = GradedMap::zero(&module, &module, -1);
        d.set_block(1, ExactMatrix::from_dense(ring, &[vec![d_entry]]))
            .unwrap();
        ChainComplex::new(module, d, None).unwrap()
    }

    #[test]
    fn square_zero_enforced() {
        // A three-term complex with d1 d2 != 0 must be rejected.
        let mut basis = BTreeMap::new();
        for deg in 0..3 {
            basis.insert(deg, vec![format!("e{deg}")]);
        }
        let module = GradedModule::new(RingSpec::Integers, basis, None).unwrap();
        let mut d = GradedMap::zero(&module, &module, -1);
        for deg in 1..3 {
            d.set_block(deg, ExactMatrix::from_dense(RingSpec::Integers, &[vec![1]]))
                .unwrap();
        }
        assert!(ChainComplex::new(module, d, None).is_err());
    }

    #[test]
    fn hom_differential_of_identity_and_d_vanish() {
        let c = two_term(RingSpec::Integers, 2);
        let id = GradedMap::identity(&c.module);
        assert!(hom_differential(&id, &c, &c).unwrap().is_zero());
        let dd = hom_differential(&c.differential, &c, &c).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn hom_differential_matches_dense_oracle() {
        // Random-ish degree 0 map on a 3-degree complex; compare against
        // d·f − f·d computed by independent dense multiplication.
        let mut basis = BTreeMap::new();
        basis.insert(0, vec!["x0".into(), "y0".into()]);
        basis.insert(1, vec!["x1".into(), "y1".into()]);
        basis.insert(2, vec!["x2".into()]);
        let module = GradedModule::new(RingSpec::Integers, basis, None).unwrap();
        let mut d = GradedMap::zero(&module, &module, -1);
        d.set_block(
            1,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![1, 3], vec![0, 0]]),
        )
        .unwrap();
        d.set_block(
            2,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![-3], vec![1]]),
        )
        .unwrap();
        let c = ChainComplex::new(module.clone(), d, None).unwrap();

        let mut f = GradedMap::zero(&module, &module, 0);
        f.set_block(
            0,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![1, 2], vec![3, 4]]),
        )
        .unwrap();
        f.set_block(
            1,
            ExactMatrix::from_dense(RingSpec::Integers, &[vec![5, 6], vec![7, 8]]),
        )
        .unwrap();
        f.set_block(2, ExactMatrix::from_dense(RingSpec::Integers, &[vec![9]]))
            .unwrap();

        let df = hom_differential(&f, &c, &c).unwrap();

        // Dense oracle, degree by degree: (Df)_n = d_{n} ... shapes per block.
        for deg in 1..=2 {
            let lhs = df.block(deg).to_dense();
            let a = c.differential.block(deg).to_dense();
            let f_here = f.block(deg).to_dense();
            let f_lower = f.block(deg - 1).to_dense();
            // d·f
            let d_low = a.clone();
            let rows = d_low.len();
            let mid = f_here.len();
            let cols = f_here[0].len();
            let mut dfo = vec![vec![BigInt::from(0); cols]; rows];
            for i in 0..rows {
                for j in 0..cols {
                    let mut s = BigInt::from(0);
                    for k in 0..mid {
                        s += &d_low[i][k] * &f_here[k][j];
                    }
                    dfo[i][j] = s;
                }
            }
            // f·d
            let rows2 = f_lower.len();
            let mid2 = f_lower[0].len();
            let mut fdo = vec![vec![BigInt::from(0); cols]; rows2];
            for i in 0..rows2 {
                for j in 0..cols {
                    let mut s = BigInt::from(0);
                    for k in 0..mid2 {
                        s += &f_lower[i][k] * &a[k][j];
                    }
                    fdo[i][j] = s;
                }
            }
            for i in 0..rows {
                for j in 0..cols {
                    let expect = &dfo[i][j] - &fdo[i][j];
                    assert_eq!(lhs[i][j], expect, "mismatch at degree {deg} ({i},{j})");
                }
            }
        }
    }
}

//! Graded modules with explicit bases and homogeneous maps between them.
//!
//! A [`GradedModule`] stores an ordered basis per degree; degrees outside
//! the stored range are zero, except that a module with `degree_bound = N`
//! is only *represented* up to N: asking a map to produce data in degree
//! N+1 is a truncation error, never a silent zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeffs::{ExactMatrix, RingSpec};
use crate::error::{Error, Result};

/// Sparse vector in one degree: (basis index, coefficient) pairs.
pub type SparseVec = Vec<(usize, BigInt)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModule {
    pub ring: RingSpec,
    /// degree -> ordered basis labels (unique within each degree).
    pub basis: BTreeMap<i64, Vec<String>>,
    /// Truncation degree N: contents above N are unknown, not zero.
    pub degree_bound: Option<i64>,
}

impl GradedModule {
    pub fn new(ring: RingSpec, basis: BTreeMap<i64, Vec<String>>, degree_bound: Option<i64>) -> Result<Self> {
        for (deg, labels) in &basis {
            let mut seen = std::collections::BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(Error::Invalid(format!(
                        "duplicate basis label `{l}` in degree {deg}"
                    )));
                }
            }
            if let Some(b) = degree_bound {
                if *deg > b {
                    return Err(Error::Invalid(format!(
                        "basis in degree {deg} above bound {b}"
                    )));
                }
            }
        }
        Ok(GradedModule {
            ring,
            basis,
            degree_bound,
        })
    }

    /// Ground ring as a module: one generator `1` in degree 0.
    pub fn ground(ring: RingSpec) -> Self {
        let mut basis = BTreeMap::new();
        basis.insert(0, vec!["1".to_string()]);
        GradedModule {
            ring,
            basis,
            degree_bound: None,
        }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis.get(&degree).map_or(0, |b| b.len())
    }

    pub fn label(&self, degree: i64, idx: usize) -> &str {
        &self.basis[&degree][idx]
    }

    pub fn index_of(&self, degree: i64, label: &str) -> Option<usize> {
        self.basis.get(&degree)?.iter().position(|l| l == label)
    }

    pub fn representable(&self, degree: i64) -> bool {
        self.degree_bound.map_or(true, |b| degree <= b)
    }

    /// Degrees carrying basis elements, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.basis
            .iter()
            .filter(|(_, b)| !b.is_empty())
            .map(|(d, _)| *d)
            .collect()
    }

    pub fn min_degree(&self) -> i64 {
        self.degrees().first().copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.degrees().last().copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(|b| b.len()).sum()
    }
}

/// Homogeneous map of graded modules, stored as one block per degree.
///
/// The block at degree n has shape dim(target, n + shift) x dim(source, n).
/// Absent blocks are zero wherever both sides are representable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub shift: i64,
    pub blocks: BTreeMap<i64, ExactMatrix>,
}

impl GradedMap {
    pub fn zero(source: &GradedModule, target: &GradedModule, shift: i64) -> Self {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(module: &GradedModule) -> Self {
        let mut blocks = BTreeMap::new();
        for (&deg, basis) in &module.basis {
            if !basis.is_empty() {
                blocks.insert(deg, ExactMatrix::identity(basis.len(), module.ring));
            }
        }
        GradedMap {
            source: module.clone(),
            target: module.clone(),
            shift: 0,
            blocks,
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.source.ring
    }

    pub fn set_block(&mut self, degree: i64, block: ExactMatrix) -> Result<()> {
        let expect_rows = self.target.dim(degree + self.shift);
        let expect_cols = self.source.dim(degree);
        if block.rows != expect_rows || block.cols != expect_cols {
            return Err(Error::Shape(format!(
                "block at degree {degree} has shape {}x{}, expected {expect_rows}x{expect_cols}",
                block.rows, block.cols
            )));
        }
        if !self.target.representable(degree + self.shift) {
            return Err(Error::Truncation {
                needed: degree + self.shift,
                bound: self.target.degree_bound.unwrap_or(i64::MAX),
                context: "setting map block".into(),
            });
        }
        if block.is_zero() {
            self.blocks.remove(&degree);
        } else {
            self.blocks.insert(degree, block);
        }
        Ok(())
    }

    /// The block at a degree, materialized (zero if absent).
    pub fn block(&self, degree: i64) -> ExactMatrix {
        match self.blocks.get(&degree) {
            Some(b) => b.clone(),
            None => ExactMatrix::zero(
                self.target.dim(degree + self.shift),
                self.source.dim(degree),
                self.ring(),
            ),
        }
    }

    /// True when the block at `degree` may be used: either stored, or
    /// zero with a representable target degree.
    pub fn defined_at(&self, degree: i64) -> bool {
        self.blocks.contains_key(&degree)
            || self.source.dim(degree) == 0
            || self.target.representable(degree + self.shift)
    }

    /// Apply to a sparse vector in `degree`; result lives in degree + shift.
    pub fn apply(&self, degree: i64, v: &SparseVec) -> Result<SparseVec> {
        if v.is_empty() {
            return Ok(Vec::new());
        }
        match self.blocks.get(&degree) {
            Some(b) => Ok(b.apply(v)),
            None => {
                if self.target.representable(degree + self.shift) {
                    Ok(Vec::new())
                } else {
                    Err(Error::Truncation {
                        needed: degree + self.shift,
                        bound: self.target.degree_bound.unwrap_or(i64::MAX),
                        context: "applying map beyond the degree bound".into(),
                    })
                }
            }
        }
    }

    /// Build from a column function: `col(degree, index)` returns the image
    /// of basis element `index` in degree `degree`.
    pub fn from_columns<F>(
        source: &GradedModule,
        target: &GradedModule,
        shift: i64,
        degrees: impl IntoIterator<Item = i64>,
        mut col: F,
    ) -> Result<Self>
    where
        F: FnMut(i64, usize) -> Result<SparseVec>,
    {
        let mut map = GradedMap::zero(source, target, shift);
        for deg in degrees {
            let n_src = source.dim(deg);
            if n_src == 0 {
                continue;
            }
            let mut block = ExactMatrix::zero(target.dim(deg + shift), n_src, source.ring);
            for j in 0..n_src {
                for (i, v) in col(deg, j)? {
                    block.add_to(i, j, v);
                }
            }
            map.set_block(deg, block)?;
        }
        Ok(map)
    }

    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        // self ∘ first
        if first.target != self.source {
            return Err(Error::Shape(
                "composition: inner target differs from outer source".into(),
            ));
        }
        let mut out = GradedMap::zero(&first.source, &self.target, self.shift + first.shift);
        let degrees: std::collections::BTreeSet<i64> = first
            .blocks
            .keys()
            .copied()
            .collect();
        for deg in degrees {
            let inner = first.block(deg);
            if !self.defined_at(deg + first.shift) && !inner.is_zero() {
                return Err(Error::Truncation {
                    needed: deg + first.shift + self.shift,
                    bound: self.target.degree_bound.unwrap_or(i64::MAX),
                    context: "composition beyond the degree bound".into(),
                });
            }
            let outer = self.block(deg + first.shift);
            out.set_block(deg, outer.mul(&inner)?)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::Shape("adding maps of different types".into()));
        }
        let mut out = self.clone();
        for (&deg, b) in &other.blocks {
            let cur = out.block(deg);
            out.set_block(deg, cur.add(b)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> GradedMap {
        let mut out = self.clone();
        let mut blocks = BTreeMap::new();
        for (&deg, b) in &self.blocks {
            let s = b.scale(k);
            if !s.is_zero() {
                blocks.insert(deg, s);
            }
        }
        out.blocks = blocks;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero())
    }

    /// First nonzero column, as (degree, source label), for failure reports.
    pub fn first_nonzero_witness(&self) -> Option<(i64, String)> {
        for (&deg, block) in &self.blocks {
            if let Some((_, c, _)) = block.iter().next() {
                return Some((deg, self.source.label(deg, c).to_string()));
            }
        }
        None
    }

    /// Restrict to blocks in source degrees `range` (used when comparing
    /// maps only on the range where an identity is representable).
    pub fn restricted(&self, lo: i64, hi: i64) -> GradedMap {
        let mut out = self.clone();
        out.blocks = self
            .blocks
            .iter()
            .filter(|(&d, _)| d >= lo && d <= hi)
            .map(|(&d, b)| (d, b.clone()))
            .collect();
        out
    }
}

/// Tensor product of two maps with the Koszul sign:
/// (f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y).
/// Exposed through the tensor-space machinery in `tensor.rs`.
pub(crate) fn koszul_sign(map_degree: i64, element_degree: i64) -> BigInt {
    if (map_degree * element_degree) % 2 == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(ring: RingSpec, dims: &[(i64, usize)]) -> GradedModule {
        let mut basis = BTreeMap::new();
        for (deg, n) in dims {
            basis.insert(*deg, (0..*n).map(|i| format!("e{deg}_{i}")).collect());
        }
        GradedModule::new(ring, basis, None).unwrap()
    }

    #[test]
    fn identity_applies() {
        let m = module(RingSpec::Integers, &[(0, 2), (1, 3)]);
        let id = GradedMap::identity(&m);
        let v = vec![(1, BigInt::from(7))];
        assert_eq!(id.apply(1, &v).unwrap(), v);
    }

    #[test]
    fn truncation_is_loud() {
        let mut basis = BTreeMap::new();
        basis.insert(0, vec!["a".to_string()]);
        let m = GradedModule::new(RingSpec::Integers, basis, Some(0)).unwrap();
        let h = GradedMap::zero(&m, &m, 1);
        let v = vec![(0, BigInt::from(1))];
        assert!(h.apply(0, &v).is_err());
    }

    #[test]
    fn compose_shapes() {
        let a = module(RingSpec::Integers, &[(0, 1), (1, 1)]);
        let mut d = GradedMap::zero(&a, &a, -1);
        d.set_block(1, ExactMatrix::from_dense(RingSpec::Integers, &[vec![2]]))
            .unwrap();
        let dd = d.compose(&d).unwrap();
        assert!(dd.is_zero());
    }
}

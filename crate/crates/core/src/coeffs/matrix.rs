//! Sparse exact matrices over Z or Z/m.
//!
//! Entries are arbitrary-precision integers stored as sparse triplets;
//! zero entries are never stored. All arithmetic normalizes through the
//! matrix's [`RingSpec`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::RingSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    pub ring: RingSpec,
    /// (row, col) -> nonzero entry, ordered for deterministic iteration.
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize, ring: RingSpec) -> Self {
        ExactMatrix {
            rows,
            cols,
            ring,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, ring: RingSpec) -> Self {
        let mut m = ExactMatrix::zero(n, n, ring);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, ring: RingSpec, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = ExactMatrix::zero(rows, cols, ring);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "triplet index ({r},{c}) out of range for {rows}x{cols}"
                )));
            }
            m.add_to(r, c, v);
        }
        Ok(m)
    }

    pub fn from_dense(ring: RingSpec, data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = ExactMatrix::zero(rows, cols, ring);
        for (i, row) in data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        debug_assert!(r < self.rows && c < self.cols);
        let v = self.ring.normalize(v);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: BigInt) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Nonzero entries of one column, in row order.
    pub fn column(&self, c: usize) -> Vec<(usize, BigInt)> {
        self.entries
            .iter()
            .filter(|(&(_, cc), _)| cc == c)
            .map(|(&(r, _), v)| (r, v.clone()))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = ExactMatrix::zero(self.cols, self.rows, self.ring);
        for (r, c, v) in self.iter() {
            m.set(c, r, v.clone());
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return Err(Error::Shape(format!(
                "cannot add {}x{} ({}) and {}x{} ({})",
                self.rows, self.cols, self.ring, other.rows, other.cols, other.ring
            )));
        }
        let mut m = self.clone();
        for (r, c, v) in other.iter() {
            m.add_to(r, c, v.clone());
        }
        Ok(m)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut m = ExactMatrix::zero(self.rows, self.cols, self.ring);
        for (r, c, v) in self.iter() {
            m.set(r, c, v * k);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Group the right factor by row for sparse row-times-matrix products.
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (r, c, v) in other.iter() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut m = ExactMatrix::zero(self.rows, other.cols, self.ring);
        for (r, k, a) in self.iter() {
            if let Some(row) = by_row.get(&k) {
                for (c, b) in row {
                    m.add_to(r, *c, a * *b);
                }
            }
        }
        Ok(m)
    }

    /// Apply to a sparse column vector given as (index, coeff) pairs.
    pub fn apply(&self, v: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
        let vmap: BTreeMap<usize, &BigInt> = v.iter().map(|(i, x)| (*i, x)).collect();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for ((r, c), a) in self.entries.iter() {
            if let Some(x) = vmap.get(c) {
                let e = acc.entry(*r).or_insert_with(BigInt::zero);
                *e += a * *x;
            }
        }
        acc.into_iter()
            .map(|(i, x)| (i, self.ring.normalize(x)))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    /// Reinterpret entries in another ring (reducing mod m as needed).
    pub fn cast(&self, ring: RingSpec) -> Self {
        let mut m = ExactMatrix::zero(self.rows, self.cols, ring);
        for (r, c, v) in self.iter() {
            m.set(r, c, v.clone());
        }
        m
    }

    /// Rank over a prime field Z/p via Gaussian elimination.
    pub fn rank_mod_p(&self) -> Result<usize> {
        let p = match self.ring {
            RingSpec::ModM(p) if super::is_prime(p) => p,
            other => {
                return Err(Error::Unsupported(format!(
                    "rank over {other} requires a prime field"
                )))
            }
        };
        let mut dense = self.to_dense();
        let modp = BigInt::from(p);
        let rows = self.rows;
        let cols = self.cols;
        let mut rank = 0usize;
        let mut pivot_row = 0usize;
        for col in 0..cols {
            let mut sel = None;
            for r in pivot_row..rows {
                if !dense[r][col].is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            dense.swap(pivot_row, sel);
            let inv = self.ring.inverse(&dense[pivot_row][col]).ok_or_else(|| {
                Error::Internal("nonzero element not invertible mod p".into())
            })?;
            for c in col..cols {
                dense[pivot_row][c] = (&dense[pivot_row][c] * &inv) % &modp;
            }
            for r in 0..rows {
                if r != pivot_row && !dense[r][col].is_zero() {
                    let factor = dense[r][col].clone();
                    for c in col..cols {
                        let v = &dense[r][c] - &factor * &dense[pivot_row][c];
                        dense[r][c] = self.ring.normalize(v);
                    }
                }
            }
            rank += 1;
            pivot_row += 1;
            if pivot_row == rows {
                break;
            }
        }
        Ok(rank)
    }
}

impl std::fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.ring)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_storage_drops_zeros() {
        let mut m = ExactMatrix::zero(2, 2, RingSpec::Integers);
        m.set(0, 0, BigInt::from(5));
        m.add_to(0, 0, BigInt::from(-5));
        assert!(m.is_zero());
    }

    #[test]
    fn modular_normalization() {
        let mut m = ExactMatrix::zero(1, 1, RingSpec::ModM(5));
        m.set(0, 0, BigInt::from(-3));
        assert_eq!(m.get(0, 0), BigInt::from(2));
        m.set(0, 0, BigInt::from(10));
        assert!(m.is_zero());
    }

    #[test]
    fn mul_matches_dense() {
        let a = ExactMatrix::from_dense(RingSpec::Integers, &[vec![1, 2], vec![3, 4]]);
        let b = ExactMatrix::from_dense(RingSpec::Integers, &[vec![0, 1], vec![1, 1]]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, ExactMatrix::from_dense(RingSpec::Integers, &[vec![2, 3], vec![4, 7]]));
    }

    #[test]
    fn rank_mod_p() {
        let m = ExactMatrix::from_dense(RingSpec::ModM(5), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank_mod_p().unwrap(), 1);
    }
}

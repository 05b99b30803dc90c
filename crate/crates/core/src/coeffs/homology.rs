//! Homology groups of a pair of composable differentials.
//!
//! Over Z the answer is the full isomorphism type (free rank plus torsion
//! in divisibility-chain form); over Z/p it is a vector-space rank.
//! Composite moduli are rejected rather than silently reporting wrong
//! torsion.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{smith_normal_form, solve_with_snf};
use super::{ExactMatrix, RingSpec};
use crate::error::{Error, Result};

/// Finitely generated abelian group (or Z/p-vector space) in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Torsion coefficients >= 2, each dividing the next.
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology at the middle of  C_{n+1} --d_in--> C_n --d_out--> C_{n-1}.
///
/// `d_out` has shape (dim C_{n-1}) x (dim C_n); `d_in` has shape
/// (dim C_n) x (dim C_{n+1}). Requires d_out * d_in = 0.
pub fn homology_of_pair(d_out: &ExactMatrix, d_in: &ExactMatrix) -> Result<HomologyGroup> {
    if d_out.cols != d_in.rows {
        return Err(Error::Shape(format!(
            "chain dimensions disagree: d_out is {}x{}, d_in is {}x{}",
            d_out.rows, d_out.cols, d_in.rows, d_in.cols
        )));
    }
    if d_out.ring != d_in.ring {
        return Err(Error::Shape("differentials over different rings".into()));
    }
    let composite = d_out.mul(d_in)?;
    if !composite.is_zero() {
        return Err(Error::Internal(
            "homology_of_pair called with d_out * d_in != 0".into(),
        ));
    }
    match d_out.ring {
        RingSpec::Integers => homology_integer(d_out, d_in),
        RingSpec::ModM(m) if super::is_prime(m) => {
            let n = d_out.cols;
            let rank_out = d_out.rank_mod_p()?;
            let rank_in = d_in.rank_mod_p()?;
            Ok(HomologyGroup::free(n - rank_out - rank_in))
        }
        RingSpec::ModM(m) => Err(Error::Unsupported(format!(
            "homology over Z/{m} with composite {m}: use integer coefficients"
        ))),
    }
}

fn homology_integer(d_out: &ExactMatrix, d_in: &ExactMatrix) -> Result<HomologyGroup> {
    let n = d_out.cols;
    // Kernel basis of d_out from its SNF: columns of V beyond the rank.
    let snf_out = smith_normal_form(d_out)?;
    let rank_out = snf_out.rank();
    let kernel_dim = n - rank_out;
    if kernel_dim == 0 {
        return Ok(HomologyGroup::free(0));
    }
    // kernel basis vectors = V * e_j for j in rank_out..n
    let mut kernel = ExactMatrix::zero(n, kernel_dim, RingSpec::Integers);
    for (r, c, v) in snf_out.v.iter() {
        if c >= rank_out {
            kernel.set(r, c - rank_out, v.clone());
        }
    }
    // Express each column of d_in in the kernel basis: kernel * X = d_in.
    // Solvable exactly because im(d_in) lies in ker(d_out) and the kernel
    // basis spans the full kernel sublattice (V is unimodular).
    let snf_k = smith_normal_form(&kernel)?;
    let mut x = ExactMatrix::zero(kernel_dim, d_in.cols, RingSpec::Integers);
    for c in 0..d_in.cols {
        let b = d_in.column(c);
        let sol = solve_with_snf(&snf_k, &b).ok_or_else(|| {
            Error::Internal("image of d_in does not lie in the kernel lattice".into())
        })?;
        for (r, v) in sol {
            x.set(r, c, v);
        }
    }
    let snf_x = smith_normal_form(&x)?;
    let rank_x = snf_x.rank();
    let mut torsion = Vec::new();
    for d in snf_x.diagonal() {
        if !d.is_zero() && !d.abs().is_one() {
            let t: u64 = d
                .abs()
                .try_into()
                .map_err(|_| Error::Internal("torsion coefficient exceeds u64".into()))?;
            torsion.push(t);
        }
    }
    torsion.sort_unstable();
    Ok(HomologyGroup {
        free_rank: kernel_dim - rank_x,
        torsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differentials() {
        // degrees (0,1) with bases of sizes (1,1), zero differential
        let d0_out = ExactMatrix::zero(0, 1, RingSpec::Integers);
        let d0_in = ExactMatrix::zero(1, 1, RingSpec::Integers);
        let h0 = homology_of_pair(&d0_out, &d0_in).unwrap();
        assert_eq!(h0, HomologyGroup::free(1));
        let d1_out = ExactMatrix::zero(1, 1, RingSpec::Integers);
        let d1_in = ExactMatrix::zero(1, 0, RingSpec::Integers);
        let h1 = homology_of_pair(&d1_out, &d1_in).unwrap();
        assert_eq!(h1, HomologyGroup::free(1));
    }

    #[test]
    fn cokernel_of_times_two() {
        // Z --x2--> Z in degrees 1 -> 0: H0 = Z/2, H1 = 0.
        let d0_out = ExactMatrix::zero(0, 1, RingSpec::Integers);
        let d1 = ExactMatrix::from_dense(RingSpec::Integers, &[vec![2]]);
        let h0 = homology_of_pair(&d0_out, &d1).unwrap();
        assert_eq!(
            h0,
            HomologyGroup {
                free_rank: 0,
                torsion: vec![2]
            }
        );
        let d1_in = ExactMatrix::zero(1, 0, RingSpec::Integers);
        let h1 = homology_of_pair(&d1, &d1_in).unwrap();
        assert_eq!(h1, HomologyGroup::free(0));
    }

    #[test]
    fn wbar_z2_truncated() {
        // Normalized chains of Wbar(Z/2) truncated at degree 6: one basis
        // element per degree, d alternating 0, x2, 0, x2, ...
        // (d_n = 1 + (-1)^n times the generator below).
        let d = |n: i64| {
            if n % 2 == 0 {
                ExactMatrix::from_dense(RingSpec::Integers, &[vec![2]])
            } else {
                ExactMatrix::from_dense(RingSpec::Integers, &[vec![0]])
            }
        };
        // H1 = Z/2, H2 = 0, H3 = Z/2
        let h1 = homology_of_pair(&d(1), &d(2)).unwrap();
        assert_eq!(h1.torsion, vec![2]);
        assert_eq!(h1.free_rank, 0);
        let h2 = homology_of_pair(&d(2), &d(3)).unwrap();
        assert!(h2.is_trivial());
        let h3 = homology_of_pair(&d(3), &d(4)).unwrap();
        assert_eq!(h3.torsion, vec![2]);
    }

    #[test]
    fn mod_p_rank() {
        let d_out = ExactMatrix::zero(0, 2, RingSpec::ModM(5));
        let d_in = ExactMatrix::from_dense(RingSpec::ModM(5), &[vec![1], vec![2]]);
        let h = homology_of_pair(&d_out, &d_in).unwrap();
        assert_eq!(h, HomologyGroup::free(1));
    }

    #[test]
    fn composite_modulus_rejected() {
        let d_out = ExactMatrix::zero(0, 1, RingSpec::ModM(6));
        let d_in = ExactMatrix::zero(1, 0, RingSpec::ModM(6));
        assert!(homology_of_pair(&d_out, &d_in).is_err());
    }
}

//! Exact coefficient arithmetic over the integers and the rings Z/m,
//! sparse integer matrices, Smith normal form, and homology-group
//! extraction.
//!
//! Everything here is exact: entries are arbitrary-precision integers and
//! no operation ever rounds. This module is the computational substrate
//! for every verification in the crate.

mod homology;
mod matrix;
mod snf;

pub use homology::{homology_of_pair, HomologyGroup};
pub use matrix::ExactMatrix;
pub use snf::{determinant, smith_normal_form, solve_with_snf, SmithDecomposition, DENSIFY_COLS};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground-ring selector: the integers or Z/m with m >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    Integers,
    ModM(u64),
}

impl RingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::Integers => Ok(()),
            RingSpec::ModM(m) if *m >= 2 => Ok(()),
            RingSpec::ModM(m) => Err(Error::Invalid(format!("modulus {m} must be >= 2"))),
        }
    }

    /// Reduce a value into canonical form: over Z/m into `0..m`.
    pub fn normalize(&self, value: BigInt) -> BigInt {
        match self {
            RingSpec::Integers => value,
            RingSpec::ModM(m) => {
                let m = BigInt::from(*m);
                let mut r = value % &m;
                if r.sign() == num_bigint::Sign::Minus {
                    r += &m;
                }
                r
            }
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Integers => false,
            RingSpec::ModM(m) => is_prime(*m),
        }
    }

    /// Multiplicative inverse, when one exists.
    pub fn inverse(&self, value: &BigInt) -> Option<BigInt> {
        match self {
            RingSpec::Integers => {
                let one = BigInt::from(1);
                if value == &one || value == &BigInt::from(-1) {
                    Some(value.clone())
                } else {
                    None
                }
            }
            RingSpec::ModM(m) => {
                let m = BigInt::from(*m);
                let (g, x, _) = extended_gcd(&self.normalize(value.clone()), &m);
                if g == BigInt::from(1) {
                    Some(self.normalize(x))
                } else {
                    None
                }
            }
        }
    }
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::ModM(m) => write!(f, "Z/{m}"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns (g, x, y) with x*a + y*b = g = gcd(a, b), g >= 0.
pub(crate) fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        if a.sign() == num_bigint::Sign::Minus {
            return (-a.clone(), BigInt::from(-1), BigInt::zero());
        }
        return (a.clone(), BigInt::from(1), BigInt::zero());
    }
    let (q, r) = num_integer::Integer::div_rem(a, b);
    let (g, x, y) = extended_gcd(b, &r);
    // g = x*b + y*(a - q*b)
    (g, y.clone(), x - q * y)
}

//! Bernoulli numbers, the Thaddeus intersection formula and Wall's
//! invariants of simply connected 6-manifolds.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// B₀ … B_n with B₁ = −1/2, from Σ_{k≤n} C(n+1, k) B_k = 0.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(k))) * bk;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli(n: usize) -> BigRational {
    bernoulli_numbers(n).pop().expect("at least B_0")
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Coefficient c in x^m = c·z on the genus-g moduli space:
/// (−1)^g 2^{2g−2} m!/(m−g+1)! (2^{m−g+1} − 2) B_{m−g+1}.
pub fn thaddeus_check(m: u32, g: u32) -> Result<BigRational> {
    if g == 0 || m + 1 < g {
        return Err(Error::Malformed(format!("need g ≥ 1 and m ≥ g − 1, got m = {m}, g = {g}")));
    }
    let k = m + 1 - g;
    let sign = if g.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let power = BigInt::one() << (2 * g - 2);
    let ratio = factorial(m) / factorial(k);
    let two_k = (BigInt::one() << k) - BigInt::from(2);
    Ok(BigRational::from_integer(sign * power * ratio * two_k) * bernoulli(k as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallInvariants {
    pub d: i64,
    pub p: i64,
    pub congruence_ok: bool,
}

/// c₁ = c1·x, c₂ = c2·y, x³ = cube·z with xy = z (so x² = cube·y):
/// d = cube, p = x·(c₁² − 2c₂) = c1²·cube − 2·c2, and p ≡ 4d (mod 24).
pub fn wall_invariants(c1: i64, c2: i64, cube: i64) -> WallInvariants {
    let d = cube;
    let p = c1 * c1 * cube - 2 * c2;
    WallInvariants { d, p, congruence_ok: (p - 4 * d).rem_euclid(24) == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert_eq!(b[8], q(-1, 30));
    }

    #[test]
    fn genus_two_cube() {
        assert_eq!(thaddeus_check(3, 2).unwrap(), q(4, 1));
        assert!(thaddeus_check(0, 2).is_err());
    }

    #[test]
    fn wall_examples() {
        assert_eq!(wall_invariants(2, 12, 4), WallInvariants { d: 4, p: -8, congruence_ok: true });
        assert!(wall_invariants(0, 0, 6).congruence_ok);
        assert!(!wall_invariants(0, 0, 1).congruence_ok);
        assert!(!wall_invariants(1, 0, 1).congruence_ok);
    }
}

//! Gaussian (q-analog) integers, exact.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_bracket(n: u32, q: u32) -> BigUint {
    let qb = BigUint::from(q);
    let mut term = BigUint::one();
    let mut sum = BigUint::zero();
    for _ in 0..n {
        sum += &term;
        term *= &qb;
    }
    sum
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u32, q: u32) -> BigUint {
    (1..=n).map(|i| q_bracket(i, q)).product()
}

/// The Gaussian binomial coefficient, the number of `k`-dimensional
/// subspaces of `(F_q)^n`.
pub fn gaussian(n: u32, k: u32, q: u32) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("k = {k} outside [0, {n}]")));
    }
    // prod_{i<k} [n-i]_q / [i+1]_q; every partial quotient is an integer
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= q_bracket(n - i, q);
        acc /= q_bracket(i + 1, q);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32, k: u32, q: u32) -> u64 {
        gaussian(n, k, q).unwrap().try_into().unwrap()
    }

    /// q-Pascal recurrence, independent of the product formula.
    fn pascal(n: u32, k: u32, q: u64) -> u64 {
        if k == 0 || k == n {
            return 1;
        }
        pascal(n - 1, k - 1, q) + q.pow(k) * pascal(n - 1, k, q)
    }

    #[test]
    fn known_values() {
        assert_eq!(g(3, 1, 2), 7);
        assert_eq!(g(4, 2, 2), 35);
        assert_eq!(g(5, 2, 2), 155);
        assert_eq!(g(4, 2, 3), 130);
        assert_eq!(g(7, 0, 5), 1);
        assert_eq!(q_factorial(3, 2), BigUint::from(21u32));
        assert!(matches!(gaussian(2, 3, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn symmetric_and_matches_recurrence() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            for n in 0..=6 {
                for k in 0..=n {
                    assert_eq!(gaussian(n, k, q).unwrap(), gaussian(n, n - k, q).unwrap());
                    assert_eq!(g(n, k, q), pascal(n, k, q as u64));
                }
            }
        }
    }

    #[test]
    fn factorial_exceeds_u64() {
        let f = q_factorial(10, 9);
        assert!(f > BigUint::from(u64::MAX));
    }
}

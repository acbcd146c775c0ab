//! Factorizations, square-free splits, and the orthogonality mass `h`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest integer magnitude accepted anywhere in the crate.
pub const MAX_INT: u64 = i64::MAX as u64;

/// `n = prod p^e`, with strictly increasing primes and exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Self { pairs: Vec::new() }
    }

    /// Builds a factorization from already-validated pairs.
    ///
    /// Panics if primes are not strictly increasing or an exponent is zero;
    /// primality of the bases is the caller's responsibility.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Self {
        assert!(
            pairs.windows(2).all(|w| w[0].0 < w[1].0),
            "primes must be strictly increasing"
        );
        assert!(pairs.iter().all(|&(p, e)| p >= 2 && e >= 1));
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// The integer this factorization represents, if it fits in 128 bits.
    pub fn value(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for &(p, e) in &self.pairs {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_square(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e % 2 == 0)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    /// Number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.pairs.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

/// Trial-division factorization of `1 <= n <= 2^63 - 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if n > MAX_INT {
        return Err(Error::OutOfRange(n as i128));
    }
    let mut pairs = Vec::new();
    let mut m = n;
    for p in [2u64, 3] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    let mut p = 5u64;
    while p * p <= m {
        for q in [p, p + 2] {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            if e > 0 {
                pairs.push((q, e));
            }
        }
        p += 6;
    }
    if m > 1 {
        pairs.push((m, 1));
    }
    Ok(Factorization { pairs })
}

/// `n = n0 * n1^2` with `n0` square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeSplit {
    pub n0: u64,
    pub n1: u64,
}

pub fn squarefree_decompose(n: u64) -> Result<SquarefreeSplit> {
    let f = factorize(n)?;
    Ok(split_from(&f))
}

pub fn split_from(f: &Factorization) -> SquarefreeSplit {
    let mut n0 = 1u64;
    let mut n1 = 1u64;
    for &(p, e) in f.pairs() {
        if e % 2 == 1 {
            n0 *= p;
        }
        for _ in 0..e / 2 {
            n1 *= p;
        }
    }
    SquarefreeSplit { n0, n1 }
}

/// `h(n) = prod_{p | n} p / (p + 1)` as a reduced fraction.
pub fn orthogonality_mass_ratio(f: &Factorization) -> (u128, u128) {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for p in f.primes() {
        num *= p as u128;
        den *= p as u128 + 1;
        let g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    (num, den)
}

/// `h(n)` in floating point; depends only on the radical of `n`.
pub fn orthogonality_mass(f: &Factorization) -> f64 {
    f.primes().map(|p| local_mass(p)).product()
}

/// `h(p) = p / (p + 1)`.
#[inline]
pub fn local_mass(p: u64) -> f64 {
    let p = p as f64;
    p / (p + 1.0)
}

pub fn orthogonality_mass_of(n: u64) -> Result<f64> {
    Ok(orthogonality_mass(&factorize(n)?))
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        assert_eq!(squarefree_decompose(12).unwrap(), SquarefreeSplit { n0: 3, n1: 2 });
        assert_eq!(squarefree_decompose(1).unwrap(), SquarefreeSplit { n0: 1, n1: 1 });
        assert_eq!(squarefree_decompose(360).unwrap(), SquarefreeSplit { n0: 10, n1: 6 });
    }

    #[test]
    fn factor_reconstructs() {
        for n in 1..5000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), Some(n as u128));
        }
        let big = 9_223_372_036_854_775_783u64; // largest prime below 2^63
        assert_eq!(factorize(big).unwrap().pairs(), &[(big, 1)]);
    }

    #[test]
    fn rejects_zero_and_oversize() {
        assert!(factorize(0).is_err());
        assert!(matches!(factorize(u64::MAX), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn mass_values() {
        assert_eq!(orthogonality_mass_ratio(&factorize(1).unwrap()), (1, 1));
        assert_eq!(orthogonality_mass_ratio(&factorize(12).unwrap()), (1, 2));
        for p in [2u64, 3, 7, 101] {
            let base = orthogonality_mass_of(p).unwrap();
            assert!((base - p as f64 / (p as f64 + 1.0)).abs() < 1e-15);
            let mut pk = p;
            for _ in 0..4 {
                pk *= p;
                assert_eq!(orthogonality_mass_of(pk).unwrap(), base);
            }
        }
    }

    #[test]
    fn squarefree_split_invariant_to_1e6() {
        for n in 1..=1_000_000u64 {
            let s = squarefree_decompose(n).unwrap();
            assert_eq!(s.n0 * s.n1 * s.n1, n);
            assert!(factorize(s.n0).unwrap().is_squarefree());
        }
    }
}

//! Fundamental discriminants: validation and sieve-based enumeration.

use super::factor::{factorize, Factorization, MAX_INT};
use super::primes::{isqrt, sieve_primes};
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Which signs of `d` an enumeration yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignFilter {
    Positive,
    Negative,
    #[default]
    Both,
}

impl SignFilter {
    pub fn admits(self, d: i64) -> bool {
        match self {
            SignFilter::Positive => d > 0,
            SignFilter::Negative => d < 0,
            SignFilter::Both => true,
        }
    }

    /// Fraction of the full family this filter keeps, asymptotically.
    pub fn density(self) -> f64 {
        match self {
            SignFilter::Both => 1.0,
            _ => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignFilter::Positive => "positive",
            SignFilter::Negative => "negative",
            SignFilter::Both => "both",
        }
    }
}

impl std::str::FromStr for SignFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" | "pos" | "+" => Ok(SignFilter::Positive),
            "negative" | "neg" | "-" => Ok(SignFilter::Negative),
            "both" => Ok(SignFilter::Both),
            other => domain(format!("unknown sign filter `{other}`")),
        }
    }
}

/// A validated fundamental discriminant together with the factorization of `|d|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalDiscriminant {
    d: i64,
    abs_factorization: Factorization,
}

impl FundamentalDiscriminant {
    /// Validates `d`. The trivial discriminant 1 is rejected; see [`Self::with_one`].
    pub fn new(d: i64) -> Result<Self> {
        Self::build(d, false)
    }

    /// Like [`Self::new`] but also admits `d = 1`.
    pub fn with_one(d: i64) -> Result<Self> {
        Self::build(d, true)
    }

    fn build(d: i64, include_one: bool) -> Result<Self> {
        if !is_fundamental_with(d, include_one)? {
            return domain(format!("{d} is not a fundamental discriminant"));
        }
        Ok(Self {
            d,
            abs_factorization: factorize(d.unsigned_abs())?,
        })
    }

    pub fn value(&self) -> i64 {
        self.d
    }

    pub fn abs(&self) -> u64 {
        self.d.unsigned_abs()
    }

    pub fn abs_factorization(&self) -> &Factorization {
        &self.abs_factorization
    }

    pub fn is_positive(&self) -> bool {
        self.d > 0
    }

    pub(crate) fn from_parts(d: i64, abs_factorization: Factorization) -> Self {
        Self { d, abs_factorization }
    }
}

/// True iff `d` is a fundamental discriminant other than 1.
pub fn is_fundamental_discriminant(d: i64) -> Result<bool> {
    is_fundamental_with(d, false)
}

/// Definition filter: `d = 1 (mod 4)` square-free, or `d = 4m` with
/// `m = 2, 3 (mod 4)` square-free.
pub fn is_fundamental_with(d: i64, include_one: bool) -> Result<bool> {
    if d == 0 {
        return domain("d = 0 is not a discriminant");
    }
    if d == i64::MIN {
        return Err(Error::OutOfRange(d as i128));
    }
    if d == 1 {
        return Ok(include_one);
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return Ok(factorize(d.unsigned_abs())?.is_squarefree());
    }
    if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        if mr == 2 || mr == 3 {
            return Ok(factorize(m.unsigned_abs())?.is_squarefree());
        }
    }
    Ok(false)
}

/// Signs `(negative, positive)` for which `a = |d|` is fundamental, given the
/// 2-adic valuation `v` and odd part `o` of `a` (with `o` square-free).
#[inline]
fn admissible_signs(v: u32, o: u64) -> (bool, bool) {
    match v {
        0 => (o % 4 == 3, o % 4 == 1),
        2 => (o % 4 == 1, o % 4 == 3),
        3 => (true, true),
        _ => (false, false),
    }
}

/// Width of one enumeration block in `|d|`.
pub const BLOCK_WIDTH: u64 = 1 << 16;

/// Sieve context for enumerating fundamental discriminants up to `x`.
#[derive(Debug, Clone)]
pub struct DiscriminantSieve {
    x: u64,
    base_primes: Vec<u64>,
    filter: SignFilter,
    include_one: bool,
}

impl DiscriminantSieve {
    pub fn new(x: u64, filter: SignFilter) -> Result<Self> {
        if x > MAX_INT {
            return Err(Error::OutOfRange(x as i128));
        }
        let base_primes = sieve_primes(isqrt(x)).into_iter().filter(|&p| p > 2).collect();
        Ok(Self {
            x,
            base_primes,
            filter,
            include_one: false,
        })
    }

    pub fn include_one(mut self, yes: bool) -> Self {
        self.include_one = yes;
        self
    }

    pub fn bound(&self) -> u64 {
        self.x
    }

    /// Number of blocks covering `1 <= |d| <= x`.
    pub fn block_count(&self) -> usize {
        self.x.div_ceil(BLOCK_WIDTH) as usize
    }

    /// All fundamental discriminants with `|d|` in block `index`, ordered by
    /// `|d|` and then negative before positive.
    pub fn block(&self, index: usize) -> Vec<FundamentalDiscriminant> {
        let lo = index as u64 * BLOCK_WIDTH + 1;
        let hi = (lo + BLOCK_WIDTH - 1).min(self.x);
        if lo > hi {
            return Vec::new();
        }
        let len = (hi - lo + 1) as usize;
        // odd part of each a, reduced as odd primes are divided out
        let mut rem: Vec<u64> = (lo..=hi).map(|a| a >> a.trailing_zeros()).collect();
        let mut ok: Vec<bool> = (lo..=hi).map(|a| matches!(a.trailing_zeros(), 0 | 2 | 3)).collect();
        let mut odd_factors: Vec<SmallVec<[u64; 6]>> = vec![SmallVec::new(); len];
        for &p in &self.base_primes {
            let first = lo.div_ceil(p) * p;
            let mut a = first;
            while a <= hi {
                let i = (a - lo) as usize;
                if ok[i] {
                    rem[i] /= p;
                    if rem[i] % p == 0 {
                        ok[i] = false;
                    } else {
                        odd_factors[i].push(p);
                    }
                }
                a += p;
            }
        }
        let mut out = Vec::new();
        for i in 0..len {
            if !ok[i] {
                continue;
            }
            let a = lo + i as u64;
            let v = a.trailing_zeros();
            let o = a >> v;
            let (neg, pos) = if a == 1 {
                (false, self.include_one)
            } else {
                admissible_signs(v, o)
            };
            if !(neg && self.filter.admits(-1)) && !(pos && self.filter.admits(1)) {
                continue;
            }
            let mut pairs = Vec::with_capacity(odd_factors[i].len() + 2);
            if v > 0 {
                pairs.push((2, v));
            }
            pairs.extend(odd_factors[i].iter().map(|&p| (p, 1)));
            if rem[i] > 1 {
                pairs.push((rem[i], 1));
            }
            let f = Factorization::from_pairs(pairs);
            if neg && self.filter.admits(-1) {
                out.push(FundamentalDiscriminant::from_parts(-(a as i64), f.clone()));
            }
            if pos && self.filter.admits(1) {
                out.push(FundamentalDiscriminant::from_parts(a as i64, f));
            }
        }
        out
    }

    pub fn blocks(&self) -> impl Iterator<Item = Vec<FundamentalDiscriminant>> + '_ {
        (0..self.block_count()).map(move |i| self.block(i))
    }
}

/// Fundamental discriminants with `2 <= |d| <= x` passing `filter`,
/// ascending by `|d|` (negative first on ties).
pub fn enumerate_fundamental_discriminants(x: u64, filter: SignFilter) -> Result<Vec<FundamentalDiscriminant>> {
    let sieve = DiscriminantSieve::new(x, filter)?;
    Ok(sieve.blocks().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(v: &[FundamentalDiscriminant]) -> Vec<i64> {
        v.iter().map(|d| d.value()).collect()
    }

    fn brute_force(x: i64, filter: SignFilter) -> Vec<i64> {
        let mut out: Vec<i64> = (-x..=x)
            .filter(|&d| d != 0 && filter.admits(d) && is_fundamental_discriminant(d).unwrap())
            .collect();
        out.sort_by_key(|&d| (d.unsigned_abs(), d > 0));
        out
    }

    #[test]
    fn definition_examples() {
        assert!(is_fundamental_discriminant(12).unwrap());
        assert!(!is_fundamental_discriminant(9).unwrap());
        assert!(is_fundamental_discriminant(-3).unwrap());
        assert!(!is_fundamental_discriminant(2).unwrap());
        assert!(!is_fundamental_discriminant(1).unwrap());
        assert!(is_fundamental_with(1, true).unwrap());
        assert!(is_fundamental_discriminant(0).is_err());
        // negative 4m shapes
        assert!(is_fundamental_discriminant(-4).unwrap());
        assert!(is_fundamental_discriminant(-8).unwrap());
        assert!(!is_fundamental_discriminant(-12).unwrap());
    }

    #[test]
    fn enumerates_up_to_ten() {
        let got = enumerate_fundamental_discriminants(10, SignFilter::Both).unwrap();
        assert_eq!(values(&got), vec![-3, -4, 5, -7, -8, 8]);
        assert!(enumerate_fundamental_discriminants(2, SignFilter::Positive).unwrap().is_empty());
    }

    #[test]
    fn matches_brute_force_filter_to_1e4() {
        for filter in [SignFilter::Both, SignFilter::Positive, SignFilter::Negative] {
            let got = enumerate_fundamental_discriminants(10_000, filter).unwrap();
            assert_eq!(values(&got), brute_force(10_000, filter));
        }
    }

    #[test]
    fn factorizations_are_correct() {
        let sieve = DiscriminantSieve::new(200_000, SignFilter::Both).unwrap();
        for d in sieve.blocks().flatten() {
            assert_eq!(d.abs_factorization().value(), Some(d.abs() as u128));
            assert_eq!(d.abs_factorization(), &factorize(d.abs()).unwrap());
        }
    }

    #[test]
    fn census_near_x_over_zeta2() {
        let n = enumerate_fundamental_discriminants(100_000, SignFilter::Both).unwrap().len() as f64;
        let main = 100_000.0 * 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!((n - main).abs() / main < 0.01, "n={n} main={main}");
    }

    #[test]
    fn include_one_flag() {
        let s = DiscriminantSieve::new(10, SignFilter::Positive).unwrap().include_one(true);
        assert_eq!(values(&s.block(0)), vec![1, 5, 8]);
    }
}

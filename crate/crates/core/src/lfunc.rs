//! Evaluators for `L(1/2, chi_d)`, truncated Euler products at `s = 1`, and
//! prime sums approximating `log L(sigma, chi_d)`.

use crate::arith::kronecker::{chi_at_two, kronecker_unchecked, legendre};
use crate::arith::primes::{for_each_prime_in, sieve_primes};
use crate::arith::{CharacterTable, FundamentalDiscriminant};
use crate::error::{domain, Error, Result};
use crate::special::weight::{weight_for, TAIL_CONSTANT};
use crate::special::PrecisionBudget;
use crate::summation::NeumaierSum;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Hard cap on the number of terms any single evaluation may sum.
pub const MAX_TERMS: u64 = 100_000_000;

/// Minimum AFE cutoff, in units of `sqrt|d|`.
pub const AFE_MIN_CUTOFF: f64 = 12.0;

/// Smoothing length of the `L(1)` oracle, in units of `|d|`.
pub const ORACLE_LENGTH: u64 = 1000;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Afe,
    EulerTrunc,
    PrimeSum,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Afe => "afe",
            Method::EulerTrunc => "euler_trunc",
            Method::PrimeSum => "prime_sum",
            Method::Oracle => "oracle",
        }
    }

    /// Whether a record at `sigma` may carry this tag.
    pub fn consistent_with(self, sigma: f64) -> bool {
        match self {
            Method::Afe => sigma == 0.5,
            Method::EulerTrunc => sigma == 1.0,
            Method::PrimeSum => sigma > 0.5 && sigma < 1.0,
            Method::Oracle => (0.5..=1.0).contains(&sigma),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "afe" => Ok(Method::Afe),
            "euler_trunc" => Ok(Method::EulerTrunc),
            "prime_sum" => Ok(Method::PrimeSum),
            "oracle" => Ok(Method::Oracle),
            other => domain(format!("unknown method tag `{other}`")),
        }
    }
}

/// One evaluated L-quantity.
///
/// `value` is `L(1/2, chi_d)` at `sigma = 1/2`, the log-L approximation for
/// `1/2 < sigma < 1` and the truncated Euler product at `sigma = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LValueRecord {
    pub d: i64,
    pub sigma: f64,
    pub value: f64,
    pub method: Method,
    pub err_estimate: f64,
}

pub const CSV_HEADER: &str = "d,sigma,value,method,err_estimate";

impl LValueRecord {
    pub fn new(d: i64, sigma: f64, value: f64, method: Method, err_estimate: f64) -> Result<Self> {
        if !(err_estimate >= 0.0) {
            return domain(format!("negative error estimate {err_estimate}"));
        }
        if !method.consistent_with(sigma) {
            return domain(format!("method `{method}` is inconsistent with sigma = {sigma}"));
        }
        Ok(Self {
            d,
            sigma,
            value,
            method,
            err_estimate,
        })
    }

    /// `d,sigma,value,method,err_estimate` with shortest round-trip floats.
    pub fn to_csv_row(&self) -> String {
        // `{:?}` is the shortest round-trip form and switches to exponent
        // notation for very small or large magnitudes
        format!(
            "{},{:?},{:?},{},{:?}",
            self.d, self.sigma, self.value, self.method, self.err_estimate
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != 5 {
            return domain(format!("expected 5 CSV fields, got {}", fields.len()));
        }
        let bad = |what: &str| Error::Domain(format!("malformed {what} in CSV row `{row}`"));
        let d = fields[0].parse().map_err(|_| bad("d"))?;
        let sigma = fields[1].parse().map_err(|_| bad("sigma"))?;
        let value = fields[2].parse().map_err(|_| bad("value"))?;
        let method = fields[3].parse()?;
        let err_estimate = fields[4].parse().map_err(|_| bad("err_estimate"))?;
        Self::new(d, sigma, value, method, err_estimate)
    }
}

/// `chi_d(p)` for a prime `p`, skipping the general reduction.
#[inline]
fn chi_prime(d: i64, p: u64) -> i8 {
    if p == 2 {
        chi_at_two(d)
    } else {
        legendre(d, p)
    }
}

/// Cutoff and tail bound for the approximate functional equation.
///
/// Starts at the smallest `n` with `n / sqrt|d| >= max(12, ln(1/abs_tol))`
/// and extends it until `2 C sum_{n > N} n^{-1/2} e^{-n/sqrt|d|} < abs_tol`.
pub fn afe_cutoff(abs_d: u64, abs_tol: f64) -> Result<(u64, f64)> {
    let scale = (abs_d as f64).sqrt();
    let tol = if abs_tol > 0.0 { abs_tol } else { f64::EPSILON };
    let mut x = AFE_MIN_CUTOFF.max((1.0 / tol).ln());
    let ratio = (-1.0 / scale).exp();
    for _ in 0..64 {
        let n_cut = (x * scale).ceil() as u64;
        if n_cut > MAX_TERMS {
            return Err(Error::BudgetInfeasible(format!(
                "AFE cutoff {n_cut} exceeds the cap of {MAX_TERMS} terms"
            )));
        }
        let next = (n_cut + 1) as f64;
        let tail = 2.0 * TAIL_CONSTANT * next.powf(-0.5) * (-next / scale).exp() / (1.0 - ratio);
        if tail < tol {
            return Ok((n_cut, tail));
        }
        x += (tail / tol).ln().max(0.5);
    }
    unreachable!("tail bound decays exponentially in the cutoff")
}

/// `L(1/2, chi_d) = 2 sum chi_d(n) n^{-1/2} U(n / sqrt|d|)`.
///
/// Negative `d` use the weight built from `Gamma(s/2 + 3/4)`, the gamma
/// factor of odd characters.
pub fn l_half(d: &FundamentalDiscriminant, budget: &PrecisionBudget) -> Result<LValueRecord> {
    budget.validate()?;
    let dv = d.value();
    if d.abs() < 3 {
        return domain("l_half needs |d| >= 3");
    }
    let (n_cut, tail) = afe_cutoff(d.abs(), budget.abs_tol)?;
    let scale = (d.abs() as f64).sqrt();
    let mut acc = NeumaierSum::new();
    for n in 1..=n_cut {
        let chi = kronecker_unchecked(dv, n);
        if chi == 0 {
            continue;
        }
        let w = weight_for(dv, n as f64 / scale)?;
        if w == 0.0 {
            break;
        }
        acc.add(f64::from(chi) * w / (n as f64).sqrt());
    }
    let value = 2.0 * acc.value();
    let err = tail + acc.rounding_bound(2.0);
    LValueRecord::new(dv, 0.5, value, Method::Afe, err)
}

/// `L(1, chi_d; y) = prod_{p <= y} (1 - chi_d(p)/p)^{-1}`, summed in log space.
pub fn l_one_truncated(d: &FundamentalDiscriminant, y: f64) -> LValueRecord {
    let dv = d.value();
    let mut acc = NeumaierSum::new();
    if y >= 2.0 {
        for_each_prime_in(2, y.floor() as u64, |p| {
            let chi = chi_prime(dv, p);
            if chi != 0 {
                acc.add(-(-f64::from(chi) / p as f64).ln_1p());
            }
        });
    }
    let value = acc.value().exp();
    let err = value * acc.rounding_bound(1.0);
    LValueRecord {
        d: dv,
        sigma: 1.0,
        value,
        method: Method::EulerTrunc,
        err_estimate: err,
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return domain(format!("sigma must lie in (1/2, 1), got {sigma}"));
    }
    Ok(())
}

/// `S(sigma, y) = sum_{p <= y} chi_d(p) p^{-sigma}`.
pub fn prime_sum_sigma(d: &FundamentalDiscriminant, sigma: f64, y: f64) -> Result<LValueRecord> {
    check_sigma(sigma)?;
    let dv = d.value();
    let mut acc = NeumaierSum::new();
    if y >= 2.0 {
        for_each_prime_in(2, y.floor() as u64, |p| {
            let chi = chi_prime(dv, p);
            if chi != 0 {
                acc.add(f64::from(chi) * (p as f64).powf(-sigma));
            }
        });
    }
    LValueRecord::new(dv, sigma, acc.value(), Method::PrimeSum, acc.rounding_bound(1.0))
}

/// `sum_{n <= y} Lambda(n) chi_d(n) / (n^sigma log n)`, or the prime sum
/// alone when `include_prime_powers` is false.
pub fn log_l_sigma_approx(
    d: &FundamentalDiscriminant,
    sigma: f64,
    y: f64,
    include_prime_powers: bool,
) -> Result<LValueRecord> {
    if !include_prime_powers {
        return prime_sum_sigma(d, sigma, y);
    }
    check_sigma(sigma)?;
    let dv = d.value();
    let mut acc = NeumaierSum::new();
    if y >= 2.0 {
        let limit = y.floor() as u64;
        for_each_prime_in(2, limit, |p| {
            let chi = f64::from(chi_prime(dv, p));
            if chi == 0.0 {
                return;
            }
            let base = (p as f64).powf(-sigma);
            let (mut pk, mut k, mut term, mut sign) = (p, 1u32, base, chi);
            loop {
                acc.add(sign * term / f64::from(k));
                match pk.checked_mul(p) {
                    Some(next) if next <= limit => pk = next,
                    _ => break,
                }
                k += 1;
                term *= base;
                sign *= chi;
            }
        });
    }
    LValueRecord::new(dv, sigma, acc.value(), Method::PrimeSum, acc.rounding_bound(1.0))
}

/// Default prime-sum length `y = (log X)^{4/(sigma - 1/2)}`.
pub fn default_prime_sum_length(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(x > std::f64::consts::E) {
        return domain("default prime-sum length needs X > e");
    }
    Ok(x.ln().powf(4.0 / (sigma - 0.5)))
}

/// Smooth cutoff equal to 1 on `[0, 1]`, 0 beyond `1 + width`, and C-infinity between.
pub(crate) fn smooth_cutoff(t: f64, width: f64) -> f64 {
    if t <= 1.0 {
        return 1.0;
    }
    let u = (t - 1.0) / width;
    if u >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    1.0 - a / (a + b)
}

fn character_period_table(d: i64) -> Vec<i8> {
    let m = d.unsigned_abs();
    (0..m).map(|n| kronecker_unchecked(d, n)).collect()
}

/// `L(1, chi_d)` from two smoothed series `sum chi_d(n)/n w(n/M)` with
/// `M = 1000 |d|` and different cutoff shapes; the error estimate is their
/// difference plus rounding.
pub fn l_one_oracle(d: &FundamentalDiscriminant, budget: &PrecisionBudget) -> Result<LValueRecord> {
    budget.validate()?;
    let dv = d.value();
    if d.abs() < 3 {
        return domain("l_one_oracle needs |d| >= 3");
    }
    let m = ORACLE_LENGTH * d.abs();
    let widths = [1.0, 2.0];
    let end = (m as f64 * (1.0 + widths[1])).ceil() as u64;
    if end > MAX_TERMS {
        return Err(Error::BudgetInfeasible(format!(
            "oracle length {end} exceeds the cap of {MAX_TERMS} terms"
        )));
    }
    let table = character_period_table(dv);
    let period = table.len() as u64;
    let mf = m as f64;
    let mut sums = [NeumaierSum::new(), NeumaierSum::new()];
    for n in 1..=end {
        let chi = table[(n % period) as usize];
        if chi == 0 {
            continue;
        }
        let base = f64::from(chi) / n as f64;
        let t = n as f64 / mf;
        for (acc, &w) in sums.iter_mut().zip(&widths) {
            let weight = smooth_cutoff(t, w);
            if weight > 0.0 {
                acc.add(base * weight);
            }
        }
    }
    let (a, b) = (sums[0].value(), sums[1].value());
    let err = (a - b).abs() + sums[1].rounding_bound(1.0);
    if err > budget.abs_tol.max(budget.rel_tol * b.abs()) {
        return Err(Error::NonConvergence {
            value: b,
            err_estimate: err,
            subdivisions: 0,
        });
    }
    LValueRecord::new(dv, 1.0, b, Method::Oracle, err)
}

/// `L(1, chi_d)` from the finite class-number-formula sums:
/// `-pi |d|^{-3/2} sum a chi(a)` for `d < 0` and
/// `-d^{-1/2} sum chi(a) log sin(pi a / d)` for `d > 0`.
pub fn l_one_class_number(d: &FundamentalDiscriminant) -> f64 {
    let dv = d.value();
    let m = d.abs();
    let mut acc = NeumaierSum::new();
    if dv < 0 {
        for a in 1..m {
            let chi = kronecker_unchecked(dv, a);
            if chi != 0 {
                acc.add(f64::from(chi) * a as f64);
            }
        }
        -PI * acc.value() / (m as f64).powf(1.5)
    } else {
        // chi(a) = chi(d - a) for even characters, so fold onto a < d/2
        for a in 1..m.div_ceil(2) {
            let chi = kronecker_unchecked(dv, a);
            if chi != 0 {
                acc.add(2.0 * f64::from(chi) * (PI * a as f64 / m as f64).sin().ln());
            }
        }
        -acc.value() / (m as f64).sqrt()
    }
}

/// `chi_d(p)` tables over the primes up to `y`, for evaluating many `d`.
#[derive(Debug, Clone)]
pub struct ShortEulerProduct {
    y: f64,
    table: CharacterTable,
    log_plus: Vec<f64>,
    log_minus: Vec<f64>,
}

impl ShortEulerProduct {
    pub fn new(y: f64) -> Self {
        let primes = if y >= 2.0 { sieve_primes(y.floor() as u64) } else { Vec::new() };
        let log_plus = primes.iter().map(|&p| -(-1.0 / p as f64).ln_1p()).collect();
        let log_minus = primes.iter().map(|&p| -(1.0 / p as f64).ln_1p()).collect();
        Self {
            y,
            table: CharacterTable::new(&primes),
            log_plus,
            log_minus,
        }
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// `log L(1, chi_d; y)`.
    pub fn log_value(&self, d: i64) -> f64 {
        let mut acc = NeumaierSum::new();
        for i in 0..self.table.len() {
            match self.table.eval(i, d) {
                1 => acc.add(self.log_plus[i]),
                -1 => acc.add(self.log_minus[i]),
                _ => {}
            }
        }
        acc.value()
    }

    pub fn record(&self, d: i64) -> LValueRecord {
        let lv = self.log_value(d);
        let value = lv.exp();
        LValueRecord {
            d,
            sigma: 1.0,
            value,
            method: Method::EulerTrunc,
            err_estimate: value * self.table.len() as f64 * f64::EPSILON,
        }
    }
}

/// Prime sums `S(sigma, y)` for many `d` with shared tables.
#[derive(Debug, Clone)]
pub struct PrimeSum {
    sigma: f64,
    table: CharacterTable,
    weights: Vec<f64>,
}

impl PrimeSum {
    pub fn new(sigma: f64, y: f64) -> Result<Self> {
        check_sigma(sigma)?;
        let primes = if y >= 2.0 { sieve_primes(y.floor() as u64) } else { Vec::new() };
        let weights = primes.iter().map(|&p| (p as f64).powf(-sigma)).collect();
        Ok(Self {
            sigma,
            table: CharacterTable::new(&primes),
            weights,
        })
    }

    pub fn value(&self, d: i64) -> f64 {
        let mut acc = NeumaierSum::new();
        for (i, &w) in self.weights.iter().enumerate() {
            let chi = self.table.eval(i, d);
            if chi != 0 {
                acc.add(f64::from(chi) * w);
            }
        }
        acc.value()
    }

    pub fn record(&self, d: i64) -> LValueRecord {
        LValueRecord {
            d,
            sigma: self.sigma,
            value: self.value(d),
            method: Method::PrimeSum,
            err_estimate: self.weights.len() as f64 * f64::EPSILON,
        }
    }
}

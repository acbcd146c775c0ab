//! The square-free resonator set built from prime windows.
//!
//! With `L = log N log_2 N`, window `k` holds the primes in
//! `(e^k L, e^{k+1} L]` for `k = 1..floor((log_2 N)^delta)`, the last one
//! clipped at `e^{(log_2 N)^delta} L`. A square-free `m` over these primes is
//! a member when, for every `k`, it has fewer than
//! `a log N / (k^2 log_3 N)` prime factors in window `k`.

use crate::arith::factor::{factorize, local_mass};
use crate::arith::kronecker::kronecker_unchecked;
use crate::arith::primes::primes_in_window;
use crate::error::{domain, Error, Result};
use crate::summation::NeumaierSum;
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// One explicitly supplied prime window. A missing threshold never binds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub lo: f64,
    pub hi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    #[serde(rename = "N")]
    pub n: f64,
    pub a: f64,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_override: Option<Vec<WindowSpec>>,
}

impl BsParams {
    pub fn new(n: f64, a: f64, delta: f64) -> Result<Self> {
        let p = Self {
            n,
            a,
            delta,
            window_override: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_windows(mut self, windows: Vec<WindowSpec>) -> Result<Self> {
        self.window_override = Some(windows);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n >= 16.0) || !self.n.is_finite() {
            return domain(format!("N must be a finite real >= 16, got {}", self.n));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return domain(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        // also covers the weaker requirement a > 1 stated first
        if !(self.a > 1.0 && self.a < 1.0 / self.delta) {
            return domain(format!("need 1 < a < 1/delta = {}, got a = {}", 1.0 / self.delta, self.a));
        }
        if let Some(ws) = &self.window_override {
            if ws.is_empty() {
                return domain("window_override must list at least one window");
            }
            let scale = self.scale();
            let mut prev_hi = scale;
            for w in ws {
                if !(w.lo < w.hi) || !w.hi.is_finite() {
                    return domain(format!("window ({}, {}] is not a bounded interval", w.lo, w.hi));
                }
                if w.lo < prev_hi {
                    return domain(format!(
                        "window ({}, {}] overlaps its predecessor or reaches below log N log_2 N = {scale}",
                        w.lo, w.hi
                    ));
                }
                if let Some(t) = w.threshold {
                    if !(t > 0.0) {
                        return domain(format!("threshold must be positive, got {t}"));
                    }
                }
                prev_hi = w.hi;
            }
        }
        Ok(())
    }

    pub fn log_n(&self) -> f64 {
        self.n.ln()
    }

    pub fn log2_n(&self) -> f64 {
        self.log_n().ln()
    }

    pub fn log3_n(&self) -> f64 {
        self.log2_n().ln()
    }

    /// `L = log N log_2 N`.
    pub fn scale(&self) -> f64 {
        self.log_n() * self.log2_n()
    }

    /// Number of default windows, `floor((log_2 N)^delta)`.
    pub fn default_window_count(&self) -> usize {
        self.log2_n().powf(self.delta).floor() as usize
    }

    /// `a log N / (k^2 log_3 N)`.
    pub fn default_threshold(&self, k: usize) -> f64 {
        self.a * self.log_n() / ((k * k) as f64 * self.log3_n())
    }

    /// `psi(p)`; positive for `p > L`.
    pub fn psi_prime(&self, p: u64) -> f64 {
        let l = self.scale();
        (l / self.log3_n()).sqrt() / (p as f64).sqrt() / ((p as f64).ln() - l.ln())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsWindow {
    pub k: usize,
    pub lo: f64,
    pub hi: f64,
    /// `f64::INFINITY` when non-binding.
    pub threshold: f64,
    pub primes: Vec<u64>,
}

/// The prime support and its window partition.
#[derive(Debug, Clone, PartialEq)]
pub struct BsSupport {
    pub windows: Vec<BsWindow>,
}

impl BsSupport {
    pub fn primes(&self) -> Vec<u64> {
        self.windows.iter().flat_map(|w| w.primes.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.windows.iter().map(|w| w.primes.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Window index of `p`, if `p` is in the support.
    pub fn window_of(&self, p: u64) -> Option<usize> {
        self.windows.iter().position(|w| w.primes.binary_search(&p).is_ok())
    }
}

/// Default windows from the formulas, or the override.
pub fn bs_support_primes(params: &BsParams) -> Result<BsSupport> {
    params.validate()?;
    let windows: Vec<BsWindow> = match &params.window_override {
        Some(ws) => ws
            .iter()
            .enumerate()
            .map(|(i, w)| BsWindow {
                k: i + 1,
                lo: w.lo,
                hi: w.hi,
                threshold: w.threshold.unwrap_or(f64::INFINITY),
                primes: primes_in_window(w.lo, w.hi),
            })
            .collect(),
        None => {
            let l = params.scale();
            let top = params.log2_n().powf(params.delta);
            let edge = top.exp() * l;
            (1..=params.default_window_count())
                .map(|k| {
                    let lo = (k as f64).exp() * l;
                    let hi = ((k + 1) as f64).exp() * l;
                    let hi = hi.min(edge);
                    BsWindow {
                        k,
                        lo,
                        hi,
                        threshold: params.default_threshold(k),
                        primes: if hi > lo { primes_in_window(lo, hi) } else { Vec::new() },
                    }
                })
                .collect()
        }
    };
    let support = BsSupport { windows };
    if support.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(support)
}

/// A support together with `psi` on each prime.
#[derive(Debug, Clone)]
pub struct BsResonator {
    params: BsParams,
    support: BsSupport,
    psi: Vec<Vec<f64>>,
}

impl BsResonator {
    pub fn new(params: &BsParams) -> Result<Self> {
        let support = bs_support_primes(params)?;
        let psi = support
            .windows
            .iter()
            .map(|w| w.primes.iter().map(|&p| params.psi_prime(p)).collect())
            .collect();
        Ok(Self {
            params: params.clone(),
            support,
            psi,
        })
    }

    pub fn params(&self) -> &BsParams {
        &self.params
    }

    pub fn support(&self) -> &BsSupport {
        &self.support
    }

    fn psi_of(&self, p: u64) -> Option<(usize, f64)> {
        let k = self.support.window_of(p)?;
        let i = self.support.windows[k].primes.binary_search(&p).ok()?;
        Some((k, self.psi[k][i]))
    }

    /// `psi(m)`: multiplicative, zero off square-free integers over the support.
    pub fn psi(&self, m: u64) -> Result<f64> {
        let f = factorize(m)?;
        let mut v = 1.0;
        for &(p, e) in f.pairs() {
            if e > 1 {
                return Ok(0.0);
            }
            match self.psi_of(p) {
                Some((_, w)) => v *= w,
                None => return Ok(0.0),
            }
        }
        Ok(v)
    }

    pub fn is_member(&self, m: u64) -> Result<bool> {
        let f = factorize(m)?;
        let mut counts = vec![0usize; self.support.windows.len()];
        for &(p, e) in f.pairs() {
            if e > 1 {
                return Ok(false);
            }
            match self.psi_of(p) {
                Some((k, _)) => counts[k] += 1,
                None => return Ok(false),
            }
        }
        Ok(counts
            .iter()
            .zip(&self.support.windows)
            .all(|(&c, w)| (c as f64) < w.threshold))
    }

    /// Members in ascending order, stopping after `count_cap`.
    ///
    /// Each member is reached once, from the member obtained by removing its
    /// largest prime; membership is closed under removing primes, so a
    /// min-heap yields ascending order.
    pub fn enumerate(&self, count_cap: usize) -> BsEnumeration {
        let primes: Vec<(u64, usize, f64)> = self
            .support
            .windows
            .iter()
            .enumerate()
            .flat_map(|(k, w)| w.primes.iter().zip(&self.psi[k]).map(move |(&p, &s)| (p, k, s)))
            .collect();
        let limits: Vec<f64> = self.support.windows.iter().map(|w| w.threshold).collect();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(Node {
            value: 1,
            next: 0,
            psi: 1.0,
            counts: vec![0; limits.len()],
        }));
        let mut members = Vec::new();
        let mut overflowed = false;
        while let Some(Reverse(node)) = heap.pop() {
            if members.len() == count_cap {
                return BsEnumeration {
                    members,
                    complete: false,
                    overflowed,
                };
            }
            for (j, &(p, k, s)) in primes.iter().enumerate().skip(node.next) {
                if ((node.counts[k] + 1) as f64) >= limits[k] {
                    continue;
                }
                let Some(value) = node.value.checked_mul(u128::from(p)) else {
                    overflowed = true;
                    continue;
                };
                let mut counts = node.counts.clone();
                counts[k] += 1;
                heap.push(Reverse(Node {
                    value,
                    next: j + 1,
                    psi: node.psi * s,
                    counts,
                }));
            }
            members.push(BsMember {
                value: node.value,
                psi: node.psi,
                window_counts: node.counts,
            });
        }
        BsEnumeration {
            members,
            complete: !overflowed,
            overflowed,
        }
    }

    /// `R_d = sum_{m in R} psi(m) chi_d(m)`.
    ///
    /// The constraints act window by window, so the sum factors as
    /// `prod_k sum_{j < threshold_k} e_j(psi(p) chi_d(p) : p in window k)`
    /// with `e_j` the elementary symmetric polynomials.
    pub fn value(&self, d: i64) -> f64 {
        let mut total = 1.0;
        for (w, psi) in self.support.windows.iter().zip(&self.psi) {
            let xs: Vec<f64> = w
                .primes
                .iter()
                .zip(psi)
                .map(|(&p, &s)| s * f64::from(kronecker_unchecked(d, p)))
                .collect();
            total *= truncated_symmetric_sum(&xs, w.threshold);
        }
        total
    }

    /// `sum_{m in R} psi(m)`, the value for an all-plus character.
    pub fn total_weight(&self) -> f64 {
        let mut total = 1.0;
        for (w, psi) in self.support.windows.iter().zip(&self.psi) {
            total *= truncated_symmetric_sum(psi, w.threshold);
        }
        total
    }

    /// The product over the support of
    /// `(1 + psi h p^{-1/2} + psi^2 h) / (1 + psi^2)`, in log space.
    pub fn a_n_product(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for (w, psi) in self.support.windows.iter().zip(&self.psi) {
            for (&p, &s) in w.primes.iter().zip(psi) {
                let h = local_mass(p);
                let num = 1.0 + s * h / (p as f64).sqrt() + s * s * h;
                acc.add(num.ln() - (s * s).ln_1p());
            }
        }
        acc.value().exp()
    }
}

/// `sum_{j < limit} e_j(xs)`.
fn truncated_symmetric_sum(xs: &[f64], limit: f64) -> f64 {
    let max_j = if limit.is_finite() {
        (limit.ceil() as usize).saturating_sub(1).min(xs.len())
    } else {
        xs.len()
    };
    // e[j] after processing a prefix of xs
    let mut e = vec![0.0; max_j + 1];
    e[0] = 1.0;
    for &x in xs {
        for j in (1..=max_j).rev() {
            e[j] += x * e[j - 1];
        }
    }
    let acc: NeumaierSum = e.into_iter().collect();
    acc.value()
}

#[derive(Debug, Clone)]
struct Node {
    value: u128,
    next: usize,
    psi: f64,
    counts: Vec<usize>,
}

// ordered by value alone; values are distinct within one enumeration
impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}
impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsMember {
    pub value: u128,
    pub psi: f64,
    pub window_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsEnumeration {
    pub members: Vec<BsMember>,
    /// False when the cap was hit or a product overflowed 128 bits.
    pub complete: bool,
    pub overflowed: bool,
}

impl BsEnumeration {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn values(&self) -> Vec<u128> {
        self.members.iter().map(|m| m.value).collect()
    }

    /// The full list, or [`Error::CapExceeded`] if enumeration stopped early.
    pub fn into_complete(self, cap: usize) -> Result<Vec<BsMember>> {
        if self.complete {
            Ok(self.members)
        } else {
            Err(Error::CapExceeded { cap })
        }
    }
}

pub fn bs_psi(m: u64, params: &BsParams) -> Result<f64> {
    BsResonator::new(params)?.psi(m)
}

pub fn bs_membership(m: u64, params: &BsParams) -> Result<bool> {
    BsResonator::new(params)?.is_member(m)
}

pub fn bs_enumerate(params: &BsParams, count_cap: usize) -> Result<BsEnumeration> {
    Ok(BsResonator::new(params)?.enumerate(count_cap))
}

pub fn bs_resonator_value(d: i64, params: &BsParams) -> Result<f64> {
    Ok(BsResonator::new(params)?.value(d))
}

pub fn a_n_product(params: &BsParams) -> Result<f64> {
    Ok(BsResonator::new(params)?.a_n_product())
}

//! Desk-scale experiments over the family of fundamental discriminants.
//!
//! Discriminant ranges are processed in fixed sieve blocks; per-block
//! partials are merged in ascending block order, so every report is
//! independent of the thread count.

pub mod charsum;
pub mod output;
pub mod proportion;
pub mod resonance;
pub mod search;

pub use charsum::{charsum_empirical, residual_scaling, CharsumReport, ScalingReport};
pub use output::{to_json, top_k_csv, tsv_series, SCHEMA_VERSION};
pub use proportion::{proportion_phi, theoretical_exponent, ProportionReport, ProportionTarget};
pub use resonance::{resonance_ratio, resonance_ratio_cached, ExperimentReport, ResonanceConfig};
pub use search::{extreme_search, extreme_search_cached, SearchConfig, SearchReport, Strategy};

pub use crate::constants::littlewood_ceiling;

use crate::arith::{DiscriminantSieve, FundamentalDiscriminant, SignFilter};
use crate::error::{domain, Result};
use crate::lfunc::{l_half, LValueRecord, Method, PrimeSum, ShortEulerProduct};
use crate::special::PrecisionBudget;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// The fixed `epsilon` used wherever a numeric exponent is reported.
pub const EPSILON_EXPONENT: f64 = 0.05;

/// Euler-product length used for `L(1)` when none is given.
pub const DEFAULT_Y_ONE: f64 = 1000.0;

/// Cap on the default prime-sum length `(log X)^{4/(sigma-1/2)}`.
pub const MAX_DEFAULT_Y_SIGMA: f64 = 10_000.0;

/// Label attached to every theorem comparator.
pub const COMPARATOR_LABEL: &str = "asymptotic, not expected to bind at desk scale";

/// Which L-quantity an experiment studies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Half,
    One,
    Sigma { sigma: f64 },
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Half => "half",
            Target::One => "one",
            Target::Sigma { .. } => "sigma",
        }
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            Target::Half => 0.5,
            Target::One => 1.0,
            Target::Sigma { sigma } => sigma,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Target::Half => Method::Afe,
            Target::One => Method::EulerTrunc,
            Target::Sigma { .. } => Method::PrimeSum,
        }
    }

    /// Desk-scale default for the Euler-product or prime-sum length.
    pub fn default_length(&self, x: f64) -> Result<f64> {
        match *self {
            Target::Half => Ok(0.0),
            Target::One => Ok(DEFAULT_Y_ONE),
            Target::Sigma { sigma } => {
                Ok(crate::lfunc::default_prime_sum_length(x, sigma)?.min(MAX_DEFAULT_Y_SIGMA))
            }
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Sigma { sigma } => write!(f, "sigma({sigma})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Evaluates the target quantity for one discriminant.
#[derive(Debug, Clone)]
pub enum TargetEvaluator {
    Half(PrecisionBudget),
    One(ShortEulerProduct),
    Sigma(PrimeSum),
}

impl TargetEvaluator {
    /// `length` is the Euler-product or prime-sum length; ignored for `half`.
    pub fn new(target: Target, length: f64, budget: PrecisionBudget) -> Result<Self> {
        Ok(match target {
            Target::Half => {
                budget.validate()?;
                TargetEvaluator::Half(budget)
            }
            Target::One => {
                check_length(length)?;
                TargetEvaluator::One(ShortEulerProduct::new(length))
            }
            Target::Sigma { sigma } => {
                check_length(length)?;
                TargetEvaluator::Sigma(PrimeSum::new(sigma, length)?)
            }
        })
    }

    pub fn eval(&self, d: &FundamentalDiscriminant) -> Result<LValueRecord> {
        match self {
            TargetEvaluator::Half(b) => l_half(d, b),
            TargetEvaluator::One(p) => Ok(p.record(d.value())),
            TargetEvaluator::Sigma(s) => Ok(s.record(d.value())),
        }
    }
}

fn check_length(y: f64) -> Result<()> {
    if !(y >= 2.0) || !y.is_finite() {
        return domain(format!("length y must be a finite real >= 2, got {y}"));
    }
    Ok(())
}

/// Previously computed records keyed by `d`.
pub type RecordCache = HashMap<i64, LValueRecord>;

/// Looks `d` up in the cache, evaluating (and remembering) it on a miss.
pub(crate) fn lookup_or_eval(
    eval: &TargetEvaluator,
    cache: Option<&RecordCache>,
    d: &FundamentalDiscriminant,
    fresh: &mut Vec<LValueRecord>,
) -> Result<LValueRecord> {
    if let Some(r) = cache.and_then(|c| c.get(&d.value())) {
        return Ok(*r);
    }
    let r = eval.eval(d)?;
    fresh.push(r);
    Ok(r)
}

/// Runs `f` on each sieve block of the discriminants up to `x` and returns
/// the partials in block order.
pub(crate) fn map_blocks<T, F>(x: u64, filter: SignFilter, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[FundamentalDiscriminant]) -> Result<T> + Sync,
{
    let sieve = DiscriminantSieve::new(x, filter)?;
    (0..sieve.block_count())
        .into_par_iter()
        .map(|i| f(&sieve.block(i)))
        .collect()
}

/// Orders records by value, largest first; ties go to smaller `|d|`, then negative `d`.
pub(crate) fn by_value_desc(a: &LValueRecord, b: &LValueRecord) -> std::cmp::Ordering {
    b.value
        .total_cmp(&a.value)
        .then(a.d.unsigned_abs().cmp(&b.d.unsigned_abs()))
        .then(a.d.cmp(&b.d))
}

/// Keeps the `k` largest records.
pub(crate) fn keep_top(records: &mut Vec<LValueRecord>, k: usize) {
    records.sort_by(by_value_desc);
    records.truncate(k);
}

/// Asymptotic growth formula for the target at `x`; `None` outside its domain.
pub fn theoretical_comparator(target: Target, x: f64, sigma_b: Option<f64>) -> Option<f64> {
    let l1 = x.ln();
    if !(l1 > std::f64::consts::E) {
        return None;
    }
    let l2 = l1.ln();
    let l3 = l2.ln();
    match target {
        Target::Half => Some((0.5 * (l1 * l3 / l2).sqrt()).exp()),
        Target::One => Some(crate::constants::EULER_GAMMA.exp() * (l2 + l3 - crate::constants::const_c2().value)),
        Target::Sigma { sigma } => {
            let a = crate::constants::alpha_sigma_b(sigma, sigma_b?).ok()?;
            Some(a * l1.powf(1.0 - sigma) * l2.powf(-sigma))
        }
    }
}

/// Desk-scale Euler-product length `z = log X log_2 X / c` with
/// `c = choose_c(eta, X)`.
pub fn desk_z(x: f64, eta: f64) -> Result<f64> {
    let c = crate::constants::choose_c(eta, x)?;
    Ok(x.ln() * x.ln().ln() / c)
}

//! Searches for the largest values of the target over the family.

use super::{
    by_value_desc, keep_top, lookup_or_eval, map_blocks, RecordCache, ResonanceConfig, Target, TargetEvaluator,
};
use crate::arith::SignFilter;
use crate::error::{domain, Result};
use crate::lfunc::LValueRecord;
use crate::resonator::ResonatorSpec;
use crate::special::PrecisionBudget;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    /// Evaluates only discriminants whose `R_d^2` reaches the given quantile.
    ResonatorGuided { spec: ResonatorSpec, quantile: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(rename = "X")]
    pub x: u64,
    pub target: Target,
    pub k: usize,
    pub strategy: Strategy,
    pub filter: SignFilter,
    pub y: Option<f64>,
    pub budget: PrecisionBudget,
    /// Also run the exhaustive search and report the top-k overlap.
    pub compare: bool,
}

impl SearchConfig {
    pub fn new(x: u64, target: Target, k: usize, strategy: Strategy) -> Self {
        Self {
            x,
            target,
            k,
            strategy,
            filter: SignFilter::Both,
            y: None,
            budget: PrecisionBudget::default(),
            compare: false,
        }
    }

    fn length(&self) -> Result<f64> {
        match self.y {
            Some(y) => Ok(y),
            None => self.target.default_length(self.x as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    #[serde(rename = "X")]
    pub x: u64,
    pub target: Target,
    pub filter: SignFilter,
    pub strategy: Strategy,
    pub top_k: Vec<LValueRecord>,
    pub total: u64,
    pub evaluated: u64,
    pub fraction_saved: f64,
    /// `R_d^2` cut for guided runs.
    pub threshold: Option<f64>,
    /// Share of the exhaustive top-k recovered, when both ran.
    pub overlap: Option<f64>,
}

fn exhaustive(
    config: &SearchConfig,
    eval: &TargetEvaluator,
    cache: Option<&RecordCache>,
) -> Result<(Vec<LValueRecord>, u64, Vec<LValueRecord>)> {
    let k = config.k;
    let parts = map_blocks(config.x, config.filter, |block| {
        let mut fresh = Vec::new();
        let mut top = Vec::with_capacity(block.len());
        for d in block {
            top.push(lookup_or_eval(eval, cache, d, &mut fresh)?);
        }
        let n = top.len() as u64;
        keep_top(&mut top, k);
        Ok((top, n, fresh))
    })?;
    let mut top = Vec::new();
    let mut total = 0;
    let mut fresh = Vec::new();
    for (t, n, f) in parts {
        top.extend(t);
        total += n;
        fresh.extend(f);
    }
    keep_top(&mut top, k);
    Ok((top, total, fresh))
}

/// Top-`k` records under the configured strategy, plus the freshly
/// evaluated records.
pub fn extreme_search_cached(
    config: &SearchConfig,
    cache: Option<&RecordCache>,
) -> Result<(SearchReport, Vec<LValueRecord>)> {
    if config.k == 0 {
        return domain("k must be positive");
    }
    let eval = TargetEvaluator::new(config.target, config.length()?, config.budget)?;
    match &config.strategy {
        Strategy::Exhaustive => {
            let (top, total, fresh) = exhaustive(config, &eval, cache)?;
            Ok((
                SearchReport {
                    x: config.x,
                    target: config.target,
                    filter: config.filter,
                    strategy: config.strategy.clone(),
                    top_k: top,
                    total,
                    evaluated: total,
                    fraction_saved: 0.0,
                    threshold: None,
                    overlap: None,
                },
                fresh,
            ))
        }
        Strategy::ResonatorGuided { spec, quantile } => {
            if !(0.0..=1.0).contains(quantile) {
                return domain(format!("quantile must lie in [0, 1], got {quantile}"));
            }
            // compatibility check shared with the ratio experiment
            let mut rc = ResonanceConfig::new(config.x, spec.clone(), config.target);
            rc.filter = config.filter;
            rc.validate()?;
            let resonator = spec.build()?;
            let weights: Vec<f64> = map_blocks(config.x, config.filter, |block| {
                Ok(block.iter().map(|d| resonator.value(d.value()).powi(2)).collect::<Vec<f64>>())
            })?
            .into_iter()
            .flatten()
            .collect();
            let total = weights.len() as u64;
            let mut sorted = weights.clone();
            sorted.sort_by(f64::total_cmp);
            let idx = ((sorted.len().saturating_sub(1)) as f64 * quantile).floor() as usize;
            let threshold = sorted.get(idx).copied().unwrap_or(0.0);
            let k = config.k;
            let parts = map_blocks(config.x, config.filter, |block| {
                let mut fresh = Vec::new();
                let mut top = Vec::new();
                for d in block {
                    if resonator.value(d.value()).powi(2) >= threshold {
                        top.push(lookup_or_eval(&eval, cache, d, &mut fresh)?);
                    }
                }
                let n = top.len() as u64;
                keep_top(&mut top, k);
                Ok((top, n, fresh))
            })?;
            let mut top = Vec::new();
            let mut evaluated = 0;
            let mut fresh = Vec::new();
            for (t, n, f) in parts {
                top.extend(t);
                evaluated += n;
                fresh.extend(f);
            }
            top.sort_by(by_value_desc);
            top.truncate(k);
            let overlap = if config.compare {
                let (ex, _, f) = exhaustive(config, &eval, cache)?;
                fresh.extend(f);
                fresh.sort_by_key(|r| (r.d.unsigned_abs(), r.d));
                fresh.dedup_by_key(|r| r.d);
                let hits = top.iter().filter(|r| ex.iter().any(|e| e.d == r.d)).count();
                Some(hits as f64 / ex.len() as f64)
            } else {
                None
            };
            Ok((
                SearchReport {
                    x: config.x,
                    target: config.target,
                    filter: config.filter,
                    strategy: config.strategy.clone(),
                    top_k: top,
                    total,
                    evaluated,
                    fraction_saved: 1.0 - evaluated as f64 / total as f64,
                    threshold: Some(threshold),
                    overlap,
                },
                fresh,
            ))
        }
    }
}

pub fn extreme_search(config: &SearchConfig) -> Result<SearchReport> {
    Ok(extreme_search_cached(config, None)?.0)
}

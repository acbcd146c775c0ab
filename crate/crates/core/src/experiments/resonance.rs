//! Resonance ratios `S_1 / S_2` with `S_1 = sum value(d) R_d^2` and
//! `S_2 = sum R_d^2`.

use super::{
    by_value_desc, keep_top, lookup_or_eval, map_blocks, theoretical_comparator, RecordCache, Target,
    TargetEvaluator, COMPARATOR_LABEL,
};
use crate::arith::SignFilter;
use crate::constants::littlewood_ceiling;
use crate::error::{domain, Error, Result};
use crate::lfunc::LValueRecord;
use crate::resonator::ResonatorSpec;
use crate::special::PrecisionBudget;
use crate::summation::NeumaierSum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceConfig {
    #[serde(rename = "X")]
    pub x: u64,
    pub filter: SignFilter,
    pub spec: ResonatorSpec,
    pub target: Target,
    /// Euler-product or prime-sum length; the target's default when absent.
    pub y: Option<f64>,
    pub budget: PrecisionBudget,
    /// Global factor applied to every resonator value.
    pub resonator_scale: f64,
    pub top_k: usize,
}

impl ResonanceConfig {
    pub fn new(x: u64, spec: ResonatorSpec, target: Target) -> Self {
        Self {
            x,
            filter: SignFilter::Both,
            spec,
            target,
            y: None,
            budget: PrecisionBudget::default(),
            resonator_scale: 1.0,
            top_k: 10,
        }
    }

    pub fn length(&self) -> Result<f64> {
        match self.y {
            Some(y) => Ok(y),
            None => self.target.default_length(self.x as f64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x < 16 {
            return domain(format!("X must be at least 16, got {}", self.x));
        }
        if !(self.resonator_scale > 0.0) || !self.resonator_scale.is_finite() {
            return domain("resonator_scale must be a positive finite real");
        }
        self.spec.validate()?;
        let ok = matches!(
            (&self.spec, self.target),
            (ResonatorSpec::Bs(_), Target::Half)
                | (ResonatorSpec::CentralOne { .. }, Target::One)
                | (ResonatorSpec::SigmaBand { .. }, Target::Sigma { .. })
        );
        if !ok {
            return Err(Error::IncompatibleTarget {
                family: self.spec.family().into(),
                target: self.target.to_string(),
            });
        }
        Ok(())
    }

    pub fn evaluator(&self) -> Result<TargetEvaluator> {
        TargetEvaluator::new(self.target, self.length()?, self.budget)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ResonatorSpec,
    #[serde(rename = "X")]
    pub x: u64,
    pub target: Target,
    pub filter: SignFilter,
    pub y: f64,
    pub count: u64,
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    /// `S1 / S2`, signed.
    pub ratio: f64,
    pub abs_ratio: f64,
    pub unweighted_mean: f64,
    pub max_value: f64,
    pub top_k: Vec<LValueRecord>,
    pub theoretical_comparator: Option<f64>,
    pub comparator_label: String,
    /// `2 e^gamma log_2 X` for the `one` target.
    pub littlewood_ceiling: Option<f64>,
    /// Records above that ceiling, which would point to an evaluator fault.
    pub above_ceiling: u64,
    /// Wall-clock time; kept out of serialized payloads.
    #[serde(skip)]
    pub runtime_ms: u64,
}

#[derive(Default)]
struct Partial {
    s1: NeumaierSum,
    s2: NeumaierSum,
    values: NeumaierSum,
    count: u64,
    max_value: f64,
    top: Vec<LValueRecord>,
    fresh: Vec<LValueRecord>,
}

/// Computes the report, returning also the records evaluated afresh (those
/// not found in `cache`).
pub fn resonance_ratio_cached(
    config: &ResonanceConfig,
    cache: Option<&RecordCache>,
) -> Result<(ExperimentReport, Vec<LValueRecord>)> {
    let start = std::time::Instant::now();
    config.validate()?;
    let eval = config.evaluator()?;
    let resonator = config.spec.build()?;
    let scale = config.resonator_scale;
    let k = config.top_k;
    let partials = map_blocks(config.x, config.filter, |block| {
        let mut p = Partial {
            max_value: f64::NEG_INFINITY,
            ..Partial::default()
        };
        for d in block {
            let rec = lookup_or_eval(&eval, cache, d, &mut p.fresh)?;
            let r = scale * resonator.value(d.value());
            let w = r * r;
            p.s1.add(rec.value * w);
            p.s2.add(w);
            p.values.add(rec.value);
            p.count += 1;
            p.max_value = p.max_value.max(rec.value);
            p.top.push(rec);
        }
        keep_top(&mut p.top, k);
        Ok(p)
    })?;
    let mut s1 = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();
    let mut values = NeumaierSum::new();
    let mut count = 0;
    let mut max_value = f64::NEG_INFINITY;
    let mut top = Vec::new();
    let mut fresh = Vec::new();
    for p in partials {
        s1.merge(&p.s1);
        s2.merge(&p.s2);
        values.merge(&p.values);
        count += p.count;
        max_value = max_value.max(p.max_value);
        top.extend(p.top);
        fresh.extend(p.fresh);
    }
    top.sort_by(by_value_desc);
    top.truncate(k);
    let (s1, s2) = (s1.value(), s2.value());
    if !(s2 > 0.0) {
        return domain("resonator vanished on every discriminant (S2 = 0)");
    }
    let ratio = s1 / s2;
    let sigma_b = match config.spec {
        ResonatorSpec::SigmaBand { b, .. } => Some(b),
        _ => None,
    };
    let ceiling = match config.target {
        Target::One => littlewood_ceiling(config.x as f64).ok(),
        _ => None,
    };
    let above_ceiling = match ceiling {
        Some(c) => top.iter().filter(|r| r.value > c).count() as u64,
        None => 0,
    };
    let report = ExperimentReport {
        spec: config.spec.clone(),
        x: config.x,
        target: config.target,
        filter: config.filter,
        y: config.length()?,
        count,
        s1,
        s2,
        ratio,
        abs_ratio: ratio.abs(),
        unweighted_mean: values.value() / count as f64,
        max_value,
        top_k: top,
        theoretical_comparator: theoretical_comparator(config.target, config.x as f64, sigma_b),
        comparator_label: COMPARATOR_LABEL.into(),
        littlewood_ceiling: ceiling,
        above_ceiling,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, fresh))
}

pub fn resonance_ratio(config: &ResonanceConfig) -> Result<ExperimentReport> {
    Ok(resonance_ratio_cached(config, None)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonator::{BsParams, WindowSpec};

    fn one_config(x: u64) -> ResonanceConfig {
        ResonanceConfig::new(x, ResonatorSpec::CentralOne { z: 30.0, exponent_cap: None }, Target::One)
    }

    #[test]
    fn ratio_bounded_by_max_and_scale_free() {
        let c = one_config(20_000);
        let r = resonance_ratio(&c).unwrap();
        assert!(r.s2 > 0.0 && r.ratio <= r.max_value);
        assert!(r.top_k.windows(2).all(|w| w[0].value >= w[1].value));
        assert_eq!(r.top_k[0].value, r.max_value);
        let mut scaled = c.clone();
        scaled.resonator_scale = 37.5;
        let s = resonance_ratio(&scaled).unwrap();
        assert!((s.ratio - r.ratio).abs() <= 1e-12 * r.ratio.abs());
        assert_eq!(r.above_ceiling, 0);
    }

    #[test]
    fn incompatible_pairs_rejected() {
        let mut c = one_config(1000);
        c.target = Target::Half;
        assert!(matches!(resonance_ratio(&c), Err(Error::IncompatibleTarget { .. })));
        c.target = Target::Sigma { sigma: 0.7 };
        assert!(matches!(resonance_ratio(&c), Err(Error::IncompatibleTarget { .. })));
    }

    #[test]
    fn half_target_with_bs_set() {
        let spec = ResonatorSpec::Bs(
            BsParams::new(1000.0, 1.5, 0.5)
                .unwrap()
                .with_windows(vec![WindowSpec { lo: 20.0, hi: 60.0, threshold: Some(2.5) }])
                .unwrap(),
        );
        let mut c = ResonanceConfig::new(600, spec, Target::Half);
        c.filter = SignFilter::Positive;
        let r = resonance_ratio(&c).unwrap();
        assert!(r.ratio <= r.max_value && r.abs_ratio == r.ratio.abs());
        assert!(r.theoretical_comparator.is_some());
    }

    #[test]
    fn sigma_target() {
        let spec = ResonatorSpec::SigmaBand { y: 40.0, b: 0.5, exponent_cap: None };
        let mut c = ResonanceConfig::new(20_000, spec, Target::Sigma { sigma: 0.75 });
        c.y = Some(500.0);
        let r = resonance_ratio(&c).unwrap();
        assert!(r.ratio > r.unweighted_mean);
        assert!(r.ratio <= r.max_value);
    }

    #[test]
    fn cache_reuse_is_exact() {
        let c = one_config(5000);
        let (first, fresh) = resonance_ratio_cached(&c, None).unwrap();
        assert_eq!(fresh.len() as u64, first.count);
        let cache: RecordCache = fresh.into_iter().map(|r| (r.d, r)).collect();
        let (second, again) = resonance_ratio_cached(&c, Some(&cache)).unwrap();
        assert!(again.is_empty());
        assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
    }
}

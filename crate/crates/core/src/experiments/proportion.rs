//! Proportion of the family above the theorem thresholds.

use super::{map_blocks, TargetEvaluator, Target};
use crate::arith::SignFilter;
use crate::constants::{alpha_b, proportion_exponent, tau_eta, TauKind, EULER_GAMMA};
use crate::error::{domain, Result};
use crate::special::PrecisionBudget;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProportionTarget {
    /// Counts `L(1, chi_d; y) > e^gamma tau`.
    One { eta: f64 },
    /// Counts `S(sigma, y) > tau`.
    Sigma { sigma: f64, b: f64, eta: f64 },
}

impl ProportionTarget {
    pub fn eta(&self) -> f64 {
        match *self {
            ProportionTarget::One { eta } | ProportionTarget::Sigma { eta, .. } => eta,
        }
    }

    fn kind(&self) -> TauKind {
        match *self {
            ProportionTarget::One { .. } => TauKind::One,
            ProportionTarget::Sigma { sigma, b, .. } => TauKind::Sigma { sigma, b },
        }
    }

    fn target(&self) -> Target {
        match *self {
            ProportionTarget::One { .. } => Target::One,
            ProportionTarget::Sigma { sigma, .. } => Target::Sigma { sigma },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionReport {
    #[serde(rename = "X")]
    pub x: u64,
    pub target: ProportionTarget,
    pub filter: SignFilter,
    pub y: f64,
    pub eta: f64,
    pub tau: f64,
    /// The value each record is compared with (`e^gamma tau` for `one`).
    pub cutoff: f64,
    pub empirical_count: u64,
    pub total_count: u64,
    /// `log(count/total) / log X`; absent when the count is 0.
    pub empirical_exponent: Option<f64>,
    pub theoretical_exponent: f64,
}

/// The theorem's exponent alone, without counting.
pub fn theoretical_exponent(target: ProportionTarget) -> Result<f64> {
    if let ProportionTarget::Sigma { b, eta, .. } = target {
        let a = alpha_b(b)?;
        if !(eta > 0.0 && eta < 1.0 / a) {
            return domain(format!("need 0 < eta < 1/alpha(b) = {}, got {eta}", 1.0 / a));
        }
    }
    proportion_exponent(target.kind(), target.eta())
}

/// Counts discriminants `|d| <= X` above the threshold `tau_{eta,X}`.
pub fn proportion_phi(
    x: u64,
    target: ProportionTarget,
    filter: SignFilter,
    y: Option<f64>,
) -> Result<ProportionReport> {
    let tau = tau_eta(target.kind(), x as f64, target.eta())?;
    if !(tau > 0.0) {
        return domain(format!("threshold tau = {tau} is not positive; every value would count"));
    }
    let cutoff = match target {
        ProportionTarget::One { .. } => EULER_GAMMA.exp() * tau,
        ProportionTarget::Sigma { .. } => tau,
    };
    let theoretical = theoretical_exponent(target)?;
    let length = match y {
        Some(y) => y,
        None => target.target().default_length(x as f64)?,
    };
    let eval = TargetEvaluator::new(target.target(), length, PrecisionBudget::default())?;
    let parts = map_blocks(x, filter, |block| {
        let mut above = 0u64;
        for d in block {
            if eval.eval(d)?.value > cutoff {
                above += 1;
            }
        }
        Ok((above, block.len() as u64))
    })?;
    let (count, total) = parts.iter().fold((0, 0), |(a, t), &(pa, pt)| (a + pa, t + pt));
    let empirical_exponent = (count > 0).then(|| (count as f64 / total as f64).ln() / (x as f64).ln());
    Ok(ProportionReport {
        x,
        target,
        filter,
        y: length,
        eta: target.eta(),
        tau,
        cutoff,
        empirical_count: count,
        total_count: total,
        empirical_exponent,
        theoretical_exponent: theoretical,
    })
}

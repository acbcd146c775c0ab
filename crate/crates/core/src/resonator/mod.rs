//! Resonator families and the quadratic forms behind their constants.

pub mod bs;
pub mod euler;
pub mod quadform;

pub use bs::{
    a_n_product, bs_enumerate, bs_membership, bs_psi, bs_resonator_value, bs_support_primes, BsEnumeration,
    BsParams, BsResonator, BsSupport, WindowSpec,
};
pub use euler::{euler_r_coefficient, euler_resonator_value, EulerParams, EulerResonator};
pub use quadform::{mcz_scz, square_pair_sum, McsReport, PairSum};

use crate::error::Result;
use serde::{Deserialize, Serialize};

/// One resonator family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ResonatorSpec {
    Bs(BsParams),
    CentralOne {
        z: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent_cap: Option<u32>,
    },
    SigmaBand {
        #[serde(rename = "Y")]
        y: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent_cap: Option<u32>,
    },
}

impl ResonatorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ResonatorSpec::Bs(_) => "bs",
            ResonatorSpec::CentralOne { .. } => "central_one",
            ResonatorSpec::SigmaBand { .. } => "sigma_band",
        }
    }

    pub fn euler(&self) -> Option<EulerParams> {
        match *self {
            ResonatorSpec::Bs(_) => None,
            ResonatorSpec::CentralOne { z, .. } => Some(EulerParams::CentralOne { z }),
            ResonatorSpec::SigmaBand { y, b, .. } => Some(EulerParams::SigmaBand { y, b }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ResonatorSpec::Bs(p) => p.validate(),
            _ => self.euler().expect("euler family").validate(),
        }
    }

    /// Unit-weight resonator `R_d` builder for this spec.
    pub fn build(&self) -> Result<Resonator> {
        self.validate()?;
        Ok(match self {
            ResonatorSpec::Bs(p) => Resonator::Bs(BsResonator::new(p)?),
            _ => Resonator::Euler(EulerResonator::new(&self.euler().expect("euler family"))?),
        })
    }
}

impl From<EulerParams> for ResonatorSpec {
    fn from(p: EulerParams) -> Self {
        match p {
            EulerParams::CentralOne { z } => ResonatorSpec::CentralOne { z, exponent_cap: None },
            EulerParams::SigmaBand { y, b } => ResonatorSpec::SigmaBand { y, b, exponent_cap: None },
        }
    }
}

impl From<BsParams> for ResonatorSpec {
    fn from(p: BsParams) -> Self {
        ResonatorSpec::Bs(p)
    }
}

/// A built resonator of either kind.
#[derive(Debug, Clone)]
pub enum Resonator {
    Bs(BsResonator),
    Euler(EulerResonator),
}

impl Resonator {
    pub fn value(&self, d: i64) -> f64 {
        match self {
            Resonator::Bs(r) => r.value(d),
            Resonator::Euler(r) => r.value(d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_block_round_trip() {
        let specs = vec![
            ResonatorSpec::CentralOne { z: 40.0, exponent_cap: Some(12) },
            ResonatorSpec::SigmaBand { y: 100.0, b: 0.5, exponent_cap: None },
            ResonatorSpec::Bs(
                BsParams::new(1000.0, 1.5, 0.5)
                    .unwrap()
                    .with_windows(vec![WindowSpec { lo: 20.0, hi: 60.0, threshold: Some(2.5) }])
                    .unwrap(),
            ),
        ];
        for s in specs {
            let text = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<ResonatorSpec>(&text).unwrap(), s);
        }
        let j = serde_json::to_value(ResonatorSpec::SigmaBand { y: 9.0, b: 0.2, exponent_cap: None }).unwrap();
        assert_eq!(j["family"], "sigma_band");
        assert_eq!(j["Y"], 9.0);
    }
}

//! Completely multiplicative resonators given by finite Euler products.

use crate::arith::factor::factorize;
use crate::arith::primes::sieve_primes;
use crate::arith::CharacterTable;
use crate::error::{domain, Result};
use crate::summation::NeumaierSum;
use serde::{Deserialize, Serialize};

/// Prime values `r_p` of an Euler-product resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum EulerParams {
    /// `r_p = 1 - p/z` for `p < z`.
    CentralOne { z: f64 },
    /// `r_p = b` for `p <= Y`.
    SigmaBand {
        #[serde(rename = "Y")]
        y: f64,
        b: f64,
    },
}

impl EulerParams {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EulerParams::CentralOne { z } => {
                if !(z > 2.0) || !z.is_finite() {
                    return domain(format!("central_one needs finite z > 2, got {z}"));
                }
            }
            EulerParams::SigmaBand { y, b } => {
                if !(y > 2.0) || !y.is_finite() {
                    return domain(format!("sigma_band needs finite Y > 2, got {y}"));
                }
                if !(b > 0.0 && b < 1.0) {
                    return domain(format!("sigma_band needs 0 < b < 1, got {b}"));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            EulerParams::CentralOne { .. } => "central_one",
            EulerParams::SigmaBand { .. } => "sigma_band",
        }
    }

    /// `r_p` for a prime `p`.
    pub fn r_prime(&self, p: u64) -> f64 {
        match *self {
            EulerParams::CentralOne { z } => {
                if (p as f64) < z {
                    1.0 - p as f64 / z
                } else {
                    0.0
                }
            }
            EulerParams::SigmaBand { y, b } => {
                if p as f64 <= y {
                    b
                } else {
                    0.0
                }
            }
        }
    }

    /// Primes with `r_p > 0`, ascending.
    pub fn window(&self) -> Vec<u64> {
        match *self {
            EulerParams::CentralOne { z } => {
                let top = z.ceil() as u64 - 1;
                sieve_primes(top).into_iter().filter(|&p| (p as f64) < z).collect()
            }
            EulerParams::SigmaBand { y, .. } => sieve_primes(y.floor() as u64),
        }
    }

    /// `(p, r_p)` over the window.
    pub fn coefficients(&self) -> Vec<(u64, f64)> {
        self.window().into_iter().map(|p| (p, self.r_prime(p))).collect()
    }
}

/// `r_k`, completely multiplicative with `r_1 = 1`.
pub fn euler_r_coefficient(k: u64, params: &EulerParams) -> Result<f64> {
    params.validate()?;
    let f = factorize(k)?;
    let mut v = 1.0;
    for &(p, e) in f.pairs() {
        v *= params.r_prime(p).powi(e as i32);
    }
    Ok(v)
}

/// `R_d = prod_p (1 - r_p chi_d(p))^{-1}` with shared character tables.
#[derive(Debug, Clone)]
pub struct EulerResonator {
    params: EulerParams,
    primes: Vec<u64>,
    table: CharacterTable,
    log_plus: Vec<f64>,
    log_minus: Vec<f64>,
}

impl EulerResonator {
    pub fn new(params: &EulerParams) -> Result<Self> {
        params.validate()?;
        let coeffs = params.coefficients();
        let primes: Vec<u64> = coeffs.iter().map(|c| c.0).collect();
        Ok(Self {
            params: *params,
            table: CharacterTable::new(&primes),
            log_plus: coeffs.iter().map(|&(_, r)| -(-r).ln_1p()).collect(),
            log_minus: coeffs.iter().map(|&(_, r)| -r.ln_1p()).collect(),
            primes,
        })
    }

    pub fn params(&self) -> &EulerParams {
        &self.params
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `log R_d`.
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

    pub fn value(&self, d: i64) -> f64 {
        self.log_value(d).exp()
    }
}

pub fn euler_resonator_value(d: i64, params: &EulerParams) -> Result<f64> {
    Ok(EulerResonator::new(params)?.value(d))
}

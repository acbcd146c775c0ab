//! The smooth weight of the approximate functional equation.
//!
//! Shifting the contour integral by `s = 2t` turns it into the Mellin
//! inversion of `Gamma(1/4, .)`, so
//! `U(x) = Gamma(1/4, pi x^2) / Gamma(1/4)`.

use super::gamma::{ln_regularized_upper, regularized_upper};
use crate::error::{domain, Result};
use std::f64::consts::PI;

/// Gamma shift for even characters (`d > 0`).
pub const EVEN_SHIFT: f64 = 0.25;
/// Gamma shift for odd characters (`d < 0`).
pub const ODD_SHIFT: f64 = 0.75;

/// Constant with `U(x) <= TAIL_CONSTANT * e^-x` for all `x > 0` and both
/// shifts. The supremum of `U(x) e^x` is about 0.955 (even) and 1.022 (odd).
pub const TAIL_CONSTANT: f64 = 1.03;

fn check(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("weight needs finite x > 0, got {x}"));
    }
    Ok(())
}

/// `U(x) = Q(1/4, pi x^2)`.
pub fn weight_u(x: f64) -> Result<f64> {
    check(x)?;
    regularized_upper(EVEN_SHIFT, PI * x * x)
}

/// `ln U(x)`; stays finite past the point where `U` underflows (x near 15).
pub fn ln_weight_u(x: f64) -> Result<f64> {
    check(x)?;
    ln_regularized_upper(EVEN_SHIFT, PI * x * x)
}

/// Weight with the gamma factor `Gamma(s/2 + 3/4)` belonging to odd characters.
pub fn weight_u_odd(x: f64) -> Result<f64> {
    check(x)?;
    regularized_upper(ODD_SHIFT, PI * x * x)
}

/// The weight matching the parity of `d`.
pub fn weight_for(d: i64, x: f64) -> Result<f64> {
    if d < 0 {
        weight_u_odd(x)
    } else {
        weight_u(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::GAMMA_QUARTER;

    #[test]
    fn rejects_non_positive() {
        assert!(weight_u(0.0).is_err());
        assert!(weight_u(-1.0).is_err());
        assert!(ln_weight_u(f64::NAN).is_err());
    }

    #[test]
    fn known_value_at_one() {
        // Gamma(1/4, pi) / Gamma(1/4)
        let expected = 0.015_332_489_312_694_084_7 / GAMMA_QUARTER;
        assert!(((weight_u(1.0).unwrap() - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn small_x_leading_term() {
        // 1 - U(x) ~ pi^(1/4) x^(1/2) / Gamma(5/4)
        for x in [1e-8, 1e-6, 1e-4] {
            let defect = 1.0 - weight_u(x).unwrap();
            let lead = PI.powf(0.25) * x.sqrt() / (GAMMA_QUARTER / 4.0);
            assert!((defect / lead - 1.0).abs() < 2e-3, "x={x}");
        }
        assert!(1.0 - weight_u(1e-4).unwrap() < 0.02);
    }

    #[test]
    fn exponential_decay() {
        assert!(weight_u(20.0).unwrap() <= 1e3 * (-20.0f64).exp());
        for i in 0..=4000 {
            let x = 1e-3 + i as f64 * 0.01;
            let bound = TAIL_CONSTANT.ln() - x;
            assert!(ln_weight_u(x).unwrap() <= bound, "x={x}");
            let odd = weight_u_odd(x).unwrap();
            assert!(odd == 0.0 || odd.ln() <= bound, "x={x}");
        }
    }

    #[test]
    fn strictly_decreasing_on_grid() {
        let mut prev_ln = f64::INFINITY;
        let mut prev = 1.0;
        for i in 1..=3000 {
            let x = i as f64 * 0.01;
            let l = ln_weight_u(x).unwrap();
            let u = weight_u(x).unwrap();
            assert!(l < prev_ln && l < 0.0, "x={x}");
            assert!(u <= prev && u < 1.0);
            prev_ln = l;
            prev = u;
        }
    }

    #[test]
    fn parity_dispatch() {
        assert_eq!(weight_for(5, 0.3).unwrap(), weight_u(0.3).unwrap());
        assert_eq!(weight_for(-3, 0.3).unwrap(), weight_u_odd(0.3).unwrap());
    }
}

//! Numeric constants, integrals and parameter selectors of the method.
//!
//! Integrals are evaluated by quadrature and, where a closed form exists,
//! compared against it.

use crate::error::{domain, Result};
use crate::special::{integrate, PrecisionBudget, Upper};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Euler's constant to 20 digits (rounded to double).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// `zeta(2) = pi^2 / 6`.
pub const ZETA_2: f64 = PI * PI / 6.0;

/// Tail split for the `C_1` integral; beyond it `tanh y - 1 ~ -2 e^{-2y}`.
pub const C1_TAIL_SPLIT: f64 = 1.0;

/// Tolerance within which a closed form and its quadrature must agree.
pub const DISCREPANCY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantMethod {
    ClosedForm,
    Quadrature,
    Both,
}

impl ConstantMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstantMethod::ClosedForm => "closed_form",
            ConstantMethod::Quadrature => "quadrature",
            ConstantMethod::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub name: String,
    pub value: f64,
    pub method: ConstantMethod,
    /// Closed form vs quadrature for `both`; for `C2`, the gap between its two
    /// closed forms; otherwise 0.
    pub discrepancy: f64,
}

impl ConstantReport {
    fn closed(name: &str, value: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            method: ConstantMethod::ClosedForm,
            discrepancy: 0.0,
        }
    }

    fn compared(name: &str, quadrature: f64, closed_form: f64) -> Self {
        Self {
            name: name.to_string(),
            value: quadrature,
            method: ConstantMethod::Both,
            discrepancy: (quadrature - closed_form).abs(),
        }
    }

    /// True unless this is a compared constant whose discrepancy exceeds `tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.discrepancy <= tol
    }
}

/// Budget used for the constants' integrals.
pub fn default_budget() -> PrecisionBudget {
    PrecisionBudget {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_subdivisions: 2000,
    }
}

/// The two pieces `int_0^1 tanh(y)/y dy` and `int_1^inf (tanh y - 1)/y dy`.
pub fn c1_parts(budget: &PrecisionBudget) -> Result<(f64, f64)> {
    let half = budget.scaled(0.5);
    let head = integrate(|y: f64| y.tanh() / y, 0.0, Upper::Finite(C1_TAIL_SPLIT), &half)?;
    // tanh y - 1 = -2 / (e^{2y} + 1), without cancellation
    let tail = integrate(
        |y: f64| -2.0 / ((2.0 * y).exp() + 1.0) / y,
        C1_TAIL_SPLIT,
        Upper::Infinite {
            split: 2.0 * C1_TAIL_SPLIT,
        },
        &half,
    )?;
    Ok((head.value, tail.value))
}

/// `C_1`, compared with the closed form `log(4 e^gamma / pi)`.
pub fn const_c1_with(budget: &PrecisionBudget) -> Result<ConstantReport> {
    let (head, tail) = c1_parts(budget)?;
    let closed = (4.0 * EULER_GAMMA.exp() / PI).ln();
    Ok(ConstantReport::compared("C1", head + tail, closed))
}

pub fn const_c1() -> Result<ConstantReport> {
    const_c1_with(&default_budget())
}

/// `3 log 2 - pi/2`.
fn mid() -> f64 {
    3.0 * LN_2 - PI / 2.0
}

/// `C_2 = pi/4 + log 2 / 2 + log(3 log 2 - pi/2)`, also computed as
/// `c_3 + log(2(3 log 2 - pi/2))`.
pub fn const_c2() -> ConstantReport {
    let theorem_form = PI / 4.0 + LN_2 / 2.0 + mid().ln();
    let c3 = PI / 4.0 - LN_2 / 2.0;
    let second_form = c3 + (2.0 * mid()).ln();
    ConstantReport {
        name: "C2".into(),
        value: theorem_form,
        method: ConstantMethod::ClosedForm,
        discrepancy: (theorem_form - second_form).abs(),
    }
}

/// `c_3 = int_0^1 u / (2 - 2u + u^2) du = pi/4 - log 2 / 2`.
pub fn const_c3_with(budget: &PrecisionBudget) -> Result<ConstantReport> {
    let q = integrate(|u| u / (2.0 - 2.0 * u + u * u), 0.0, Upper::Finite(1.0), budget)?;
    Ok(ConstantReport::compared("c3", q.value, PI / 4.0 - LN_2 / 2.0))
}

pub fn const_c3() -> Result<ConstantReport> {
    const_c3_with(&default_budget())
}

/// `c' = int_0^1 2u(1-u) / (2 - 2u + u^2) du = log 2 + pi/2 - 2`.
pub fn const_cprime_with(budget: &PrecisionBudget) -> Result<ConstantReport> {
    let q = integrate(
        |u| 2.0 * u * (1.0 - u) / (2.0 - 2.0 * u + u * u),
        0.0,
        Upper::Finite(1.0),
        budget,
    )?;
    Ok(ConstantReport::compared("c_prime", q.value, LN_2 + PI / 2.0 - 2.0))
}

pub fn const_cprime() -> Result<ConstantReport> {
    const_cprime_with(&default_budget())
}

/// `c_2 = int_0^1 u(2-u)^2 / (2 - 2u + u^2) du`.
///
/// Dividing out the denominator gives `u - 2 + (4 - 2u)/(2 - 2u + u^2)`,
/// hence the closed form `log 2 + pi/2 - 3/2` used for comparison.
pub fn const_c2_integral_with(budget: &PrecisionBudget) -> Result<ConstantReport> {
    let q = integrate(
        |u| u * (2.0 - u) * (2.0 - u) / (2.0 - 2.0 * u + u * u),
        0.0,
        Upper::Finite(1.0),
        budget,
    )?;
    Ok(ConstantReport::compared("c2", q.value, LN_2 + PI / 2.0 - 1.5))
}

pub fn const_c2_integral() -> Result<ConstantReport> {
    const_c2_integral_with(&default_budget())
}

/// `2(3 log 2 - pi/2)`, the lower limit for `c`.
pub fn threshold_c() -> ConstantReport {
    ConstantReport::closed("c_threshold", 2.0 * mid())
}

/// `sqrt(2 / log 2)`.
pub fn sqrt_two_over_log_two() -> ConstantReport {
    ConstantReport::closed("sqrt_2_over_log2", (2.0 / LN_2).sqrt())
}

/// `-log(2 log 2)`, the constant the `C_2` bound is compared with.
pub fn competing_constant() -> ConstantReport {
    ConstantReport::closed("neg_log_2log2", -(2.0 * LN_2).ln())
}

fn log2_of(x: f64) -> Result<f64> {
    if !(x > std::f64::consts::E) {
        return domain(format!("log_2 X needs X > e, got {x}"));
    }
    Ok(x.ln().ln())
}

fn log3_of(x: f64) -> Result<f64> {
    if !(x > std::f64::consts::E.exp()) {
        return domain(format!("log_3 X needs X > e^e, got {x}"));
    }
    Ok(x.ln().ln().ln())
}

/// `c` with `log c = log(2(3 log 2 - pi/2)) + 5 eta - 1/sqrt(log_2 X)`.
pub fn choose_c(eta: f64, x: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    let l2 = log2_of(x)?;
    Ok(((2.0 * mid()).ln() + 5.0 * eta - 1.0 / l2.sqrt()).exp())
}

fn check_b(b: f64, allow_zero: bool) -> Result<()> {
    let low_ok = if allow_zero { b >= 0.0 } else { b > 0.0 };
    if !(low_ok && b < 1.0) {
        return domain(format!("b must lie in {}0, 1), got {b}", if allow_zero { "[" } else { "(" }));
    }
    Ok(())
}

/// `alpha(b) = 2 log((1+b)^2 / (1+b^2))`.
pub fn alpha_b(b: f64) -> Result<f64> {
    check_b(b, true)?;
    Ok(2.0 * ((1.0 + b) * (1.0 + b) / (1.0 + b * b)).ln())
}

/// `theta(b) = log((1+b^2) / (1-b^2)^2)`.
pub fn theta_b(b: f64) -> Result<f64> {
    check_b(b, true)?;
    Ok(((1.0 + b * b) / ((1.0 - b * b) * (1.0 - b * b))).ln())
}

/// `alpha(sigma, b) = b / (1 - sigma) * alpha(b)^{sigma - 1}`.
pub fn alpha_sigma_b(sigma: f64, b: f64) -> Result<f64> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return domain(format!("sigma must lie in (1/2, 1), got {sigma}"));
    }
    check_b(b, false)?;
    Ok(b / (1.0 - sigma) * alpha_b(b)?.powf(sigma - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TauKind {
    One,
    Sigma { sigma: f64, b: f64 },
}

/// Threshold `tau_{eta, X}`:
/// `log_2 X + log_3 X - C_2 - eta` for `one`, and
/// `alpha(sigma,b) (1 - eta alpha(b))^{1-sigma} (log X)^{1-sigma} (log_2 X)^{-sigma}`
/// for `sigma`.
pub fn tau_eta(kind: TauKind, x: f64, eta: f64) -> Result<f64> {
    match kind {
        TauKind::One => {
            if !eta.is_finite() {
                return domain(format!("eta must be finite, got {eta}"));
            }
            Ok(log2_of(x)? + log3_of(x)? - const_c2().value - eta)
        }
        TauKind::Sigma { sigma, b } => {
            let ab = alpha_b(b)?;
            let asb = alpha_sigma_b(sigma, b)?;
            if !(eta > 0.0 && eta < 1.0 / ab) {
                return domain(format!("need 0 < eta < 1/alpha(b) = {}, got {eta}", 1.0 / ab));
            }
            let l2 = log2_of(x)?;
            Ok(asb * (1.0 - eta * ab).powf(1.0 - sigma) * x.ln().powf(1.0 - sigma) * l2.powf(-sigma))
        }
    }
}

/// Exponent of the proportion lower bound: `-e^{-eta}/2` for `one`,
/// `-(1 - eta alpha(b))/2` for `sigma`.
pub fn proportion_exponent(kind: TauKind, eta: f64) -> Result<f64> {
    match kind {
        TauKind::One => Ok(-(-eta).exp() / 2.0),
        TauKind::Sigma { b, .. } => Ok(-(1.0 - eta * alpha_b(b)?) / 2.0),
    }
}

/// `2 e^gamma log_2 X`, a ceiling for `L(1, chi_d)` with `|d| <= X`.
pub fn littlewood_ceiling(x: f64) -> Result<f64> {
    log3_of(x)?;
    Ok(2.0 * EULER_GAMMA.exp() * log2_of(x)?)
}

/// Every constant in display order.
pub fn all_reports() -> Result<Vec<ConstantReport>> {
    Ok(vec![
        const_c1()?,
        const_c2(),
        const_c3()?,
        const_cprime()?,
        const_c2_integral()?,
        threshold_c(),
        sqrt_two_over_log_two(),
        competing_constant(),
        ConstantReport::closed("euler_gamma", EULER_GAMMA),
        ConstantReport::closed("zeta_2", ZETA_2),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_value_and_parts() {
        let r = const_c1().unwrap();
        assert!((r.value - 0.8187).abs() < 5e-4);
        assert!(r.discrepancy < 1e-11);
        let (head, tail) = c1_parts(&default_budget()).unwrap();
        assert!(head.is_finite() && tail < 0.0);
        let coarse = const_c1_with(&PrecisionBudget::new(1e-8, 1e-8, 2000).unwrap()).unwrap();
        let fine = const_c1_with(&PrecisionBudget::new(5e-9, 5e-9, 2000).unwrap()).unwrap();
        assert!((coarse.value - fine.value).abs() < 1e-6);
    }

    #[test]
    fn c2_forms_agree() {
        let r = const_c2();
        assert!((r.value - 0.455967).abs() < 1e-6);
        assert!(r.discrepancy < 1e-12);
        let c3 = PI / 4.0 - LN_2 / 2.0;
        assert!((r.value - c3 - threshold_c().value.ln()).abs() < 1e-12);
    }

    #[test]
    fn integrals() {
        let c3 = const_c3().unwrap();
        assert!((c3.value - 0.438825).abs() < 1e-6 && c3.discrepancy < 1e-9);
        let cp = const_cprime().unwrap();
        assert!((cp.value - (LN_2 + PI / 2.0 - 2.0)).abs() < 1e-9);
        let c2 = const_c2_integral().unwrap();
        assert!(c2.discrepancy < 1e-9);
        let refined = const_c2_integral_with(&default_budget().scaled(0.5)).unwrap();
        assert!((refined.value - c2.value).abs() < 1e-9);
    }

    #[test]
    fn threshold_and_choice() {
        assert!((threshold_c().value - 1.01729).abs() < 1e-4);
        let x = 1e6;
        let c = choose_c(0.2, x).unwrap();
        let expected = ((2.0 * (3.0 * LN_2 - PI / 2.0)).ln() + 1.0 - 1.0 / x.ln().ln().sqrt()).exp();
        assert_eq!(c.to_bits(), expected.to_bits());
        for &eta in &[0.05, 0.1, 0.3] {
            for &x in &[1e3f64, 1e6, 1e12, 1e100] {
                let above = 5.0 * eta > 1.0 / x.ln().ln().sqrt();
                assert_eq!(choose_c(eta, x).unwrap() > threshold_c().value, above);
            }
        }
        assert!(choose_c(0.1, 2.0).is_err());
        // eta -> 0 and X -> infinity together
        let gaps: Vec<f64> = [(1e-2, 1e10), (1e-3, 1e100), (1e-4, 1e300)]
            .iter()
            .map(|&(e, x)| (choose_c(e, x).unwrap() - threshold_c().value).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    }

    #[test]
    fn alpha_theta() {
        assert!((alpha_b(1.0 - 1e-9).unwrap() - 2.0 * LN_2).abs() < 1e-8);
        assert_eq!(theta_b(0.0).unwrap(), 0.0);
        let lim = alpha_sigma_b(0.5 + 1e-9, 1.0 - 1e-9).unwrap();
        assert!((lim - sqrt_two_over_log_two().value).abs() < 1e-6);
        assert!((sqrt_two_over_log_two().value - 1.6986).abs() < 1e-3);
        let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
        for w in grid.windows(2) {
            assert!(alpha_b(w[1]).unwrap() > alpha_b(w[0]).unwrap());
            assert!(theta_b(w[1]).unwrap() > theta_b(w[0]).unwrap());
        }
        assert!(alpha_b(1.0).is_err() && theta_b(-0.1).is_err() && alpha_sigma_b(0.5, 0.5).is_err());
    }

    #[test]
    fn tau_and_exponents() {
        let x = 1e6f64;
        let t = tau_eta(TauKind::One, x, 0.0).unwrap();
        assert!((t - (x.ln().ln() + x.ln().ln().ln() - const_c2().value)).abs() < 1e-15);
        assert!(tau_eta(TauKind::One, 15.0, 0.0).is_err());
        assert!(tau_eta(TauKind::One, 16.0, 0.0).is_ok());
        let kind = TauKind::Sigma { sigma: 0.75, b: 0.5 };
        let edge = 1.0 / alpha_b(0.5).unwrap();
        let near = tau_eta(kind, x, edge * (1.0 - 1e-12)).unwrap();
        assert!(near > 0.0 && near < 1e-2);
        assert!(tau_eta(kind, x, edge).is_err());
        let e = proportion_exponent(TauKind::One, 0.044).unwrap();
        assert!((e + 0.4785).abs() < 5e-4);
    }

    #[test]
    fn littlewood() {
        let x = 1e6f64;
        assert_eq!(littlewood_ceiling(x).unwrap(), 2.0 * EULER_GAMMA.exp() * x.ln().ln());
        assert!(littlewood_ceiling(1e7).unwrap() > littlewood_ceiling(1e6).unwrap());
        assert!(littlewood_ceiling(10.0).is_err());
    }

    #[test]
    fn all_compared_within_tolerance() {
        for r in all_reports().unwrap() {
            assert!(r.within(DISCREPANCY_TOLERANCE), "{}", r.name);
        }
    }
}

//! Gamma and incomplete gamma functions for real arguments.

use crate::error::{domain, Error, Result};

/// `Gamma(1/4)`.
pub const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Below `x < a + 1` the lower series is summed; above it the Legendre
/// continued fraction for the upper function is used.
const SERIES_SWITCH_OFFSET: f64 = 1.0;
const MAX_ITER: usize = 10_000;

/// `ln Gamma(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let s = (std::f64::consts::PI * x).sin();
        return (std::f64::consts::PI / s).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Lower series: `sum_n x^n / (a (a+1) ... (a+n))`, so that
/// `gamma_lower(a, x) = x^a e^-x * series`.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON * 0.5 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        value: sum,
        err_estimate: term.abs(),
        subdivisions: MAX_ITER,
    })
}

/// Modified Lentz evaluation of the continued fraction for `Gamma(a, x)`,
/// so that `Gamma(a, x) = x^a e^-x * cf`.
fn upper_cf(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        value: h,
        err_estimate: f64::NAN,
        subdivisions: MAX_ITER,
    })
}

fn check(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("incomplete gamma needs a > 0, got {a}"));
    }
    if !(x >= 0.0) {
        return domain(format!("incomplete gamma needs x >= 0, got {x}"));
    }
    Ok(())
}

/// `ln Gamma(a, x)`, finite even where `Gamma(a, x)` underflows.
pub fn ln_upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x == 0.0 {
        return Ok(ln_gamma(a));
    }
    let prefactor = -x + a * x.ln();
    if x < a + SERIES_SWITCH_OFFSET {
        let lower = (prefactor + lower_series(a, x)?.ln()).exp();
        let full = gamma(a);
        Ok((full - lower).ln())
    } else {
        Ok(prefactor + upper_cf(a, x)?.ln())
    }
}

/// `Gamma(a, x) = int_x^inf t^(a-1) e^-t dt` for `a > 0`, `x >= 0`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(ln_upper_incomplete_gamma(a, x)?.exp())
}

/// Lower incomplete gamma `gamma(a, x)` by the power series (all `x`).
pub fn lower_incomplete_gamma_series(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((-x + a * x.ln() + lower_series(a, x)?.ln()).exp())
}

/// Regularized upper function `Q(a, x) = Gamma(a, x) / Gamma(a)`.
pub fn regularized_upper(a: f64, x: f64) -> Result<f64> {
    Ok(ln_regularized_upper(a, x)?.exp())
}

/// `ln Q(a, x)`.
pub fn ln_regularized_upper(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let prefactor = -x + a * x.ln() - ln_gamma(a);
    if x < a + SERIES_SWITCH_OFFSET {
        let p = (prefactor + lower_series(a, x)?.ln()).exp();
        Ok((-p).ln_1p())
    } else {
        Ok(prefactor + upper_cf(a, x)?.ln())
    }
}

//! Character sums over the family against the main term `X/zeta(2) h(n)`.

use super::{map_blocks, EPSILON_EXPONENT};
use crate::arith::{batch_character, factorize, orthogonality_mass, SignFilter};
use crate::constants::ZETA_2;
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharsumReport {
    #[serde(rename = "X")]
    pub x: u64,
    pub n: u64,
    pub filter: SignFilter,
    pub empirical_sum: i64,
    /// Number of discriminants summed over.
    pub count: u64,
    pub main_term: f64,
    pub residual: f64,
    pub is_square: bool,
}

/// `sum chi_d(n)` over fundamental `|d| <= X` passing `filter`.
///
/// For a square `n` the main term is `X/zeta(2) h(n)`, halved when only one
/// sign is kept; otherwise it is 0.
pub fn charsum_empirical(x: u64, n: u64, filter: SignFilter) -> Result<CharsumReport> {
    if x < 16 {
        return domain(format!("charsum needs X >= 16, got {x}"));
    }
    let f = factorize(n)?;
    let partials = map_blocks(x, filter, |block| {
        let ds: Vec<i64> = block.iter().map(|d| d.value()).collect();
        let chis = batch_character(&ds, n)?;
        Ok((chis.iter().map(|&c| i64::from(c)).sum::<i64>(), ds.len() as u64))
    })?;
    let (empirical_sum, count) = partials.iter().fold((0i64, 0u64), |(s, c), &(ps, pc)| (s + ps, c + pc));
    let is_square = f.is_square();
    let main_term = if is_square {
        x as f64 / ZETA_2 * orthogonality_mass(&f) * filter.density()
    } else {
        0.0
    };
    Ok(CharsumReport {
        x,
        n,
        filter,
        empirical_sum,
        count,
        main_term,
        residual: empirical_sum as f64 - main_term,
        is_square,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n: u64,
    pub points: Vec<CharsumReport>,
    /// Slope of `log|residual|` against `log X`; absent when degenerate.
    pub slope: Option<f64>,
    /// All residuals vanish.
    pub degenerate: bool,
    /// `1/2 + epsilon`, shown for reference only.
    pub reference_exponent: f64,
}

/// Least-squares slope of `log|residual|` against `log X` over the grid.
pub fn residual_scaling(n: u64, x_grid: &[u64], filter: SignFilter) -> Result<ScalingReport> {
    if x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("X grid must be strictly ascending");
    }
    let points = x_grid
        .iter()
        .map(|&x| charsum_empirical(x, n, filter))
        .collect::<Result<Vec<_>>>()?;
    fit_scaling(n, points)
}

/// Fits already computed points; see [`residual_scaling`].
pub fn fit_scaling(n: u64, points: Vec<CharsumReport>) -> Result<ScalingReport> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.residual != 0.0)
        .map(|p| ((p.x as f64).ln(), p.residual.abs().ln()))
        .collect();
    let degenerate = !points.is_empty() && usable.is_empty();
    let slope = if degenerate {
        None
    } else if usable.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: usable.len(),
        });
    } else {
        Some(least_squares_slope(&usable))
    };
    Ok(ScalingReport {
        n,
        points,
        slope,
        degenerate,
        reference_exponent: 0.5 + EPSILON_EXPONENT,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{enumerate_fundamental_discriminants, kronecker};

    #[test]
    fn matches_direct_sum() {
        for n in [1u64, 2, 3, 4, 12, 45] {
            let r = charsum_empirical(3000, n, SignFilter::Both).unwrap();
            let direct: i64 = enumerate_fundamental_discriminants(3000, SignFilter::Both)
                .unwrap()
                .iter()
                .map(|d| i64::from(kronecker(d.value(), n).unwrap()))
                .sum();
            assert_eq!(r.empirical_sum, direct);
            assert_eq!(r.residual, r.empirical_sum as f64 - r.main_term);
        }
    }

    #[test]
    fn main_terms() {
        let r = charsum_empirical(100_000, 1, SignFilter::Both).unwrap();
        assert!((r.empirical_sum as f64 / 60_793.0 - 1.0).abs() < 0.01);
        let r = charsum_empirical(100_000, 4, SignFilter::Both).unwrap();
        let expected = 100_000.0 / ZETA_2 * 2.0 / 3.0;
        assert!((r.main_term - expected).abs() < 1e-9);
        assert!(r.residual.abs() / r.main_term < 0.03);
        let r = charsum_empirical(100_000, 2, SignFilter::Both).unwrap();
        assert_eq!(r.main_term, 0.0);
        assert!((r.empirical_sum.unsigned_abs() as f64) < 0.01 * 100_000.0);
        let pos = charsum_empirical(100_000, 1, SignFilter::Positive).unwrap();
        assert!((pos.empirical_sum as f64 / pos.main_term - 1.0).abs() < 0.02);
    }

    #[test]
    fn squares_near_main_term() {
        for n in [1u64, 4, 9, 36] {
            let r = charsum_empirical(100_000, n, SignFilter::Both).unwrap();
            let q = r.empirical_sum as f64 / r.main_term;
            assert!((0.9..=1.1).contains(&q), "n={n}: {q}");
        }
    }

    #[test]
    fn degenerate_flag() {
        let mut p = charsum_empirical(1000, 4, SignFilter::Both).unwrap();
        p.residual = 0.0;
        let r = fit_scaling(4, vec![p.clone(), p.clone(), p]).unwrap();
        assert!(r.degenerate && r.slope.is_none());
    }

    #[test]
    fn scaling_fits() {
        let r = residual_scaling(1, &[10_000, 100_000, 1_000_000], SignFilter::Both).unwrap();
        assert!(r.slope.unwrap().is_finite() && !r.degenerate);
        let r = residual_scaling(3, &[10_000, 31_000, 100_000, 310_000], SignFilter::Both).unwrap();
        assert!(r.slope.unwrap().is_finite());
        assert!((r.reference_exponent - 0.55).abs() < 1e-15);
        assert!(matches!(
            residual_scaling(3, &[10_000, 30_000], SignFilter::Both),
            Err(Error::TooFewPoints { .. })
        ));
    }
}

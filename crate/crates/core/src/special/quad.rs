//! Adaptive Gauss-Kronrod (7/15) quadrature with a geometric tail for
//! semi-infinite ranges.

use crate::error::{domain, Error, Result};
use crate::summation::NeumaierSum;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Accuracy request for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl PrecisionBudget {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let b = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0) || !(self.rel_tol >= 0.0) {
            return domain("tolerances must be non-negative");
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return domain("at least one of abs_tol, rel_tol must be positive");
        }
        if self.max_subdivisions == 0 {
            return domain("max_subdivisions must be positive");
        }
        Ok(())
    }

    /// Same budget with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

/// Upper limit of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    /// `+inf`; the integrand is handled adaptively on `[a, split]` and by
    /// doubling-width panels beyond, which assumes exponential decay past `split`.
    Infinite { split: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One G7/K15 panel; returns (Kronrod value, |K15 - G7|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, budget: &PrecisionBudget) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(f, a, b);
    heap.push(Panel { a, b, value: v, err: e });
    let mut evaluations = 15;
    let mut subdivisions = 0;
    loop {
        let total: NeumaierSum = heap.iter().map(|p| p.value).collect();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        let value = total.value();
        let err = err + total.rounding_bound(value.abs().max(f64::MIN_POSITIVE));
        if err <= budget.target(value) {
            return Ok(Integral {
                value,
                err_estimate: err,
                evaluations,
            });
        }
        if subdivisions >= budget.max_subdivisions {
            return Err(Error::NonConvergence {
                value,
                err_estimate: err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval no longer splittable in floating point
            return Err(Error::NonConvergence {
                value,
                err_estimate: err,
                subdivisions,
            });
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = gk15(f, lo, hi);
            heap.push(Panel { a: lo, b: hi, value: v, err: e });
        }
        evaluations += 30;
        subdivisions += 1;
    }
}

/// Integrates `f` over `[a, upper]` to `max(abs_tol, rel_tol |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, upper: Upper, budget: &PrecisionBudget) -> Result<Integral> {
    budget.validate()?;
    match upper {
        Upper::Finite(b) => {
            if a == b {
                return Ok(Integral {
                    value: 0.0,
                    err_estimate: 0.0,
                    evaluations: 0,
                });
            }
            if !(a.is_finite() && b.is_finite()) {
                return domain("finite limits required");
            }
            adaptive(&f, a, b, budget)
        }
        Upper::Infinite { split } => {
            if !(split > a) {
                return domain(format!("tail split {split} must exceed lower limit {a}"));
            }
            let head_budget = budget.scaled(0.5);
            let head = adaptive(&f, a, split, &head_budget)?;
            let mut total = NeumaierSum::new();
            total.add(head.value);
            let mut err = head.err_estimate;
            let mut evaluations = head.evaluations;
            let mut lo = split;
            let mut width = (split - a).max(1.0);
            let mut quiet = 0;
            for k in 0..200 {
                let piece_budget = PrecisionBudget {
                    abs_tol: budget.abs_tol * 0.25 * 0.5f64.powi(k.min(60)),
                    rel_tol: budget.rel_tol * 0.25,
                    max_subdivisions: budget.max_subdivisions,
                };
                let piece = adaptive(&f, lo, lo + width, &piece_budget)?;
                total.add(piece.value);
                err += piece.err_estimate;
                evaluations += piece.evaluations;
                let value = total.value();
                if piece.value.abs() <= 1e-3 * budget.target(value) {
                    quiet += 1;
                    // two consecutive negligible panels of growing width
                    if quiet >= 2 {
                        return Ok(Integral {
                            value,
                            err_estimate: err + piece.value.abs(),
                            evaluations,
                        });
                    }
                } else {
                    quiet = 0;
                }
                lo += width;
                width *= 2.0;
            }
            Err(Error::NonConvergence {
                value: total.value(),
                err_estimate: f64::INFINITY,
                subdivisions: 200,
            })
        }
    }
}

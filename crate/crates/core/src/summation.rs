//! Compensated floating point accumulation.
//!
//! Every long sum in the crate goes through [`NeumaierSum`] so that results
//! depend only on the order of the summands, never on their magnitudes.
//! Parallel reductions fix that order by merging per-block partials in
//! ascending block index.

/// Neumaier's improved Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
    terms: usize,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    pub fn merge(&mut self, other: &NeumaierSum) {
        let terms = self.terms + other.terms;
        self.add(other.sum);
        self.add(other.compensation);
        self.terms = terms;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Rounding-error allowance for this sum: `terms * 2^-52 * scale`.
    pub fn rounding_bound(&self, scale: f64) -> f64 {
        self.terms as f64 * f64::EPSILON * scale
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<NeumaierSum>().value()
}

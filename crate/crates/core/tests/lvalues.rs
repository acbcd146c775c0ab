use lresonance::arith::kronecker::kronecker_unchecked;
use lresonance::arith::{enumerate_fundamental_discriminants, FundamentalDiscriminant, SignFilter};
use lresonance::lfunc::{l_half, l_one_class_number, l_one_oracle, l_one_truncated, prime_sum_sigma};
use lresonance::special::PrecisionBudget;

/// 1 on [0, 1], 0 past 1 + width, smooth between.
fn bump(t: f64, width: f64) -> f64 {
    if t <= 1.0 {
        return 1.0;
    }
    let u = (t - 1.0) / width;
    if u >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    b / (a + b)
}

/// `sum chi_d(n) n^{-1/2} w(n/M)` for two cutoff shapes.
fn smoothed_half(d: i64) -> (f64, f64) {
    let m = d.unsigned_abs();
    let table: Vec<f64> = (0..m).map(|n| f64::from(kronecker_unchecked(d, n))).collect();
    let shapes = [(50.0 * m as f64, 1.0), (40.0 * m as f64, 2.0)];
    let mut out = [0.0; 2];
    for (slot, &(len, width)) in out.iter_mut().zip(&shapes) {
        let end = (len * (1.0 + width)) as u64;
        let mut acc = 0.0;
        let mut comp = 0.0;
        for n in 1..=end {
            let chi = table[(n % m) as usize];
            if chi == 0.0 {
                continue;
            }
            let term = chi * bump(n as f64 / len, width) / (n as f64).sqrt();
            // Kahan
            let y = term - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        *slot = acc;
    }
    (out[0], out[1])
}

#[test]
fn l_half_matches_smoothed_series_small_d() {
    let budget = PrecisionBudget::default();
    for d in [5i64, 8, 12, 13, 101, 1009, -3, -4, -7, -8, -23, -163] {
        let (a, b) = smoothed_half(d);
        assert!((a - b).abs() < 1e-8, "oracle shapes disagree at d={d}");
        let r = l_half(&FundamentalDiscriminant::new(d).unwrap(), &budget).unwrap();
        assert!((r.value - b).abs() < 1e-6, "d={d}: afe {} vs oracle {b}", r.value);
    }
}

#[test]
fn l_half_known_values() {
    let budget = PrecisionBudget::default();
    for (d, v) in [
        (5, 0.23175094750401576),
        (8, 0.3736917129125473),
        (12, 0.4985570024578154),
        (101, 0.5442777346413984),
        (1009, 5.0207704850045705),
        (4997, 0.5509553633062871),
    ] {
        let r = l_half(&FundamentalDiscriminant::new(d).unwrap(), &budget).unwrap();
        assert!((r.value - v).abs() < 1e-9, "d={d}");
    }
}

#[test]
fn l_half_stable_under_halving_tolerance() {
    let coarse = PrecisionBudget::new(1e-8, 0.0, 100).unwrap();
    let fine = coarse.scaled(0.5);
    for d in [5i64, 17, 21, -3, -4, 4997] {
        let fd = FundamentalDiscriminant::new(d).unwrap();
        let a = l_half(&fd, &coarse).unwrap().value;
        let b = l_half(&fd, &fine).unwrap().value;
        assert!((a - b).abs() <= 2.0 * coarse.abs_tol);
    }
}

#[test]
fn truncated_product_approaches_l_one() {
    let ds = enumerate_fundamental_discriminants(10_000, SignFilter::Both).unwrap();
    let mut close = 0usize;
    for d in &ds {
        let target = l_one_class_number(d);
        let gap = (l_one_truncated(d, 1e4).value - target).abs() / target;
        if gap < 1e-2 {
            close += 1;
        }
    }
    assert!(close as f64 >= 0.95 * ds.len() as f64, "{close} of {}", ds.len());
}

#[test]
fn truncation_gap_shrinks_on_log_grid() {
    let budget = PrecisionBudget::new(1e-7, 0.0, 1).unwrap();
    for d in [-3i64, -4, 5, -23] {
        let fd = FundamentalDiscriminant::new(d).unwrap();
        let target = l_one_oracle(&fd, &budget).unwrap().value;
        let gaps: Vec<f64> = [1e2, 1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&y| (l_one_truncated(&fd, y).value - target).abs())
            .collect();
        assert!(gaps.last().unwrap() < &gaps[0], "d={d}: {gaps:?}");
        assert!(gaps[4] < 2e-3, "d={d}: {gaps:?}");
    }
}

#[test]
fn prime_sum_additive_over_windows() {
    for d in [5i64, -3, 12, -23, 1009] {
        let fd = FundamentalDiscriminant::new(d).unwrap();
        let s = 0.7;
        let (y1, y2) = (300.0, 2000.0);
        let a = prime_sum_sigma(&fd, s, y1).unwrap().value;
        let b = prime_sum_sigma(&fd, s, y2).unwrap().value;
        let window: f64 = lresonance::arith::primes_in_window(y1, y2)
            .into_iter()
            .map(|p| f64::from(kronecker_unchecked(d, p)) * (p as f64).powf(-s))
            .sum();
        assert!((b - a - window).abs() < 1e-12);
        let bound: f64 = lresonance::arith::sieve_primes(2000).iter().map(|&p| (p as f64).powf(-s)).sum();
        assert!(b.abs() <= bound);
    }
}

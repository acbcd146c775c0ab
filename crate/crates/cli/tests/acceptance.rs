//! Acceptance suite: one PASS/FAIL line per criterion.

use lresonance::arith::kronecker::kronecker_unchecked;
use lresonance::arith::{enumerate_fundamental_discriminants, is_fundamental_discriminant, FundamentalDiscriminant, SignFilter};
use lresonance::constants::*;
use lresonance::experiments::{
    charsum_empirical, desk_z, resonance_ratio, theoretical_exponent, proportion_phi, ProportionTarget, ResonanceConfig, Target,
};
use lresonance::lfunc::{l_half, l_one_oracle};
use lresonance::resonator::quadform::brute::{m_triple_sum, square_k_sum, square_pair_double_sum, TripleCaps};
use lresonance::resonator::{bs_enumerate, mcz_scz, BsParams, ResonatorSpec, WindowSpec};
use lresonance::special::{integrate, ln_weight_u, weight_u, PrecisionBudget, Upper};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(name: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure((got - want).abs() <= tol, || format!("{name} = {got}, expected {want} +- {tol}"))
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    let t = Instant::now();
    let out = f()?;
    let el = t.elapsed();
    ensure(el < limit, || format!("{what} took {el:?}, limit {limit:?}"))?;
    Ok(out)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn criterion_1() -> Check {
    let s = Duration::from_secs(1);
    let c1 = timed(s, "C1", || const_c1().map_err(err))?;
    near("C1", c1.value, 0.8187, 5e-4)?;
    let c2 = timed(s, "C2", || Ok(const_c2()))?;
    near("C2", c2.value, 0.455967, 1e-6)?;
    ensure(c2.discrepancy <= 1e-12, || format!("C2 forms differ by {}", c2.discrepancy))?;
    let c3 = timed(s, "c3", || const_c3().map_err(err))?;
    near("c3", c3.value, 0.438825, 1e-5)?;
    near("2(3log2 - pi/2)", threshold_c().value, 1.0173, 1e-3)?;
    let r = sqrt_two_over_log_two().value;
    near("sqrt(2/log2)", r, 1.6986, 1e-3)?;
    let lim = alpha_sigma_b(0.5 + 1e-10, 1.0 - 1e-10).map_err(err)?;
    near("alpha(sigma, b) limit", lim, r, 1e-6)?;
    let cp = timed(s, "c'", || const_cprime().map_err(err))?;
    ensure(cp.discrepancy <= 1e-9, || format!("c' discrepancy {}", cp.discrepancy))?;
    near("c' closed form", cp.value, 2f64.ln() + PI / 2.0 - 2.0, 1e-9)
}

/// Complex log-gamma by the Lanczos approximation (g = 7, 9 terms), for `Re z > 1/2`.
fn ln_gamma_complex(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let z = z - 1.0;
    let mut a = Complex64::new(C[0], 0.0);
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// `(1/2 pi i) int_{(2)} pi^{-s/2} Gamma(s/2 + 1/4)/Gamma(1/4) x^{-s} ds/s` on `|Im s| <= 200`.
fn u_contour(x: f64) -> Result<f64, String> {
    let integrand = |t: f64| {
        let s = Complex64::new(2.0, t);
        let log = -s / 2.0 * PI.ln() + ln_gamma_complex(s / 2.0 + 0.25) - s * x.ln();
        (log.exp() / s).re
    };
    let budget = PrecisionBudget::new(1e-13, 1e-13, 5000).map_err(err)?;
    // the integrand is even in t after taking real parts
    let half = integrate(integrand, 0.0, Upper::Finite(200.0), &budget).map_err(err)?;
    // Gamma(1/4) = 4 Gamma(5/4)
    let gamma_quarter = 4.0 * ln_gamma_complex(Complex64::new(1.25, 0.0)).re.exp();
    Ok(half.value / (PI * gamma_quarter))
}

fn criterion_2() -> Check {
    timed(Duration::from_secs(10), "weight checks", || {
        for x in [0.1, 1.0, 5.0] {
            let closed = weight_u(x).map_err(err)?;
            let contour = u_contour(x)?;
            near(&format!("U({x}) vs contour"), closed, contour, 1e-8)?;
        }
        let u20 = weight_u(20.0).map_err(err)?;
        ensure(u20 <= 1e3 * (-20f64).exp(), || format!("U(20) = {u20}"))?;
        // U itself underflows past x ~ 15.3, so strictness is checked on ln U
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for i in 1..=3000 {
            let x = f64::from(i) * 0.01;
            let ln_u = ln_weight_u(x).map_err(err)?;
            let u = weight_u(x).map_err(err)?;
            ensure(ln_u.is_finite() && ln_u < 0.0 && ln_u < prev.0, || format!("ln U fails at x = {x}"))?;
            ensure(u < 1.0 && (u < prev.1 || u == 0.0) && u >= 0.0, || format!("U fails at x = {x}"))?;
            ensure(u > 0.0 || ln_u < f64::MIN_POSITIVE.ln(), || format!("U vanished early at x = {x}"))?;
            prev = (ln_u, u);
        }
        Ok(())
    })
}

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

/// Smoothed series `sum chi_d(n) n^{-1/2} w(n/M)` at two cutoff shapes.
fn smoothed_half(d: i64) -> (f64, f64) {
    let m = d.unsigned_abs();
    let table: Vec<f64> = (0..m).map(|n| f64::from(kronecker_unchecked(d, n))).collect();
    let mut out = [0.0; 2];
    for (slot, (len, width)) in out.iter_mut().zip([(50.0 * m as f64, 1.0), (40.0 * m as f64, 2.0)]) {
        let end = (len * (1.0 + width)) as u64;
        let mut acc = lresonance::summation::NeumaierSum::new();
        for n in 1..=end {
            let chi = table[(n % m) as usize];
            if chi != 0.0 {
                acc.add(chi * bump(n as f64 / len, width) / (n as f64).sqrt());
            }
        }
        *slot = acc.value();
    }
    (out[0], out[1])
}

fn criterion_3() -> Check {
    timed(Duration::from_secs(300), "L-value oracles", || {
        let budget = PrecisionBudget::default();
        let m3 = l_one_oracle(&FundamentalDiscriminant::new(-3).map_err(err)?, &budget).map_err(err)?;
        // class number formula: pi h / (w/2 sqrt|d|) with h = 1
        near("L(1, chi_-3)", m3.value, PI / (3.0 * 3f64.sqrt()), 1e-5)?;
        near("L(1, chi_-3) vs 0.604600", m3.value, 0.604600, 1e-5)?;
        let m4 = l_one_oracle(&FundamentalDiscriminant::new(-4).map_err(err)?, &budget).map_err(err)?;
        near("L(1, chi_-4)", m4.value, PI / 4.0, 1e-5)?;
        let ds = enumerate_fundamental_discriminants(5000, SignFilter::Positive).map_err(err)?;
        let worst = ds
            .par_iter()
            .map(|d| {
                let afe = l_half(d, &budget).map_err(err)?.value;
                let (a, b) = smoothed_half(d.value());
                Ok(((afe - b).abs().max((a - b).abs()), d.value()))
            })
            .collect::<Result<Vec<_>, String>>()?
            .into_iter()
            .fold((0.0, 0), |m, x| if x.0 > m.0 { x } else { m });
        ensure(worst.0 <= 1e-6, || format!("l_half vs oracle off by {} at d = {}", worst.0, worst.1))
    })
}

fn criterion_4() -> Check {
    timed(Duration::from_secs(60), "quadratic forms", || {
        let all = [2u64, 3, 5];
        let z = 7.0;
        for mask in 1..8u32 {
            let w: Vec<u64> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            for choice in 0..3 {
                let coeffs: Vec<(u64, f64)> = w
                    .iter()
                    .map(|&p| (p, [0.25, 0.5, 1.0 - p as f64 / z][choice]))
                    .collect();
                let pairs = square_pair_double_sum(&coeffs, 8);
                let k = square_k_sum(&coeffs, 8);
                near(&format!("pair sum on {coeffs:?}"), pairs, k, 1e-10)?;
            }
        }
        let coeffs: Vec<(u64, f64)> = [2u64, 3].iter().map(|&p| (p, 1.0 - p as f64 / 4.0)).collect();
        let caps: Vec<TripleCaps> = coeffs.iter().map(|&(p, r)| TripleCaps::for_tolerance(p, r, 1e-14)).collect();
        let brute = m_triple_sum(&coeffs, &caps);
        let closed = mcz_scz(&coeffs, 8).map_err(err)?.m;
        near("M triple sum on {2,3}", brute, closed, 1e-10)
    })
}

fn criterion_5() -> Check {
    timed(Duration::from_secs(300), "character sums", || {
        for n in [1u64, 4, 9, 36] {
            let r = charsum_empirical(1_000_000, n, SignFilter::Both).map_err(err)?;
            let q = r.empirical_sum as f64 / r.main_term;
            ensure((0.97..=1.03).contains(&q), || format!("n = {n}: ratio {q}"))?;
        }
        for n in [2u64, 3, 5, 6] {
            let r = charsum_empirical(1_000_000, n, SignFilter::Both).map_err(err)?;
            let q = r.empirical_sum.unsigned_abs() as f64 / r.count as f64;
            ensure(q <= 0.01, || format!("n = {n}: |sum|/count {q}"))?;
        }
        Ok(())
    })
}

fn criterion_6() -> Check {
    timed(Duration::from_secs(60), "census", || {
        let n = enumerate_fundamental_discriminants(1_000_000, SignFilter::Both).map_err(err)?.len() as f64;
        let main = 1e6 / ZETA_2;
        ensure((n - main).abs() <= 0.005 * main, || format!("count {n} vs {main}"))?;
        let sieve: Vec<i64> = enumerate_fundamental_discriminants(10_000, SignFilter::Both)
            .map_err(err)?
            .iter()
            .map(|d| d.value())
            .collect();
        let mut brute = Vec::new();
        for a in 1..=10_000i64 {
            for d in [-a, a] {
                if is_fundamental_discriminant(d).map_err(err)? {
                    brute.push(d);
                }
            }
        }
        ensure(sieve == brute, || "sieve and definition filter disagree below 10^4".into())
    })
}

fn criterion_7() -> Check {
    let e = timed(Duration::from_secs(1), "comparator", || {
        theoretical_exponent(ProportionTarget::One { eta: 0.044 }).map_err(err)
    })?;
    near("theoretical exponent", e, -0.4785, 5e-4)?;
    let r = timed(Duration::from_secs(300), "empirical count", || {
        proportion_phi(100_000, ProportionTarget::One { eta: 0.044 }, SignFilter::Both, None).map_err(err)
    })?;
    near("reported exponent", r.theoretical_exponent, -0.4785, 5e-4)?;
    ensure(r.empirical_count <= r.total_count && r.total_count > 0, || "bad counts".into())
}

fn criterion_8() -> Check {
    let x = 1_000_000u64;
    let z = desk_z(x as f64, 0.1).map_err(err)?;
    let spec = ResonatorSpec::CentralOne { z, exponent_cap: None };
    let mut c = ResonanceConfig::new(x, spec, Target::One);
    let base = resonance_ratio(&c).map_err(err)?;
    ensure(base.ratio > base.unweighted_mean, || {
        format!("weighted {} not above unweighted {}", base.ratio, base.unweighted_mean)
    })?;
    for s in [1e-6, 0.3, 17.0, 1e6] {
        c.resonator_scale = s;
        let r = resonance_ratio(&c).map_err(err)?;
        ensure((r.ratio - base.ratio).abs() <= 1e-12 * base.ratio, || format!("ratio moved under scale {s}"))?;
    }
    for (n, lo, hi, t) in [(1000.0, 20.0, 60.0, 2.5), (500.0, 17.0, 40.0, 3.0), (5000.0, 20.0, 120.0, 2.0)] {
        let p = BsParams::new(n, 1.5, 0.5)
            .map_err(err)?
            .with_windows(vec![WindowSpec { lo, hi, threshold: Some(t) }])
            .map_err(err)?;
        let e = bs_enumerate(&p, 10_000_000).map_err(err)?;
        ensure(e.complete && e.count() as f64 <= n, || format!("|R| = {} exceeds N = {n}", e.count()))?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    let commands: [&[&str]; 7] = [
        &["constants", "--format", "json"],
        &["charsum", "--X", "100000", "--n", "9"],
        &["lvalue", "--d", "-163", "--sigma", "0.5"],
        &["resonate", "--X", "50000", "--target", "one"],
        &["resonate", "--X", "4000", "--target", "half"],
        &["search", "--X", "50000", "--strategy", "guided", "--compare"],
        &["proportion", "--X", "50000"],
    ];
    for (i, cmd) in commands.iter().enumerate() {
        let mut payloads = Vec::new();
        for threads in ["1", "2", "8"] {
            let out = dir.path().join(format!("{i}_{threads}"));
            let out_s = out.to_str().unwrap().to_string();
            let mut args = vec!["lresonance", "--threads", threads, "--output", &out_s];
            args.extend_from_slice(cmd);
            let code = lresonance_cli::run(args);
            ensure(code == 0, || format!("{cmd:?} exited {code}"))?;
            payloads.push(std::fs::read(&out).map_err(err)?);
        }
        ensure(payloads.windows(2).all(|w| w[0] == w[1]), || format!("{cmd:?} differs across thread counts"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("constants match the published values", criterion_1),
        ("weight function closed form vs contour integral", criterion_2),
        ("L-value oracles", criterion_3),
        ("quadratic-form identities", criterion_4),
        ("character-sum main term at X = 10^6", criterion_5),
        ("fundamental-discriminant census", criterion_6),
        ("proportion comparator", criterion_7),
        ("resonance sanity at X = 10^6", criterion_8),
        ("determinism across thread counts", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("criterion {} PASS: {name} ({secs:.2} s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} FAIL: {name} ({secs:.2} s): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

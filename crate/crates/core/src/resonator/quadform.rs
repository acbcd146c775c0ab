//! Quadratic forms over square decompositions, as Euler products and as
//! brute-force sums.
//!
//! Every routine takes the resonator as a list of `(p, r_p)` pairs, so any
//! finite prime window can be exercised.

use crate::arith::factor::local_mass;
use crate::error::{domain, Result};
use crate::summation::NeumaierSum;
use serde::{Deserialize, Serialize};

fn check(coeffs: &[(u64, f64)]) -> Result<()> {
    for pair in coeffs.windows(2) {
        if pair[0].0 >= pair[1].0 {
            return domain("window primes must be strictly increasing");
        }
    }
    for &(p, r) in coeffs {
        if !(0.0..1.0).contains(&r) {
            return domain(format!("need 0 <= r_p < 1, got r_{p} = {r}"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSum {
    /// `sum_k r_k^2 d(k^2) h(k)` over window-supported `k` with exponents `<= cap`.
    pub k_sum: f64,
    /// `prod_p (1 - h(p) + h(p)(1 + r_p^2)(1 - r_p^2)^{-2})`.
    pub closed_form: f64,
    /// Bound on `closed_form - k_sum` from the geometric tails.
    pub tail_bound: f64,
}

/// `sum_{e > cap} (2e + 1) x^e` for `0 <= x < 1`.
fn odd_weighted_tail(x: f64, cap: u32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let n = f64::from(cap + 1);
    // sum_{e >= n} (2e+1) x^e = x^n ((2n+1)(1-x) + 2x) / (1-x)^2
    x.powf(n) * ((2.0 * n + 1.0) * (1.0 - x) + 2.0 * x) / ((1.0 - x) * (1.0 - x))
}

/// `sum_{mn = square} r_m r_n h(mn) = sum_k r_k^2 d(k^2) h(k)`.
pub fn square_pair_sum(coeffs: &[(u64, f64)], exponent_cap: u32) -> Result<PairSum> {
    check(coeffs)?;
    let mut log_k = NeumaierSum::new();
    let mut log_closed = NeumaierSum::new();
    let mut rel_tail = 0.0;
    for &(p, r) in coeffs {
        let h = local_mass(p);
        let x = r * r;
        let mut local = NeumaierSum::new();
        let mut xe = 1.0;
        for e in 1..=exponent_cap {
            xe *= x;
            local.add(f64::from(2 * e + 1) * xe);
        }
        let k_factor = 1.0 + h * local.value();
        let closed = 1.0 - h + h * (1.0 + x) / ((1.0 - x) * (1.0 - x));
        log_k.add(k_factor.ln());
        log_closed.add(closed.ln());
        rel_tail += h * odd_weighted_tail(x, exponent_cap) / k_factor;
    }
    let k_sum = log_k.value().exp();
    Ok(PairSum {
        k_sum,
        closed_form: log_closed.value().exp(),
        tail_bound: k_sum * (rel_tail.exp() - 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsReport {
    pub a_z: f64,
    pub b_z: f64,
    /// `A(z) prod (1 - 1/p)^{-1} h(p) prod (1 - r^2)^{-2} (1 + r^2)`.
    pub m: f64,
    /// `B(z) prod (1 - r^2)^{-2} (1 + r^2)`.
    pub s: f64,
    /// Euler product of the local sums with every exponent `<= cap`.
    pub m_capped: f64,
    pub s_capped: f64,
}

/// `A(z)` and `B(z)` local factors.
fn a_b_local(p: u64, r: f64) -> (f64, f64) {
    let pf = p as f64;
    let r2 = r * r;
    let a = 1.0 - (1.0 - r) * (1.0 - r) / ((pf + 1.0) * (1.0 + r2))
        + (1.0 - 1.0 / pf) * (1.0 - r2) * (1.0 - r2) / (pf * (1.0 + r2));
    let b = 1.0 - 3.0 * r2 / ((pf + 1.0) * (1.0 + r2)) + r2 * r2 / ((pf + 1.0) * (1.0 + r2));
    (a, b)
}

/// Capped local sum `sum_{a+b+c even, each <= cap} p^{-a} r^{b+c} h(p^{a+b+c})`.
fn m_local_capped(p: u64, r: f64, cap: u32) -> f64 {
    let h = local_mass(p);
    let inv = 1.0 / p as f64;
    let mut acc = NeumaierSum::new();
    for a in 0..=cap {
        for b in 0..=cap {
            for c in 0..=cap {
                if (a + b + c) % 2 == 1 {
                    continue;
                }
                let w = if a + b + c == 0 { 1.0 } else { h };
                acc.add(w * inv.powi(a as i32) * r.powi((b + c) as i32));
            }
        }
    }
    acc.value()
}

/// Closed forms of `M_{c,z}` and `S_{c,z}` for the coefficient list, with
/// `c_l` the indicator of window-supported `l`.
pub fn mcz_scz(coeffs: &[(u64, f64)], exponent_cap: u32) -> Result<McsReport> {
    check(coeffs)?;
    let mut logs = [NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new()];
    let mut log_m_capped = NeumaierSum::new();
    for &(p, r) in coeffs {
        let (a, b) = a_b_local(p, r);
        let r2 = r * r;
        let common = (1.0 + r2) / ((1.0 - r2) * (1.0 - r2));
        let euler = local_mass(p) / (1.0 - 1.0 / p as f64);
        logs[0].add(a.ln());
        logs[1].add(b.ln());
        logs[2].add((a * euler * common).ln());
        logs[3].add((b * common).ln());
        log_m_capped.add(m_local_capped(p, r, exponent_cap).ln());
    }
    let [a_z, b_z, m, s] = logs.map(|l| l.value().exp());
    Ok(McsReport {
        a_z,
        b_z,
        m,
        s,
        m_capped: log_m_capped.value().exp(),
        s_capped: square_pair_sum(coeffs, exponent_cap)?.k_sum,
    })
}

/// Brute-force sums over explicit exponent vectors, used as oracles.
pub mod brute {
    use super::*;

    /// All exponent vectors in `[0, caps[i]]^len`.
    fn boxes(caps: &[u32]) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &c in caps {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=c).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn h_of_support(coeffs: &[(u64, f64)], present: impl Iterator<Item = bool>) -> f64 {
        coeffs
            .iter()
            .zip(present)
            .filter(|(_, on)| *on)
            .map(|(&(p, _), _)| local_mass(p))
            .product()
    }

    fn r_of(coeffs: &[(u64, f64)], exps: &[u32]) -> f64 {
        coeffs.iter().zip(exps).map(|(&(_, r), &e)| r.powi(e as i32)).product()
    }

    /// `sum r_m r_n h(mn)` over pairs with `mn` a square whose root has every
    /// exponent `<= cap`.
    pub fn square_pair_double_sum(coeffs: &[(u64, f64)], cap: u32) -> f64 {
        let vecs = boxes(&vec![2 * cap; coeffs.len()]);
        let rs: Vec<f64> = vecs.iter().map(|v| r_of(coeffs, v)).collect();
        let mut acc = NeumaierSum::new();
        for (m, rm) in vecs.iter().zip(&rs) {
            for (n, rn) in vecs.iter().zip(&rs) {
                let ok = m.iter().zip(n).all(|(a, b)| (a + b) % 2 == 0 && a + b <= 2 * cap);
                if ok {
                    let h = h_of_support(coeffs, m.iter().zip(n).map(|(a, b)| a + b > 0));
                    acc.add(rm * rn * h);
                }
            }
        }
        acc.value()
    }

    /// `sum_k r_k^2 d(k^2) h(k)` over `k` with every exponent `<= cap`.
    pub fn square_k_sum(coeffs: &[(u64, f64)], cap: u32) -> f64 {
        let mut acc = NeumaierSum::new();
        for k in boxes(&vec![cap; coeffs.len()]) {
            let r = r_of(coeffs, &k);
            let divisors: f64 = k.iter().map(|&e| f64::from(2 * e + 1)).product();
            let h = h_of_support(coeffs, k.iter().map(|&e| e > 0));
            acc.add(r * r * divisors * h);
        }
        acc.value()
    }

    /// Per-prime caps for [`m_triple_sum`]: `l_cap` for `l`, `mn_cap` for
    /// `m` and `n`.
    #[derive(Debug, Clone, Copy)]
    pub struct TripleCaps {
        pub l_cap: u32,
        pub mn_cap: u32,
    }

    impl TripleCaps {
        pub fn uniform(cap: u32) -> Self {
            Self { l_cap: cap, mn_cap: cap }
        }

        /// Caps whose dropped tails are below `tol` relative to the total.
        pub fn for_tolerance(p: u64, r: f64, tol: f64) -> Self {
            let cap_for = |ratio: f64, weight: fn(u32) -> f64| -> u32 {
                if ratio == 0.0 {
                    return 0;
                }
                let mut e = 1;
                while weight(e) * ratio.powi(e as i32) / (1.0 - ratio).powi(3) > tol {
                    e += 1;
                }
                e
            };
            Self {
                l_cap: cap_for(1.0 / p as f64, |e| f64::from(e + 1)),
                mn_cap: cap_for(r, |e| f64::from((e + 1) * (e + 2))),
            }
        }
    }

    /// `sum_{l,m,n : lmn = square} r_m r_n h(lmn) / l` over window-supported
    /// `l, m, n` within the caps.
    pub fn m_triple_sum(coeffs: &[(u64, f64)], caps: &[TripleCaps]) -> f64 {
        assert_eq!(coeffs.len(), caps.len());
        // admissible local exponent triples (a, b, c) per prime with their
        // weight p^{-a} r^{b+c} and whether p divides lmn
        let locals: Vec<Vec<(f64, bool)>> = coeffs
            .iter()
            .zip(caps)
            .map(|(&(p, r), c)| {
                let mut v = Vec::new();
                for a in 0..=c.l_cap {
                    for b in 0..=c.mn_cap {
                        for cc in 0..=c.mn_cap {
                            if (a + b + cc) % 2 == 0 {
                                let w = (p as f64).powi(-(a as i32)) * r.powi((b + cc) as i32);
                                v.push((w, a + b + cc > 0));
                            }
                        }
                    }
                }
                v
            })
            .collect();
        let masses: Vec<f64> = coeffs.iter().map(|&(p, _)| local_mass(p)).collect();
        let mut acc = NeumaierSum::new();
        let mut stack: Vec<usize> = vec![0; locals.len()];
        if locals.is_empty() {
            return 1.0;
        }
        // odometer over the product of the local lists
        'outer: loop {
            let mut term = 1.0;
            for (i, &j) in stack.iter().enumerate() {
                let (w, divides) = locals[i][j];
                term *= w;
                if divides {
                    term *= masses[i];
                }
            }
            acc.add(term);
            for i in (0..stack.len()).rev() {
                stack[i] += 1;
                if stack[i] < locals[i].len() {
                    continue 'outer;
                }
                stack[i] = 0;
            }
            break;
        }
        acc.value()
    }
}

//! Segmented sieve of Eratosthenes.

/// Width of one sieve segment, in integers.
const SEGMENT: u64 = 1 << 18;

/// Primes up to `limit` with a plain (unsegmented) sieve. Used for the
/// base primes of the segmented sieve, so `limit` stays small there.
fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Integer square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// Calls `f` on every prime in `[lo, hi]`, in ascending order, using
/// bounded working memory.
pub fn for_each_prime_in(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if hi < 2 || lo > hi {
        return;
    }
    let lo = lo.max(2);
    let base = simple_sieve(isqrt(hi));
    let mut seg = vec![true; SEGMENT as usize];
    let mut start = lo;
    loop {
        let end = start.saturating_add(SEGMENT - 1).min(hi);
        let len = (end - start + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut j = first;
            while j <= end {
                seg[(j - start) as usize] = false;
                j += p;
            }
        }
        for (i, &is_prime) in seg[..len].iter().enumerate() {
            if is_prime {
                f(start + i as u64);
            }
        }
        if end == hi {
            break;
        }
        start = end + 1;
    }
}

/// All primes `p <= limit`, ascending. Empty when `limit < 2`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime_in(2, limit, |p| out.push(p));
    out
}

/// Primes in the half-open window `(lo, hi]` for real endpoints.
pub fn primes_in_window(lo: f64, hi: f64) -> Vec<u64> {
    if !(hi >= 2.0) || hi <= lo {
        return Vec::new();
    }
    let hi_int = hi.floor() as u64;
    let lo_int = if lo < 0.0 { 0 } else { lo.floor() as u64 + 1 };
    let mut out = Vec::new();
    for_each_prime_in(lo_int, hi_int, |p| {
        if (p as f64) > lo && (p as f64) <= hi {
            out.push(p)
        }
    });
    out
}

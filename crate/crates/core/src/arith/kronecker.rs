//! The Kronecker symbol `(d/n)`, i.e. the real character `chi_d(n)`.

use crate::error::{Error, Result};

/// `(a/2)` for odd `a`, indexed by `a & 7`.
const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(d/n)` for `n >= 0`.
///
/// Binary reduction with quadratic reciprocity and the `(d/2)` rule, carried
/// out in 128-bit arithmetic. Both arguments must have magnitude below 2^63.
pub fn kronecker(d: i64, n: u64) -> Result<i8> {
    if d == 0 && n == 0 {
        return Err(Error::UndefinedSymbol);
    }
    if n > i64::MAX as u64 {
        return Err(Error::OutOfRange(n as i128));
    }
    Ok(kronecker_unchecked(d, n))
}

/// [`kronecker`] without argument validation. `(0, 0)` yields 0.
pub fn kronecker_unchecked(d: i64, n: u64) -> i8 {
    let mut a = d as i128;
    let mut b = n as i128;
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        // both a and b odd here; b > 0
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via the Kronecker reduction.
#[inline]
pub fn legendre(a: i64, p: u64) -> i8 {
    kronecker_unchecked(a.rem_euclid(p as i64), p)
}

/// `chi_d(2)`: zero for even `d`, otherwise `+1` iff `d = +-1 (mod 8)`.
#[inline]
pub fn chi_at_two(d: i64) -> i8 {
    TAB2[(d & 7) as usize]
}

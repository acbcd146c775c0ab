//! Batch evaluation of `chi_d(n)` across many discriminants.
//!
//! A fixed `n` is factored once; each odd prime of `n` gets a residue table
//! and `chi_d(2)` is read off `d mod 8`. Work is split into fixed-size
//! blocks written to pre-assigned output slots, so results do not depend on
//! thread scheduling.

use super::factor::factorize;
use super::kronecker::{chi_at_two, legendre};
use crate::error::Result;
use rayon::prelude::*;

/// Residue tables are built for odd primes up to this size; larger primes
/// fall back to the reciprocity path.
pub const TABLE_LIMIT: u64 = 1 << 13;

const BATCH_BLOCK: usize = 4096;

/// Quadratic-character table for one prime: `chi_d(p)` as a function of `d mod p`.
#[derive(Debug, Clone)]
pub struct PrimeCharacter {
    prime: u64,
    table: Option<Vec<i8>>,
}

impl PrimeCharacter {
    pub fn new(prime: u64) -> Self {
        let table = (prime > 2 && prime <= TABLE_LIMIT).then(|| legendre_table(prime));
        Self { prime, table }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `chi_d(p)`.
    #[inline]
    pub fn eval(&self, d: i64) -> i8 {
        if self.prime == 2 {
            return chi_at_two(d);
        }
        match &self.table {
            Some(t) => t[d.rem_euclid(self.prime as i64) as usize],
            None => legendre(d, self.prime),
        }
    }
}

fn legendre_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..p {
        t[(x * x % p) as usize] = 1;
    }
    t
}

/// `chi_d(p)` for each prime of a fixed list, reusable across discriminants.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    chars: Vec<PrimeCharacter>,
}

impl CharacterTable {
    pub fn new(primes: &[u64]) -> Self {
        Self {
            chars: primes.iter().map(|&p| PrimeCharacter::new(p)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.chars.iter().map(|c| c.prime)
    }

    #[inline]
    pub fn eval(&self, index: usize, d: i64) -> i8 {
        self.chars[index].eval(d)
    }

    /// Fills `out[i] = chi_d(p_i)`.
    pub fn eval_all_into(&self, d: i64, out: &mut Vec<i8>) {
        out.clear();
        out.extend(self.chars.iter().map(|c| c.eval(d)));
    }
}

/// `chi_d(n)` for every `d` in `ds`, element-wise equal to [`super::kronecker`].
pub fn batch_character(ds: &[i64], n: u64) -> Result<Vec<i8>> {
    let f = factorize(n)?;
    // odd exponents need the character value; even ones only coprimality
    let odd: Vec<PrimeCharacter> = f
        .pairs()
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| PrimeCharacter::new(p))
        .collect();
    let even: Vec<u64> = f.pairs().iter().filter(|&&(_, e)| e % 2 == 0).map(|&(p, _)| p).collect();
    let mut out = vec![0i8; ds.len()];
    out.par_chunks_mut(BATCH_BLOCK)
        .zip(ds.par_chunks(BATCH_BLOCK))
        .for_each(|(dst, src)| {
            for (slot, &d) in dst.iter_mut().zip(src) {
                let mut v: i8 = 1;
                for c in &odd {
                    v *= c.eval(d);
                }
                if v != 0 && even.iter().any(|&p| d.rem_euclid(p as i64) == 0) {
                    v = 0;
                }
                *slot = v;
            }
        });
    Ok(out)
}

//! Ranks over prime fields.

use crate::budget::Budget;
use crate::elim::{eliminate, PrimeField};
use crate::error::{LinalgError, Result};
use crate::sparse::SparseIntMatrix;

/// Deterministic primality test by trial division; moduli here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> Result<usize> {
    rank_mod_p_with(m, p, &Budget::global())
}

pub fn rank_mod_p_with(m: &SparseIntMatrix, p: u64, budget: &Budget) -> Result<usize> {
    if !is_prime(p) {
        return Err(LinalgError::InvalidInput(format!("{p} is not prime")));
    }
    let vectors: Vec<Vec<(u32, u64)>> = m
        .columns()
        .iter()
        .map(|col| {
            col.iter()
                .filter_map(|(r, v)| {
                    let x = v.mod_u64(p);
                    (x != 0).then_some((*r, x))
                })
                .collect()
        })
        .collect();
    let el = eliminate(&PrimeField { p }, vectors, m.rows(), false, budget)?;
    debug_assert!(el.remainder.is_empty(), "every nonzero is a unit in a field");
    Ok(el.pivot_count)
}

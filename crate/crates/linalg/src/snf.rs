//! Smith normal form over the integers.

use crate::budget::Budget;
use crate::dense::IntMatrix;
use crate::elim::{eliminate, Integers};
use crate::error::Result;
use crate::int::Int;
use crate::sparse::SparseIntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | … | d_r`, all positive, `r` the rank over the rationals.
    pub factors: Vec<Int>,
    /// Unimodular `(U, V)` with `U · M · V` equal to the diagonal form.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The diagonal matrix `diag(d_1, …, d_r, 0, …)` of the given shape.
    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, f) in self.factors.iter().enumerate() {
            d[(i, i)] = f.clone();
        }
        d
    }
}

/// Invariant factors of `m` under the process-wide budget.
pub fn invariant_factors(m: &SparseIntMatrix) -> Result<Vec<Int>> {
    invariant_factors_with(m, &Budget::global())
}

pub fn invariant_factors_with(m: &SparseIntMatrix, budget: &Budget) -> Result<Vec<Int>> {
    // columns as elimination rows; SNF is transpose-invariant
    let vectors: Vec<_> = m.columns().to_vec();
    let el = eliminate(&Integers, vectors, m.rows(), false, budget)?;
    let mut factors = vec![Int::ONE; el.pivot_count];
    if !el.remainder.is_empty() {
        let dense = compress(&el.remainder, budget)?;
        factors.extend(dense_snf(dense, false, budget)?.factors);
    }
    Ok(factors)
}

/// Smith normal form; transforms are computed densely and only on request.
pub fn smith_normal_form(m: &SparseIntMatrix, with_transforms: bool) -> Result<SmithForm> {
    let budget = Budget::global();
    if with_transforms {
        budget.meter().dense(m.rows().max(m.cols()), m.rows().max(m.cols()))?;
        dense_snf(m.to_dense(), true, &budget)
    } else {
        Ok(SmithForm {
            factors: invariant_factors_with(m, &budget)?,
            transforms: None,
        })
    }
}

/// Packs sparse rows into a dense matrix over the columns they use.
pub(crate) fn compress(rows: &[Vec<(u32, Int)>], budget: &Budget) -> Result<IntMatrix> {
    let mut cols: Vec<u32> = rows.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    budget.meter().dense(rows.len(), cols.len())?;
    let mut d = IntMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.iter().enumerate() {
        for (c, v) in r {
            let j = cols.binary_search(c).expect("column present");
            d[(i, j)] = v.clone();
        }
    }
    Ok(d)
}

/// Dense Smith normal form by repeated Euclidean reduction of the pivot
/// row and column, with a divisibility repair step.
pub(crate) fn dense_snf(mut a: IntMatrix, with_transforms: bool, budget: &Budget) -> Result<SmithForm> {
    let (r, c) = (a.rows(), a.cols());
    let mut meter = budget.meter();
    let mut u = with_transforms.then(|| IntMatrix::identity(r));
    let mut v = with_transforms.then(|| IntMatrix::identity(c));
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_abs_entry(&a, t, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            meter.tick()?;
            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, _) = a[(i, t)].div_rem_floor(&p);
                let f = -q;
                a.add_row_multiple(i, t, &f);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &f);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, _) = a[(t, j)].div_rem_floor(&p);
                let f = -q;
                a.add_col_multiple(j, t, &f);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &f);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // bring the smallest leftover of row/column t to the pivot
                let mut best: Option<(usize, usize)> = None;
                let mut best_abs: Option<Int> = None;
                let mut consider = |i: usize, j: usize, val: &Int| {
                    if !val.is_zero() && best_abs.as_ref().is_none_or(|b| val.abs() < *b) {
                        best_abs = Some(val.abs());
                        best = Some((i, j));
                    }
                };
                for i in t + 1..r {
                    consider(i, t, &a[(i, t)]);
                }
                for j in t + 1..c {
                    consider(t, j, &a[(t, j)]);
                }
                let (bi, bj) = best.expect("leftover entry exists");
                if bi != t {
                    a.swap_rows(t, bi);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(t, bi);
                    }
                } else {
                    a.swap_cols(t, bj);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(t, bj);
                    }
                }
                continue;
            }
            // row and column cleared; enforce divisibility of the rest
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| a[(i, j)].div_exact(&p).is_none());
            match bad {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, &Int::ONE);
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &Int::ONE);
                    }
                }
                None => break,
            }
        }
        meter.value(&a[(t, t)])?;
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    let factors = (0..t).map(|i| a[(i, i)].clone()).collect();
    Ok(SmithForm {
        factors,
        transforms: u.zip(v),
    })
}

fn min_abs_entry(a: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<Int> = None;
    for i in r0..a.rows() {
        for j in c0..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if x.is_unit() {
                return Some((i, j));
            }
            let ax = x.abs();
            if best_abs.as_ref().is_none_or(|b| ax < *b) {
                best_abs = Some(ax);
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(rows: usize, cols: usize, v: &[i64]) -> SparseIntMatrix {
        SparseIntMatrix::from_dense(&IntMatrix::from_i64(rows, cols, v))
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(invariant_factors(&sp(2, 2, &[2, 4, 6, 8])).unwrap(), ints(&[2, 4]));
        assert_eq!(invariant_factors(&SparseIntMatrix::identity(3)).unwrap(), ints(&[1, 1, 1]));
        assert!(invariant_factors(&SparseIntMatrix::zeros(3, 4)).unwrap().is_empty());
    }

    #[test]
    fn divisibility_repair() {
        // diag(2, 3) is not in normal form; it must become diag(1, 6)
        let f = smith_normal_form(&sp(2, 2, &[2, 0, 0, 3]), true).unwrap();
        assert_eq!(f.factors, ints(&[1, 6]));
        let (u, v) = f.transforms.clone().unwrap();
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(u.mul(&m).mul(&v), f.diagonal(2, 2));
        assert!(u.det().is_unit() && v.det().is_unit());
    }

    #[test]
    fn transforms_for_rectangular() {
        let m = IntMatrix::from_i64(2, 3, &[4, 6, 2, 8, 12, 4]);
        let f = smith_normal_form(&SparseIntMatrix::from_dense(&m), true).unwrap();
        assert_eq!(f.factors, ints(&[2]));
        let (u, v) = f.transforms.clone().unwrap();
        assert_eq!(u.mul(&m).mul(&v), f.diagonal(2, 3));
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Budget {
            max_entries: 2,
            ..Budget::default()
        };
        let m = sp(2, 2, &[1, 1, 1, 1]);
        assert!(matches!(
            invariant_factors_with(&m, &tight),
            Err(crate::LinalgError::Resource(_))
        ));
    }
}

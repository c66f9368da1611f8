//! Saturated integer kernels and row Hermite normal form.

use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::elim::{eliminate, Integers};
use crate::error::{LinalgError, Result};
use crate::int::Int;
use crate::snf::{compress, dense_snf};
use crate::sparse::{axpy, sparse_get, SparseIntMatrix, SparseVec};

/// A basis of `ker(M) ∩ Z^cols`, returned as the columns of a
/// `cols × d` matrix in Hermite normal form (see [`hermite_rows`]).
pub fn kernel_basis(m: &SparseIntMatrix) -> Result<SparseIntMatrix> {
    kernel_basis_with(m, &Budget::global())
}

pub fn kernel_basis_with(m: &SparseIntMatrix, budget: &Budget) -> Result<SparseIntMatrix> {
    let rows = kernel_vectors(m, budget)?;
    let rows = hermite_rows(rows, budget)?;
    SparseIntMatrix::from_columns(m.cols(), rows)
}

/// Some lattice basis of the integer kernel, one sparse vector per element.
pub(crate) fn kernel_vectors(m: &SparseIntMatrix, budget: &Budget) -> Result<Vec<SparseVec>> {
    let ncols = m.cols();
    let el = eliminate(&Integers, m.row_vectors(), ncols, true, budget)?;

    let mut is_pivot = vec![false; ncols];
    for p in &el.pivots {
        is_pivot[p.col as usize] = true;
    }
    // kernel of the remainder over the non-pivot columns it touches
    let mut touched: Vec<u32> = el
        .remainder
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect();
    touched.sort_unstable();
    touched.dedup();

    let mut seeds: Vec<SparseVec> = Vec::new();
    for c in 0..ncols as u32 {
        if !is_pivot[c as usize] && touched.binary_search(&c).is_err() {
            seeds.push(vec![(c, Int::ONE)]);
        }
    }
    if !el.remainder.is_empty() {
        let dense = compress(&el.remainder, budget)?;
        let snf = dense_snf(dense, true, budget)?;
        let rank = snf.rank();
        let (_, v) = snf.transforms.expect("requested transforms");
        for j in rank..v.cols() {
            let vec: SparseVec = (0..v.rows())
                .filter(|&i| !v[(i, j)].is_zero())
                .map(|i| (touched[i], v[(i, j)].clone()))
                .collect();
            seeds.push(vec);
        }
    }

    // back-substitute pivot variables, latest pivot first
    let mut out = Vec::with_capacity(seeds.len());
    let mut x = vec![Int::ZERO; ncols];
    let mut meter = budget.meter();
    for seed in seeds {
        for (c, v) in &seed {
            x[*c as usize] = v.clone();
        }
        for p in el.pivots.iter().rev() {
            meter.tick()?;
            let mut acc = Int::ZERO;
            let mut pivot_val = Int::ZERO;
            for (c, v) in &p.row {
                if *c == p.col {
                    pivot_val = v.clone();
                } else {
                    let xc = &x[*c as usize];
                    if !xc.is_zero() {
                        acc = acc.mul_add(v, xc);
                    }
                }
            }
            // pivot_val * x_col + acc = 0 with pivot_val = ±1
            let val = -(&acc * &pivot_val);
            meter.value(&val)?;
            x[p.col as usize] = val;
        }
        let vec: SparseVec = x
            .iter_mut()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u32, std::mem::take(v)))
            .collect();
        out.push(vec);
    }
    Ok(out)
}

/// Row Hermite normal form of the lattice spanned by `rows`.
///
/// The result rows have strictly increasing leading columns, positive
/// leading entries, and every entry above a leading entry `h` lies in
/// `[0, h)`. Zero rows are dropped; the form is unique for the lattice.
pub fn hermite_rows(rows: Vec<SparseVec>, budget: &Budget) -> Result<Vec<SparseVec>> {
    let mut meter = budget.meter();
    let mut buckets: BTreeMap<u32, Vec<SparseVec>> = BTreeMap::new();
    for r in rows.into_iter().filter(|r| !r.is_empty()) {
        buckets.entry(r[0].0).or_default().push(r);
    }
    let mut echelon: Vec<SparseVec> = Vec::new();
    while let Some((lead, mut group)) = buckets.pop_first() {
        while group.len() > 1 {
            meter.tick()?;
            // smallest leading magnitude, then shortest, as the reducer
            let k = (0..group.len())
                .min_by_key(|&i| (group[i][0].1.abs(), group[i].len(), i))
                .expect("nonempty");
            let reducer = group.swap_remove(k);
            let mut keep = Vec::with_capacity(group.len() + 1);
            for row in group.drain(..) {
                let (q, _) = row[0].1.div_rem_floor(&reducer[0].1);
                let reduced = axpy(&row, &(-q), &reducer);
                if let Some(v) = reduced.iter().map(|e| &e.1).find(|v| v.bits() > 63) {
                    meter.value(v)?;
                }
                match reduced.first() {
                    None => {}
                    Some((c, _)) if *c == lead => keep.push(reduced),
                    Some((c, _)) => buckets.entry(*c).or_default().push(reduced),
                }
            }
            keep.push(reducer);
            group = keep;
        }
        let mut row = group.pop().expect("one row left");
        if row[0].1.is_negative() {
            for e in row.iter_mut() {
                e.1 = -&e.1;
            }
        }
        echelon.push(row);
    }
    // reduce above each pivot into [0, h)
    for t in 0..echelon.len() {
        let (lead, h) = (echelon[t][0].0, echelon[t][0].1.clone());
        let (above, rest) = echelon.split_at_mut(t);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if let Some(v) = sparse_get(row, lead) {
                let (q, _) = v.div_rem_floor(&h);
                if !q.is_zero() {
                    *row = axpy(row, &(-q), pivot_row);
                }
            }
        }
        meter.tick()?;
    }
    Ok(echelon)
}

/// Coordinates of `v` in a Hermite basis, or `None` if `v` is not in the
/// lattice it spans.
pub fn hermite_coordinates(basis: &[SparseVec], v: &SparseVec) -> Option<Vec<Int>> {
    let mut rest = v.clone();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let (lead, h) = (&b[0].0, &b[0].1);
        let a = match sparse_get(&rest, *lead) {
            Some(x) => x.div_exact(h)?,
            None => Int::ZERO,
        };
        if !a.is_zero() {
            rest = axpy(&rest, &(-&a), b);
        }
        coords.push(a);
    }
    rest.is_empty().then_some(coords)
}

/// Coordinates for every column of `m`, as a `basis.len() × m.cols()`
/// dense matrix.
pub fn solve_in_basis(basis: &[SparseVec], m: &SparseIntMatrix) -> Result<crate::IntMatrix> {
    let mut out = crate::IntMatrix::zeros(basis.len(), m.cols());
    for (j, col) in m.columns().iter().enumerate() {
        let coords = hermite_coordinates(basis, col).ok_or_else(|| {
            LinalgError::InvalidInput(format!("column {j} does not lie in the lattice"))
        })?;
        for (i, a) in coords.into_iter().enumerate() {
            out[(i, j)] = a;
        }
    }
    Ok(out)
}

//! Structured sparse elimination with unit pivots.
//!
//! Rows are processed shortest first; in each row the unit entry whose
//! column is least populated becomes the pivot (Markowitz-style). A unit
//! pivot can be cleared from its row and column by unimodular operations,
//! so each one contributes an invariant factor `1` and leaves the Schur
//! complement on the remaining rows and columns. Rows without a unit entry
//! are parked until an update changes them; whatever is left when no unit
//! pivot remains is returned as the remainder.
//!
//! All choices depend only on the input, never on hashing or timing, so the
//! pivot sequence is reproducible.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::budget::Budget;
use crate::error::Result;
use crate::int::Int;

pub(crate) trait Domain {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_unit(&self, a: &Self::E) -> bool;
    /// The `f` with `a + f * pivot = 0`; `pivot` is a unit.
    fn cancel(&self, a: &Self::E, pivot: &Self::E) -> Self::E;
    /// `a + f * b`
    fn mul_add(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
    fn check(&self, _meter: &crate::budget::Meter, _a: &Self::E) -> Result<()> {
        Ok(())
    }
}

pub(crate) struct Integers;

impl Domain for Integers {
    type E = Int;
    #[inline]
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    #[inline]
    fn is_unit(&self, a: &Int) -> bool {
        a.is_unit()
    }
    #[inline]
    fn cancel(&self, a: &Int, pivot: &Int) -> Int {
        // pivot is ±1 and its own inverse
        -(a * pivot)
    }
    #[inline]
    fn mul_add(&self, a: &Int, f: &Int, b: &Int) -> Int {
        a.mul_add(f, b)
    }
    #[inline]
    fn mul(&self, f: &Int, b: &Int) -> Int {
        f * b
    }
    fn check(&self, meter: &crate::budget::Meter, a: &Int) -> Result<()> {
        meter.value(a)
    }
}

/// The prime field with `p` elements, values in `0..p`.
pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn inv(&self, a: u64) -> u64 {
        // Fermat; p is prime
        let (mut base, mut e, mut acc) = (a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            e >>= 1;
        }
        acc
    }
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Domain for PrimeField {
    type E = u64;
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    #[inline]
    fn cancel(&self, a: &u64, pivot: &u64) -> u64 {
        let q = mulmod(*a, self.inv(*pivot), self.p);
        (self.p - q) % self.p
    }
    #[inline]
    fn mul_add(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        ((*a as u128 + *f as u128 * *b as u128) % self.p as u128) as u64
    }
    #[inline]
    fn mul(&self, f: &u64, b: &u64) -> u64 {
        mulmod(*f, *b, self.p)
    }
}

pub(crate) struct Pivot<E> {
    pub col: u32,
    /// The pivot row as it stood when chosen; its other columns are free
    /// columns or columns of later pivots.
    pub row: Vec<(u32, E)>,
}

pub(crate) struct Elimination<E> {
    pub pivot_count: usize,
    /// Pivot rows in elimination order, when requested.
    pub pivots: Vec<Pivot<E>>,
    /// Nonzero rows left without a unit entry.
    pub remainder: Vec<Vec<(u32, E)>>,
}

pub(crate) fn eliminate<D: Domain>(
    dom: &D,
    mut rows: Vec<Vec<(u32, D::E)>>,
    ncols: usize,
    keep_pivots: bool,
    budget: &Budget,
) -> Result<Elimination<D::E>> {
    let mut meter = budget.meter();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut live = 0usize;
    for (i, row) in rows.iter().enumerate() {
        live += row.len();
        for (c, _) in row {
            col_rows[*c as usize].push(i as u32);
        }
    }
    meter.entries(live)?;
    let mut active = vec![true; rows.len()];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| Reverse((r.len(), i as u32)))
        .collect();

    let mut pivots = Vec::new();
    let mut pivot_count = 0usize;
    let mut targets: Vec<u32> = Vec::new();

    while let Some(Reverse((len, r))) = heap.pop() {
        let ru = r as usize;
        if !active[ru] || rows[ru].len() != len {
            continue;
        }
        if len == 0 {
            active[ru] = false;
            continue;
        }
        let Some(pos) = choose_unit(dom, &rows[ru], &col_rows) else {
            continue; // parked until modified
        };
        meter.tick()?;
        let pivot_row = std::mem::take(&mut rows[ru]);
        let (pc, pv) = (pivot_row[pos].0, pivot_row[pos].1.clone());
        active[ru] = false;
        live -= pivot_row.len();

        targets.clear();
        targets.append(&mut col_rows[pc as usize]);
        targets.sort_unstable();
        targets.dedup();
        for &t in &targets {
            let tu = t as usize;
            if !active[tu] {
                continue;
            }
            let Ok(at) = rows[tu].binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let f = dom.cancel(&rows[tu][at].1, &pv);
            let old = std::mem::take(&mut rows[tu]);
            let old_len = old.len();
            let merged = merge_update(dom, &meter, old, &f, &pivot_row, |c| {
                col_rows[c as usize].push(t);
            })?;
            live = live + merged.len() - old_len;
            heap.push(Reverse((merged.len(), t)));
            rows[tu] = merged;
        }
        meter.entries(live)?;
        pivot_count += 1;
        if keep_pivots {
            pivots.push(Pivot {
                col: pc,
                row: pivot_row,
            });
        }
    }

    let remainder = rows
        .into_iter()
        .zip(active)
        .filter(|(r, a)| *a && !r.is_empty())
        .map(|(r, _)| r)
        .collect();
    Ok(Elimination {
        pivot_count,
        pivots,
        remainder,
    })
}

fn choose_unit<D: Domain>(dom: &D, row: &[(u32, D::E)], col_rows: &[Vec<u32>]) -> Option<usize> {
    row.iter()
        .enumerate()
        .filter(|(_, (_, v))| dom.is_unit(v))
        .min_by_key(|(_, (c, _))| (col_rows[*c as usize].len(), *c))
        .map(|(i, _)| i)
}

/// `a + f * b`, reporting columns that appear in the result but not in `a`.
fn merge_update<D: Domain>(
    dom: &D,
    meter: &crate::budget::Meter,
    a: Vec<(u32, D::E)>,
    f: &D::E,
    b: &[(u32, D::E)],
    mut fresh: impl FnMut(u32),
) -> Result<Vec<(u32, D::E)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut bi = 0;
    for (ca, va) in a {
        while bi < b.len() && b[bi].0 < ca {
            let v = dom.mul(f, &b[bi].1);
            dom.check(meter, &v)?;
            fresh(b[bi].0);
            out.push((b[bi].0, v));
            bi += 1;
        }
        if bi < b.len() && b[bi].0 == ca {
            let v = dom.mul_add(&va, f, &b[bi].1);
            bi += 1;
            if !dom.is_zero(&v) {
                dom.check(meter, &v)?;
                out.push((ca, v));
            }
        } else {
            out.push((ca, va));
        }
    }
    for (cb, vb) in &b[bi..] {
        let v = dom.mul(f, vb);
        dom.check(meter, &v)?;
        fresh(*cb);
        out.push((*cb, v));
    }
    Ok(out)
}

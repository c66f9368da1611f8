//! Column-major sparse integer matrices and the coordinate triplet format.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::dense::IntMatrix;
use crate::error::{LinalgError, Result};
use crate::int::Int;

/// A sparse vector: `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(u32, Int)>;

/// `a + f * b` for sorted sparse vectors, dropping cancellations.
pub fn axpy(a: &[(u32, Int)], f: &Int, b: &[(u32, Int)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ia, ib) = (a[i].0, b[j].0);
        if ia < ib {
            out.push(a[i].clone());
            i += 1;
        } else if ib < ia {
            out.push((ib, f * &b[j].1));
            j += 1;
        } else {
            let v = a[i].1.mul_add(f, &b[j].1);
            if !v.is_zero() {
                out.push((ia, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(k, v)| (*k, f * v)));
    out
}

pub fn sparse_get(v: &[(u32, Int)], idx: u32) -> Option<&Int> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|p| &v[p].1)
}

/// Integer matrix stored column by column.
///
/// Invariants: every column is sorted by row, has no duplicate rows and no
/// stored zeros, and all row indices are `< rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SparseIntMatrix {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> SparseIntMatrix {
        SparseIntMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i as u32, Int::ONE)]).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets. Zeros are dropped; a
    /// repeated coordinate is an error.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<SparseIntMatrix>
    where
        I: IntoIterator<Item = (usize, usize, Int)>,
    {
        let mut data: Vec<SparseVec> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::InvalidInput(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            if !v.is_zero() {
                data[c].push((r as u32, v));
            }
        }
        for (c, col) in data.iter_mut().enumerate() {
            col.sort_by_key(|e| e.0);
            if col.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(LinalgError::InvalidInput(format!(
                    "duplicate entry in column {c}"
                )));
            }
        }
        Ok(SparseIntMatrix { rows, cols, data })
    }

    /// Builds from already-sorted sparse columns.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Result<SparseIntMatrix> {
        for (c, col) in columns.iter().enumerate() {
            let sorted = col.windows(2).all(|w| w[0].0 < w[1].0);
            let in_range = col.last().is_none_or(|e| (e.0 as usize) < rows);
            if !sorted || !in_range || col.iter().any(|e| e.1.is_zero()) {
                return Err(LinalgError::InvalidInput(format!(
                    "column {c} is not a valid sparse column"
                )));
            }
        }
        Ok(SparseIntMatrix {
            rows,
            cols: columns.len(),
            data: columns,
        })
    }

    pub fn from_dense(m: &IntMatrix) -> SparseIntMatrix {
        let data = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter(|&r| !m[(r, c)].is_zero())
                    .map(|r| (r as u32, m[(r, c)].clone()))
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                m[(*r as usize, c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, Int)] {
        &self.data[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        sparse_get(&self.data[c], r as u32).cloned().unwrap_or_default()
    }

    /// Entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r as usize, c, v)))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                data[*r as usize].push((c as u32, v.clone()));
            }
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows as sparse vectors indexed by column.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = other.data.iter().map(|col| self.apply(col)).collect();
        Ok(SparseIntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `self * v` for a sparse vector `v`.
    pub fn apply(&self, v: &[(u32, Int)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (k, x) in v {
            acc = axpy(&acc, x, &self.data[*k as usize]);
        }
        acc
    }

    pub fn write_triplets<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(self.to_triplet_string().as_bytes())
    }

    /// MatrixMarket coordinate format: a banner, `rows cols nnz`, then one
    /// 1-based `row col value` line per entry in column-major order.
    pub fn to_triplet_string(&self) -> String {
        let mut s = String::new();
        s.push_str("%%MatrixMarket matrix coordinate integer general\n");
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {}", r + 1, c + 1, v);
        }
        s
    }

    pub fn read_triplets<R: BufRead>(r: R) -> Result<SparseIntMatrix> {
        let lines: Vec<String> = r
            .lines()
            .collect::<std::io::Result<_>>()
            .map_err(|e| LinalgError::Parse {
                line: 0,
                msg: e.to_string(),
            })?;
        let mut it = lines.iter().map(String::as_str).enumerate();
        parse_triplet_block(&mut it)
    }

    pub fn from_triplet_str(s: &str) -> Result<SparseIntMatrix> {
        let mut it = s.lines().enumerate();
        parse_triplet_block(&mut it)
    }
}

/// Parses one matrix from a line iterator, consuming exactly its lines.
pub(crate) fn parse_triplet_block<'a, I>(it: &mut I) -> Result<SparseIntMatrix>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let perr = |line: usize, msg: &str| LinalgError::Parse {
        line: line + 1,
        msg: msg.to_string(),
    };
    let mut header = None;
    for (no, line) in it.by_ref() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        header = Some((no, t));
        break;
    }
    let (hno, h) = header.ok_or_else(|| perr(0, "missing size line"))?;
    let dims: Vec<usize> = h
        .split_whitespace()
        .map(|x| x.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(hno, "size line must be `rows cols nnz`"))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(perr(hno, "size line must be `rows cols nnz`"));
    };
    let mut trip = Vec::with_capacity(nnz);
    while trip.len() < nnz {
        let (no, line) = it.next().ok_or_else(|| perr(hno, "truncated entry list"))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 {
            return Err(perr(no, "entry must be `row col value`"));
        }
        let r: usize = f[0].parse().map_err(|_| perr(no, "bad row"))?;
        let c: usize = f[1].parse().map_err(|_| perr(no, "bad column"))?;
        let v: Int = f[2].parse().map_err(|_| perr(no, "bad value"))?;
        if r == 0 || c == 0 {
            return Err(perr(no, "indices are 1-based"));
        }
        trip.push((r - 1, c - 1, v));
    }
    SparseIntMatrix::from_triplets(rows, cols, trip)
}

/// Several matrices in one text: each introduced by `@<label>` on its own
/// line, followed by a triplet block.
pub fn write_bundle(items: &[(String, &SparseIntMatrix)]) -> String {
    let mut s = String::new();
    for (label, m) in items {
        let _ = writeln!(s, "@{label}");
        s.push_str(&m.to_triplet_string());
    }
    s
}

pub fn read_bundle(text: &str) -> Result<Vec<(String, SparseIntMatrix)>> {
    let mut out = Vec::new();
    let mut it = text.lines().enumerate().peekable();
    while let Some((no, line)) = it.next() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let label = t.strip_prefix('@').ok_or_else(|| LinalgError::Parse {
            line: no + 1,
            msg: "expected `@label`".into(),
        })?;
        let m = parse_triplet_block(&mut it)?;
        out.push((label.to_string(), m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> SparseIntMatrix {
        SparseIntMatrix::from_dense(&IntMatrix::from_i64(rows, cols, v))
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        let t = vec![(0, 0, Int::ONE), (0, 0, Int::from(2))];
        assert!(SparseIntMatrix::from_triplets(1, 1, t).is_err());
        assert!(SparseIntMatrix::from_triplets(1, 1, vec![(1, 0, Int::ONE)]).is_err());
        let z = SparseIntMatrix::from_triplets(2, 2, vec![(1, 1, Int::ZERO)]).unwrap();
        assert_eq!(z.nnz(), 0);
    }

    #[test]
    fn triplet_text_roundtrip() {
        let a = m(2, 3, &[1, 0, -2, 0, 5, 0]);
        let text = a.to_triplet_string();
        assert!(text.starts_with("%%MatrixMarket"));
        assert!(text.contains("\n1 3 -2\n"));
        assert_eq!(SparseIntMatrix::from_triplet_str(&text).unwrap(), a);
        let b = m(1, 1, &[7]);
        let bundle = write_bundle(&[("d1".into(), &a), ("d2".into(), &b)]);
        let back = read_bundle(&bundle).unwrap();
        assert_eq!(back, vec![("d1".to_string(), a), ("d2".to_string(), b)]);
    }

    #[test]
    fn product_and_transpose() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let b = m(2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.mul(&b).unwrap(), m(2, 2, &[2, 1, 4, 3]));
        assert_eq!(a.transpose(), m(2, 2, &[1, 3, 2, 4]));
        let c = m(2, 2, &[1, -1, -1, 1]);
        assert!(c.mul(&m(2, 1, &[1, 1])).unwrap().is_zero());
    }
}

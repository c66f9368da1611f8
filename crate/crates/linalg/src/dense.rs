use std::fmt;
use std::ops::{Index, IndexMut};

use crate::int::Int;

/// Dense row-major integer matrix, used for representation matrices and
/// small elimination problems.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::ONE;
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, v: &[i64]) -> IntMatrix {
        assert_eq!(v.len(), rows * cols, "shape mismatch");
        IntMatrix {
            rows,
            cols,
            data: v.iter().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Only the diagonal may be nonzero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cell = &mut out.data[i * other.cols + j];
                        *cell = cell.mul_add(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, f: &Int) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * f).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> Int {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::ONE;
        }
        let mut a = self.clone();
        let mut sign = Int::ONE;
        let mut prev = Int::ONE;
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Int::ZERO;
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[(i, k)] = Int::ZERO;
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += f * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &Int) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                let d = &mut self.data[dst * self.cols + j];
                *d = d.mul_add(f, &s);
            }
        }
    }

    /// `col[dst] += f * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, f: &Int) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                let d = &mut self.data[i * self.cols + dst];
                *d = d.mul_add(f, &s);
            }
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + c];
            self.data[i * self.cols + c] = v;
        }
    }

    /// Applies the 2×2 unimodular block `[[a, b], [c, d]]` to rows `(r, s)`.
    pub fn mix_rows(&mut self, r: usize, s: usize, a: &Int, b: &Int, c: &Int, d: &Int) {
        for j in 0..self.cols {
            let x = self.data[r * self.cols + j].clone();
            let y = self.data[s * self.cols + j].clone();
            self.data[r * self.cols + j] = a * &x + b * &y;
            self.data[s * self.cols + j] = c * &x + d * &y;
        }
    }

    /// Applies the 2×2 block to columns: `col_r' = a col_r + b col_s`,
    /// `col_s' = c col_r + d col_s`.
    pub fn mix_cols(&mut self, r: usize, s: usize, a: &Int, b: &Int, c: &Int, d: &Int) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + r].clone();
            let y = self.data[i * self.cols + s].clone();
            self.data[i * self.cols + r] = a * &x + b * &y;
            self.data[i * self.cols + s] = c * &x + d * &y;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Int::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

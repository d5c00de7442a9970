//! Dense integer matrices, row major, arbitrary precision.

use super::Int;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq)]
pub struct DenseMat {
    rows: usize,
    cols: usize,
    d: Vec<Int>,
}

impl DenseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMat {
            rows,
            cols,
            d: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::from(1));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = DenseMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        DenseMat::from_fn(r, c, |i, j| Int::from(rows[i][j]))
    }

    /// Build from column vectors; `rows` fixes the height even when empty.
    pub fn from_cols(rows: usize, cols: &[Vec<Int>]) -> Self {
        let mut m = DenseMat::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m.set(i, j, col[i].clone());
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

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.d[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.d[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, o: &DenseMat) -> DenseMat {
        assert_eq!(self.cols, o.rows);
        let mut out = DenseMat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Int::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns of `self` followed by columns of `o`.
    pub fn hstack(&self, o: &DenseMat) -> DenseMat {
        assert_eq!(self.rows, o.rows);
        DenseMat::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    /// Rows of `self` above rows of `o`.
    pub fn vstack(&self, o: &DenseMat) -> DenseMat {
        assert_eq!(self.cols, o.cols);
        DenseMat::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                o.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn transpose(&self) -> DenseMat {
        DenseMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix_rows(&self, keep: &[usize]) -> DenseMat {
        DenseMat::from_fn(keep.len(), self.cols, |i, j| self.get(keep[i], j).clone())
    }

    pub fn submatrix_cols(&self, keep: &[usize]) -> DenseMat {
        DenseMat::from_fn(self.rows, keep.len(), |i, j| self.get(i, keep[j]).clone())
    }

    // Elementary operations used by the normal form routines.

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.d.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.d.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    pub fn row_axpy(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(b, j);
            if !v.is_zero() {
                let nv = self.get(a, j) + q * v;
                self.set(a, j, nv);
            }
        }
    }

    /// col[a] += q * col[b]
    pub fn col_axpy(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, b);
            if !v.is_zero() {
                let nv = self.get(i, a) + q * v;
                self.set(i, a, nv);
            }
        }
    }

    /// Replace rows (a, b) by (p*a + q*b, r*a + s*b).
    pub fn two_row_op(&mut self, a: usize, b: usize, p: &Int, q: &Int, r: &Int, s: &Int) {
        for j in 0..self.cols {
            let va = self.get(a, j).clone();
            let vb = self.get(b, j).clone();
            self.set(a, j, p * &va + q * &vb);
            self.set(b, j, r * &va + s * &vb);
        }
    }

    /// Replace cols (a, b) by (p*a + q*b, r*a + s*b).
    pub fn two_col_op(&mut self, a: usize, b: usize, p: &Int, q: &Int, r: &Int, s: &Int) {
        for i in 0..self.rows {
            let va = self.get(i, a).clone();
            let vb = self.get(i, b).clone();
            self.set(i, a, p * &va + q * &vb);
            self.set(i, b, r * &va + s * &vb);
        }
    }

    pub fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            self.set(a, j, v);
        }
    }

    pub fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, a).clone();
            self.set(i, a, v);
        }
    }
}

impl std::fmt::Debug for DenseMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

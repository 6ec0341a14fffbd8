//! Dense arbitrary-precision matrices: integer matrices with fraction-free
//! elimination, and rational matrices with exact solving.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// gcd of a slice, nonnegative; 0 for the empty slice or all-zero input.
pub fn gcd_all(xs: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
    }
    g
}

/// Divide a vector by the gcd of its entries, keeping direction.
pub fn primitivize(v: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v).is_one()
}

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Test helper: build from i64 rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| bi(rows[i][j]))
    }

    /// Columns are the given vectors, all of length `dim`.
    pub fn from_columns(dim: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|v| v.len() == dim), "column length mismatch");
        Self::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_slice(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "apply dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> IntMatrix {
        Self::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self[(row_idx[i], col_idx[j])].clone()
        })
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| {
            BigRational::from_integer(self[(i, j)].clone())
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            let Some(p) = (rank..m).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            for i in rank + 1..m {
                for j in col + 1..n {
                    let num = &a[(rank, col)] * &a[(i, j)] - &a[(i, col)] * &a[(rank, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, col)] = BigInt::zero();
            }
            prev = a[(rank, col)].clone();
            rank += 1;
            if rank == m {
                break;
            }
        }
        rank
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row[dst] += q * row[src]
    pub(crate) fn add_multiple_of_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = q * &self[(src, c)];
            self[(dst, c)] += t;
        }
    }

    /// col[dst] += q * col[src]
    pub(crate) fn add_multiple_of_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = q * &self[(r, src)];
            self[(r, dst)] += t;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Row-major dense rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[Vec<BigRational>]) -> Self {
        assert!(cols.iter().all(|v| v.len() == dim), "column length mismatch");
        Self::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "apply dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_integer()))
    }

    /// Scale by the positive rational that makes all entries integral and
    /// coprime. The zero matrix maps to the integer zero matrix.
    pub fn clear_denominators(&self) -> IntMatrix {
        let mut lcm = BigInt::one();
        for x in &self.data {
            lcm = lcm.lcm(x.denom());
        }
        let scaled: Vec<BigInt> =
            self.data.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = gcd_all(&scaled);
        let mut data = scaled;
        if !g.is_zero() && !g.is_one() {
            for x in &mut data {
                *x /= &g;
            }
        }
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Rank: clear denominators row-wise then run fraction-free elimination.
    pub fn rank(&self) -> usize {
        let cleared = IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                lcm = lcm.lcm(self[(i, c)].denom());
            }
            (&self[(i, j)] * BigRational::from_integer(lcm)).to_integer()
        });
        cleared.rank()
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigRational::one();
        }
        let mut a = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &pivot;
                for j in k..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let pivot = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] /= &pivot;
                inv[(k, j)] /= &pivot;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= t;
                    let t = &f * &inv[(k, j)];
                    inv[(i, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    /// One exact solution of `self * x = rhs` (free variables set to zero),
    /// or None if inconsistent.
    pub fn solve(&self, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, rhs.len(), "solve dimension mismatch");
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..m).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            b.swap(r, p);
            let pivot = a[(r, col)].clone();
            for j in col..n {
                a[(r, j)] /= &pivot;
            }
            b[r] /= &pivot;
            for i in 0..m {
                if i == r || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in col..n {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
            pivots.push((r, col));
            r += 1;
            if r == m {
                break;
            }
        }
        if b[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); n];
        for &(row, col) in &pivots {
            x[col] = b[row].clone();
        }
        Some(x)
    }

    /// Basis of the right null space, deterministic (one vector per free
    /// column of the reduced echelon form).
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..m).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let pivot = a[(r, col)].clone();
            for j in col..n {
                a[(r, j)] /= &pivot;
            }
            for i in 0..m {
                if i == r || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in col..n {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= t;
                }
            }
            pivots.push((r, col));
            r += 1;
            if r == m {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for &(row, col) in &pivots {
                v[col] = -a[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_rank() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(a.det(), bi(6));
        assert_eq!(a.rank(), 2);
        let b = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(b.det(), bi(0));
        assert_eq!(b.rank(), 1);
        let c = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(c.det(), bi(0));
        assert_eq!(c.rank(), 2);
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).to_q();
        assert!(a.solve(&[rat(1), rat(2)]).is_some());
        assert!(a.solve(&[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3]]).to_q();
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn clear_denominators_primitive() {
        let m = QMatrix::from_fn(2, 2, |i, j| {
            if i == j && i == 0 {
                BigRational::new(bi(1), bi(1))
            } else if i == j {
                BigRational::new(bi(1), bi(2))
            } else {
                BigRational::zero()
            }
        });
        let cleared = m.clear_denominators();
        assert_eq!(cleared, IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 5]]).to_q();
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).to_int().unwrap().is_identity());
    }
}

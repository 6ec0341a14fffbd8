//! Smith normal form with certified unimodular factors.
//!
//! `snf` maintains U, U^{-1}, V, V^{-1} alongside the working matrix so the
//! identity U*A*V = D can be checked and the inverses reused for saturation,
//! kernel, and quotient computations. Pivoting always reduces by the smallest
//! nonzero absolute entry of the remaining submatrix, so the output is
//! deterministic for a given input.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::mat::IntMatrix;

#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn u_inv(&self) -> &IntMatrix {
        &self.u_inv
    }

    pub fn v_inv(&self) -> &IntMatrix {
        &self.v_inv
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries d1 | d2 | ... | dr.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    /// Check U*A*V = D, unimodularity of U and V, and the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        if self.u.matmul(a).matmul(&self.v) != self.d {
            return false;
        }
        if !self.u.matmul(&self.u_inv).is_identity() || !self.v.matmul(&self.v_inv).is_identity() {
            return false;
        }
        let n = self.d.rows().min(self.d.cols());
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let factors = self.invariant_factors();
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        for i in 0..n {
            if self.d[(i, i)].is_negative() {
                return false;
            }
        }
        true
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += q*row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_multiple_of_row(dst, src, q);
        self.u.add_multiple_of_row(dst, src, q);
        let neg = -q.clone();
        self.u_inv.add_multiple_of_col(src, dst, &neg);
    }

    /// col[dst] += q*col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_multiple_of_col(dst, src, q);
        self.v.add_multiple_of_col(dst, src, q);
        let neg = -q.clone();
        self.v_inv.add_multiple_of_row(src, dst, &neg);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smallest-absolute-value nonzero entry in the submatrix at (k..,k..),
/// ties broken by (row, col).
fn select_pivot(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    if d[(i, j)].abs() < d[b].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let steps = m.min(n);
    for k in 0..steps {
        while let Some((pi, pj)) = select_pivot(&w.d, k) {
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);
            let mut clean = true;
            for i in k + 1..m {
                if w.d[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&w.d[(i, k)] / &w.d[(k, k)]);
                w.row_op(i, k, &q);
                if !w.d[(i, k)].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if w.d[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&w.d[(k, j)] / &w.d[(k, k)]);
                w.col_op(j, k, &q);
                if !w.d[(k, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the remaining submatrix before we move on
            let mut fixed = None;
            'scan: for i in k + 1..m {
                for j in k + 1..n {
                    if !(&w.d[(i, j)] % &w.d[(k, k)]).is_zero() {
                        fixed = Some(i);
                        break 'scan;
                    }
                }
            }
            match fixed {
                Some(i) => w.row_op(k, i, &BigInt::one()),
                None => break,
            }
        }
        if w.d[(k, k)].is_negative() {
            w.negate_row(k);
        }
    }
    let dec = SmithDecomposition { u: w.u, d: w.d, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv };
    debug_assert!(dec.verify(a));
    dec
}

/// Structure of coker(A : Z^cols -> Z^rows) as Z^free + sum Z/f_i with all f_i > 1.
pub fn cokernel_structure(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let dec = snf(a);
    let rank = dec.rank();
    let free = a.rows() - rank;
    let torsion = dec
        .invariant_factors()
        .into_iter()
        .filter(|f| !f.is_one())
        .collect();
    (free, torsion)
}

//! Exact dense linear algebra over `Q` and `F_p`.
//!
//! The matrices that arise here are small (differential blocks of truncated
//! Hochschild complexes, pairing blocks of finite-dimensional algebras), so
//! a dense Gaussian elimination with deterministic first-nonzero pivoting
//! is both the simplest and the most auditable choice. Everything is exact;
//! there is no pivot-magnitude heuristics because there is no rounding.

use crate::scalar::{Field, Scalar};

/// A dense matrix in row-major order.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Row-reduce in place; returns the pivot columns in order. Pivoting is
    /// deterministic: for each column (left to right) the first row with a
    /// nonzero entry is chosen.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = self.at(row, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&factor.mul(self.at(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of the kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::zero(self.field); self.cols];
            vec[free] = Scalar::one(self.field);
            for (prow, &pcol) in pivots.iter().enumerate() {
                vec[pcol] = m.at(prow, free).neg();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve `A x = b`; returns `None` when inconsistent. When the system is
    /// underdetermined the free variables are set to zero, which is again a
    /// deterministic choice.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.at(prow, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(Field::Q, n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = Matrix::zero(Field::Q, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, q(v));
            }
        }
        m
    }

    #[test]
    fn rank_and_nullspace() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // Check A v = 0 for the kernel vector.
        for r in 0..m.rows {
            let mut acc = Scalar::zero(Field::Q);
            for c in 0..m.cols {
                acc = acc.add(&m.at(r, c).mul(&ns[0][c]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        let x = m.solve(&[q(4), q(9)]).unwrap();
        assert_eq!(x, vec![q(2), q(3)]);

        let m = mat(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[q(1), q(3)]).is_none());
    }

    #[test]
    fn prime_field_elimination() {
        let f = Field::Fp(7);
        let mut m = Matrix::zero(f, 2, 2);
        m.set(0, 0, Scalar::from_i64(f, 3));
        m.set(0, 1, Scalar::from_i64(f, 5));
        m.set(1, 0, Scalar::from_i64(f, 6));
        m.set(1, 1, Scalar::from_i64(f, 10));
        assert_eq!(m.rank(), 1);
    }
}

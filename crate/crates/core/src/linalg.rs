//! Dense exact-rational matrices: Gaussian elimination, rank, nullspace,
//! and linear solving. Sizes here are desk-scale, so a straightforward
//! row-reduction with the first nonzero pivot is both fast enough and
//! deterministic.

use crate::rational::Rational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.get_mut(c, r) = self.get(r, c).clone();
            }
        }
        t
    }

    /// Appends `extra` as additional columns (same row count).
    pub fn augment(&self, extra: &Matrix) -> Matrix {
        assert_eq!(self.rows, extra.rows);
        let mut out = Matrix::zero(self.rows, self.cols + extra.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.get_mut(r, c) = self.get(r, c).clone();
            }
            for c in 0..extra.cols {
                *out.get_mut(r, self.cols + c) = extra.get(r, c).clone();
            }
        }
        out
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order;
    /// the rank is their count.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pivot_row);
            let inv = self.get(row, col).clone().recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                *self.get_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let v = self.get(r, c) - &factor * self.get(row, c);
                    *self.get_mut(r, c) = v;
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
        self.clone().rref().len()
    }

    /// Basis of `{x : Ax = 0}`, one vector per free column, in ascending free
    /// column order with the free coordinate set to 1. Deterministic.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rational::zero(); self.cols];
                v[fc] = Rational::one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    v[pcol] = -reduced.get(prow, fc).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `Ax = b` when consistent (free variables set to zero).
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let rhs = Matrix::from_rows(b.iter().map(|v| vec![v.clone()]).collect());
        let mut aug = self.augment(&rhs);
        let pivots = aug.rref();
        // A pivot in the appended column means the system is inconsistent.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.get(prow, self.cols).clone();
        }
        Some(x)
    }

    /// Multiplies `self` by a column vector.
    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &x[c]).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_of_identity_and_singular() {
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[1, 1, 1], &[1, 1, 1]]).rank(), 1);
    }

    #[test]
    fn rref_produces_exact_fractions() {
        let mut a = m(&[&[2, 1], &[1, 3]]);
        let pivots = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(*a.get(0, 0), rat_int(1));
        assert_eq!(*a.get(1, 1), rat_int(1));
    }

    #[test]
    fn nullspace_vectors_satisfy_system() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let basis = a.nullspace();
        assert_eq!(basis.len(), 1);
        for v in &basis {
            assert!(a.mul_vec(v).iter().all(|e| e == &rat_int(0)));
        }
        assert_eq!(basis[0], vec![rat_int(-1), rat_int(-1), rat_int(1)]);
    }

    #[test]
    fn nullspace_of_full_rank_is_empty() {
        assert!(Matrix::identity(3).nullspace().is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let x = a.solve(&[rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 4)]);

        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[rat_int(0), rat_int(1)]).is_none());
        assert!(b.solve(&[rat_int(1), rat_int(1)]).is_some());
    }

    #[test]
    fn solve_underdetermined_picks_particular_solution() {
        let a = m(&[&[1, 1, 0]]);
        let x = a.solve(&[rat_int(5)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat_int(5)]);
    }
}

//! Dense linear algebra over F_p: row reduction, rank, nullspace, and
//! linear solves. Small matrices only; used for degree-by-degree work.

use crate::fp::{FieldChar, Fp};

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Fp>,
}

impl FpMat {
    pub fn zero(rows: usize, cols: usize) -> FpMat {
        FpMat { rows, cols, data: vec![Fp(0); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> Fp {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fp) {
        self.data[i * self.cols + j] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, field: &FieldChar) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| self.get(i, col).0 != 0) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = field.inv(self.get(row, col)).expect("pivot is nonzero");
            self.scale_row(row, inv, field);
            for i in 0..self.rows {
                if i != row && self.get(i, col).0 != 0 {
                    let c = self.get(i, col);
                    self.axpy_row(i, row, field.neg(c), field);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &FieldChar) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// Basis of {x : self * x = 0}, one vector per free column.
    pub fn nullspace(&self, field: &FieldChar) -> Vec<Vec<Fp>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![Fp(0); self.cols];
            x[free] = field.one();
            for (col, slot) in pivot_set.iter().enumerate() {
                if let Some(r) = slot {
                    x[col] = field.neg(m.get(*r, free));
                }
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of self * x = b, if consistent.
    pub fn solve(&self, b: &[Fp], field: &FieldChar) -> Option<Vec<Fp>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref(field);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Fp(0); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: Fp, field: &FieldChar) {
        for j in 0..self.cols {
            let v = self.get(r, j);
            self.set(r, j, field.mul(v, c));
        }
    }

    /// row i += c * row r.
    fn axpy_row(&mut self, i: usize, r: usize, c: Fp, field: &FieldChar) {
        for j in 0..self.cols {
            let v = field.add(self.get(i, j), field.mul(c, self.get(r, j)));
            self.set(i, j, v);
        }
    }
}

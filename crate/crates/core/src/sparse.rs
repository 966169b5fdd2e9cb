//! Minimal rectangular sparse matrices used to assemble operators.
//!
//! Two flavors: integer incidence matrices (exact coboundaries, nilpotency
//! checks over Z) and real matrices (deformed coboundaries, adjoints, block
//! supercharges). Only the handful of operations the assembly paths need.

use std::collections::BTreeMap;

/// Integer sparse matrix in triplet form with deterministic ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl IntSparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        debug_assert!(r < self.rows && c < self.cols);
        let e = self.entries.entry((r, c)).or_insert(0);
        *e += v;
        if *e == 0 {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries.get(&(r, c)).copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Exact integer product self * other.
    pub fn matmul(&self, other: &IntSparseMatrix) -> IntSparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.iter_entries() {
            by_row[r].push((c, v));
        }
        let mut out = IntSparseMatrix::new(self.rows, other.cols);
        for (r, k, v) in self.iter_entries() {
            for &(c, w) in &by_row[k] {
                out.add(r, c, v * w);
            }
        }
        out
    }

    pub fn max_abs(&self) -> i64 {
        self.entries.values().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn to_real(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.rows, self.cols);
        for (r, c, v) in self.iter_entries() {
            m.add(r, c, v as f64);
        }
        m
    }

    /// Signed incidence acting on a dense integer vector.
    pub fn apply_i64(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0i64; self.rows];
        for (r, c, v) in self.iter_entries() {
            y[r] += v * x[c];
        }
        y
    }
}

/// Real sparse matrix in triplet form with deterministic ordering.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        if v != 0.0 {
            *self.entries.entry((r, c)).or_insert(0.0) += v;
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::new(self.cols, self.rows);
        for (r, c, v) in self.iter_entries() {
            out.add(c, r, v);
        }
        out
    }

    /// diag(d) * self
    pub fn scale_rows(&self, d: &[f64]) -> SparseMatrix {
        assert_eq!(d.len(), self.rows);
        let mut out = SparseMatrix::new(self.rows, self.cols);
        for (r, c, v) in self.iter_entries() {
            out.add(r, c, d[r] * v);
        }
        out
    }

    /// self * diag(d)
    pub fn scale_cols(&self, d: &[f64]) -> SparseMatrix {
        assert_eq!(d.len(), self.cols);
        let mut out = SparseMatrix::new(self.rows, self.cols);
        for (r, c, v) in self.iter_entries() {
            out.add(r, c, v * d[c]);
        }
        out
    }

    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.iter_entries() {
            by_row[r].push((c, v));
        }
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (r, k, v) in self.iter_entries() {
            for &(c, w) in &by_row[k] {
                out.add(r, c, v * w);
            }
        }
        out
    }

    pub fn add_matrix(&mut self, other: &SparseMatrix) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (r, c, v) in other.iter_entries() {
            self.add(r, c, v);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for (r, c, v) in self.iter_entries() {
            y[r] += v * x[c];
        }
        y
    }

    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        self.iter_entries().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_matmul_and_cancellation() {
        let mut a = IntSparseMatrix::new(2, 2);
        a.add(0, 0, 1);
        a.add(0, 1, -1);
        a.add(1, 0, 1);
        let mut b = IntSparseMatrix::new(2, 1);
        b.add(0, 0, 1);
        b.add(1, 0, 1);
        let c = a.matmul(&b);
        assert_eq!(c.get(0, 0), 0);
        assert_eq!(c.get(1, 0), 1);
        assert_eq!(c.nnz(), 1);
    }

    #[test]
    fn real_transpose_scale() {
        let mut m = SparseMatrix::new(2, 3);
        m.add(0, 2, 2.0);
        m.add(1, 0, -1.0);
        let t = m.transpose();
        assert_eq!(t.rows, 3);
        let s = m.scale_rows(&[2.0, 3.0]).scale_cols(&[1.0, 1.0, 10.0]);
        let entries: Vec<_> = s.triplets();
        assert_eq!(entries, vec![(0, 2, 40.0), (1, 0, -3.0)]);
    }
}

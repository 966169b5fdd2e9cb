//! Integer homology ranks via Smith normal form.
//!
//! This is the independent route to Betti numbers: exact integer arithmetic
//! over the boundary matrices, no floating point, no eigensolver. It exists
//! to cross-check the harmonic-kernel route in [`crate::dec`], so it shares
//! nothing with it beyond the complex's integer incidence data.

use crate::dec::SimplicialComplex;

/// Dense integer matrix in row-major storage. Entries use `i128`; the
/// elimination keeps pivots small by always choosing a minimal-magnitude
/// pivot, which is plenty of headroom for incidence matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, entries: &[i128]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            data: entries.to_vec(),
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] -= q * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: i128) {
        for c in 0..self.cols {
            let v = self.get(source, c);
            let t = self.get(target, c) - q * v;
            self.set(target, c, t);
        }
    }

    fn col_axpy(&mut self, target: usize, source: usize, q: i128) {
        for r in 0..self.rows {
            let v = self.get(r, source);
            let t = self.get(r, target) - q * v;
            self.set(r, target, t);
        }
    }
}

/// Diagonal of the Smith normal form (invariant factors, each dividing the
/// next) together with the rank.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub diagonal: Vec<i128>,
    pub rank: usize,
}

/// Smith normal form by repeated minimal-pivot elimination.
pub fn smith_normal_form(input: &IntMatrix) -> SmithNormalForm {
    let mut m = input.clone();
    let n = m.rows.min(m.cols);
    let mut k = 0;
    while k < n {
        // Minimal nonzero |entry| in the trailing block as pivot.
        let mut pivot: Option<(usize, usize, i128)> = None;
        for r in k..m.rows {
            for c in k..m.cols {
                let v = m.get(r, c);
                if v != 0 {
                    match pivot {
                        Some((_, _, p)) if v.abs() >= p.abs() => {}
                        _ => pivot = Some((r, c, v)),
                    }
                }
            }
        }
        let Some((pr, pc, _)) = pivot else { break };
        m.swap_rows(k, pr);
        m.swap_cols(k, pc);
        if m.get(k, k) < 0 {
            for c in 0..m.cols {
                let v = m.get(k, c);
                m.set(k, c, -v);
            }
        }

        // Clear the pivot row and column; restart whenever a remainder
        // forces a smaller pivot into view.
        loop {
            let p = m.get(k, k);
            let mut dirty = false;
            for r in (k + 1)..m.rows {
                let v = m.get(r, k);
                if v != 0 {
                    let q = v.div_euclid(p);
                    m.row_axpy(r, k, q);
                    if m.get(r, k) != 0 {
                        // Remainder is smaller than the pivot; swap it up.
                        m.swap_rows(k, r);
                        dirty = true;
                        break;
                    }
                }
            }
            if dirty {
                continue;
            }
            for c in (k + 1)..m.cols {
                let v = m.get(k, c);
                if v != 0 {
                    let q = v.div_euclid(p);
                    m.col_axpy(c, k, q);
                    if m.get(k, c) != 0 {
                        m.swap_cols(k, c);
                        dirty = true;
                        break;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: fold any entry not divisible by the pivot into the
        // pivot row, then redo this k.
        let p = m.get(k, k);
        let mut fixed = true;
        'scan: for r in (k + 1)..m.rows {
            for c in (k + 1)..m.cols {
                if m.get(r, c) % p != 0 {
                    // add row r to row k, making column c reducible
                    m.row_axpy(k, r, -1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if m.get(k, k) < 0 {
                for c in 0..m.cols {
                    let v = m.get(k, c);
                    m.set(k, c, -v);
                }
            }
            k += 1;
        }
    }

    let mut diagonal = Vec::with_capacity(n);
    let mut rank = 0;
    for i in 0..n {
        let v = m.get(i, i);
        diagonal.push(v);
        if v != 0 {
            rank += 1;
        }
    }
    SmithNormalForm { diagonal, rank }
}

/// Rank of an integer matrix (over Q), via Smith normal form.
pub fn integer_rank(m: &IntMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    smith_normal_form(m).rank
}

/// Betti numbers of a simplicial complex from integer boundary ranks:
/// `beta_p = n_p - rank(boundary_p) - rank(boundary_{p+1})`.
///
/// The boundary matrix of degree p is the transpose of the degree-(p-1)
/// coboundary, so this route consumes only the integer incidence data.
pub fn betti_numbers_snf(complex: &SimplicialComplex) -> Vec<usize> {
    let top = complex.top_dimension();
    let mut boundary_ranks = vec![0usize; top + 2];
    for p in 1..=top {
        let d = complex.coboundary(p - 1).expect("valid degree");
        // d maps p-1 cochains to p cochains; as a boundary matrix of degree
        // p it is the same integer matrix read transposed. Rank is shared.
        let mut m = IntMatrix::zeros(d.rows, d.cols);
        for (r, c, v) in d.iter_entries() {
            m.set(r, c, v as i128);
        }
        boundary_ranks[p] = integer_rank(&m);
    }
    (0..=top)
        .map(|p| complex.simplex_count(p) - boundary_ranks[p] - boundary_ranks[p + 1])
        .collect()
}

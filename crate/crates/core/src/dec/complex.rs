//! Simplicial complex storage, face closure, and integer coboundaries.

use super::DecError;
use crate::sparse::IntSparseMatrix;
use std::collections::{BTreeMap, BTreeSet};

/// How distances and barycenters are computed from vertex coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexMetric {
    /// Coordinates are honest points in R^3.
    Embedded,
    /// The first two coordinates live on a flat torus `[0, period)^2` (or
    /// `[0, period)` for curves); differences are taken minimum-image.
    PeriodicFlat { period: f64 },
}

/// Oriented simplicial complex.
///
/// Simplices are stored as ascending vertex tuples per degree; orientation
/// is the one induced by ascending order. Faces are closed downward at
/// construction, and lookups are by binary search over the sorted tuples so
/// indices are deterministic.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertices: Vec<[f64; 3]>,
    /// simplices[p] = sorted ascending vertex tuples of the p-simplices
    simplices: Vec<Vec<Vec<usize>>>,
    metric: ComplexMetric,
}

impl SimplicialComplex {
    /// Build from top-degree simplices (any degree mix is allowed); all
    /// faces are generated and stored.
    pub fn from_simplices(
        vertices: Vec<[f64; 3]>,
        top_simplices: Vec<Vec<usize>>,
        metric: ComplexMetric,
    ) -> Result<Self, DecError> {
        if vertices.is_empty() {
            return Err(DecError::InvalidComplex("no vertices".into()));
        }
        let nv = vertices.len();
        let mut per_degree: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        let insert = |simplex: Vec<usize>, per_degree: &mut Vec<BTreeSet<Vec<usize>>>| {
            let p = simplex.len() - 1;
            while per_degree.len() <= p {
                per_degree.push(BTreeSet::new());
            }
            per_degree[p].insert(simplex);
        };
        for s in &top_simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != top_simplices_len(top_simplices.first(), &s) {
                // allowed: mixed degrees; only repeated vertices are fatal
            }
            if s.is_empty() {
                return Err(DecError::InvalidComplex("empty simplex".into()));
            }
            if s.iter().any(|&v| v >= nv) {
                return Err(DecError::InvalidComplex(format!(
                    "vertex index out of range in {s:?}"
                )));
            }
            insert(s, &mut per_degree);
        }
        // close downward
        for p in (1..per_degree.len()).rev() {
            let faces: Vec<Vec<usize>> = per_degree[p]
                .iter()
                .flat_map(|s| {
                    (0..s.len()).map(move |skip| {
                        s.iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect::<Vec<usize>>()
                    })
                })
                .collect();
            for f in faces {
                per_degree[p - 1].insert(f);
            }
        }
        // all vertices appear as 0-simplices
        if per_degree.is_empty() {
            per_degree.push(BTreeSet::new());
        }
        for v in 0..nv {
            per_degree[0].insert(vec![v]);
        }
        let simplices: Vec<Vec<Vec<usize>>> = per_degree
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        Ok(Self {
            vertices,
            simplices,
            metric,
        })
    }

    pub fn metric(&self) -> ComplexMetric {
        self.metric
    }

    pub fn vertex_coordinates(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn top_dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplex_count(&self, p: usize) -> usize {
        self.simplices.get(p).map_or(0, |s| s.len())
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        &self.simplices[p]
    }

    pub fn simplex_index(&self, p: usize, ascending: &[usize]) -> Option<usize> {
        self.simplices
            .get(p)?
            .binary_search_by(|s| s.as_slice().cmp(ascending))
            .ok()
    }

    /// Signed incidence matrix of `d_p` mapping p-cochains to (p+1)-cochains.
    /// Row = (p+1)-simplex, column = p-face, sign `(-1)^j` for the face that
    /// drops the j-th vertex of the ascending tuple.
    pub fn coboundary(&self, p: usize) -> Result<IntSparseMatrix, DecError> {
        let top = self.top_dimension();
        if p >= top {
            return Err(DecError::DegreeOutOfRange { degree: p, top });
        }
        let mut d = IntSparseMatrix::new(self.simplex_count(p + 1), self.simplex_count(p));
        for (row, s) in self.simplices[p + 1].iter().enumerate() {
            for (j, _) in s.iter().enumerate() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &v)| v)
                    .collect();
                let col = self
                    .simplex_index(p, &face)
                    .expect("faces closed at construction");
                let sign = if j % 2 == 0 { 1 } else { -1 };
                d.add(row, col, sign);
            }
        }
        Ok(d)
    }

    /// Closedness for Betti runs: in a closed complex, every (top-1)-simplex
    /// is a face of exactly two top simplices (curves: every vertex in two
    /// edges).
    pub fn check_closed(&self) -> Result<(), DecError> {
        let top = self.top_dimension();
        if top == 0 {
            return Err(DecError::NotClosed("complex has only vertices".into()));
        }
        let mut face_use: BTreeMap<&[usize], usize> = BTreeMap::new();
        for s in &self.simplices[top] {
            for j in 0..s.len() {
                let mut face: Vec<usize> = s.clone();
                face.remove(j);
                let idx = self
                    .simplex_index(top - 1, &face)
                    .expect("faces closed at construction");
                *face_use
                    .entry(self.simplices[top - 1][idx].as_slice())
                    .or_insert(0) += 1;
            }
        }
        if face_use.len() != self.simplex_count(top - 1) {
            return Err(DecError::NotClosed(format!(
                "{} of {} faces belong to no top simplex",
                self.simplex_count(top - 1) - face_use.len(),
                self.simplex_count(top - 1)
            )));
        }
        for (face, count) in face_use {
            if count != 2 {
                return Err(DecError::NotClosed(format!(
                    "face {face:?} shared by {count} top simplices (want 2)"
                )));
            }
        }
        Ok(())
    }

    /// Difference vector `b - a` respecting the metric.
    pub fn displacement(&self, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        match self.metric {
            ComplexMetric::Embedded => [b[0] - a[0], b[1] - a[1], b[2] - a[2]],
            ComplexMetric::PeriodicFlat { period } => {
                let wrap = |d: f64| {
                    let mut d = d % period;
                    if d > period / 2.0 {
                        d -= period;
                    }
                    if d < -period / 2.0 {
                        d += period;
                    }
                    d
                };
                [wrap(b[0] - a[0]), wrap(b[1] - a[1]), b[2] - a[2]]
            }
        }
    }

    /// Barycenter of a simplex (minimum-image around its first vertex for
    /// periodic metrics).
    pub fn barycenter(&self, p: usize, index: usize) -> [f64; 3] {
        let s = &self.simplices[p][index];
        let base = self.vertices[s[0]];
        let mut acc = [0.0f64; 3];
        for &v in s.iter() {
            let d = self.displacement(base, self.vertices[v]);
            acc[0] += d[0];
            acc[1] += d[1];
            acc[2] += d[2];
        }
        let k = s.len() as f64;
        [
            base[0] + acc[0] / k,
            base[1] + acc[1] / k,
            base[2] + acc[2] / k,
        ]
    }

    /// Positions of a simplex's vertices unwrapped around the first vertex.
    pub fn simplex_points(&self, p: usize, index: usize) -> Vec<[f64; 3]> {
        let s = &self.simplices[p][index];
        let base = self.vertices[s[0]];
        s.iter()
            .map(|&v| {
                let d = self.displacement(base, self.vertices[v]);
                [base[0] + d[0], base[1] + d[1], base[2] + d[2]]
            })
            .collect()
    }

    /// Unsigned volume of a simplex (length / area; vertices are points).
    pub fn simplex_volume(&self, p: usize, index: usize) -> f64 {
        let pts = self.simplex_points(p, index);
        match p {
            0 => 1.0,
            1 => norm(sub(pts[1], pts[0])),
            2 => {
                let u = sub(pts[1], pts[0]);
                let v = sub(pts[2], pts[0]);
                0.5 * norm(cross(u, v))
            }
            _ => unimplemented!("volumes beyond surfaces"),
        }
    }
}

fn top_simplices_len(_first: Option<&Vec<usize>>, s: &[usize]) -> usize {
    s.len()
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

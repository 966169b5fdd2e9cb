//! Deterministic generators for the built-in complexes: `cycle`,
//! `octahedron`, `torus_grid`, `icosphere`.

use super::complex::{ComplexMetric, SimplicialComplex};
use super::DecError;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct CatalogParams {
    /// Vertices per axis (cycle length / torus grid size).
    pub n: usize,
    /// Icosphere subdivision level.
    pub subdivisions: usize,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            n: 16,
            subdivisions: 1,
        }
    }
}

impl CatalogParams {
    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_subdivisions(mut self, s: usize) -> Self {
        self.subdivisions = s;
        self
    }
}

pub const CATALOG_COMPLEXES: [&str; 4] = ["cycle", "octahedron", "torus_grid", "icosphere"];

pub fn generate(name: &str, params: &CatalogParams) -> Result<SimplicialComplex, DecError> {
    match name {
        "cycle" => cycle(params.n),
        "octahedron" => octahedron(),
        "torus_grid" => torus_grid(params.n),
        "icosphere" => icosphere(params.subdivisions),
        other => Err(DecError::UnknownCatalogEntry(other.to_string())),
    }
}

fn cycle(n: usize) -> Result<SimplicialComplex, DecError> {
    if n < 3 {
        return Err(DecError::InvalidComplex("cycle needs n >= 3".into()));
    }
    let vertices: Vec<[f64; 3]> = (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            [theta.cos(), theta.sin(), 0.0]
        })
        .collect();
    let edges: Vec<Vec<usize>> = (0..n).map(|k| vec![k, (k + 1) % n]).collect();
    SimplicialComplex::from_simplices(vertices, edges, ComplexMetric::Embedded)
}

fn octahedron() -> Result<SimplicialComplex, DecError> {
    let vertices = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut faces = Vec::new();
    for &x in &[0usize, 1] {
        for &y in &[2usize, 3] {
            for &z in &[4usize, 5] {
                faces.push(vec![x, y, z]);
            }
        }
    }
    SimplicialComplex::from_simplices(vertices, faces, ComplexMetric::Embedded)
}

fn torus_grid(n: usize) -> Result<SimplicialComplex, DecError> {
    if n < 3 {
        return Err(DecError::InvalidComplex("torus grid needs n >= 3".into()));
    }
    let period = 2.0 * PI;
    let h = period / n as f64;
    let idx = |i: usize, j: usize| (i % n) * n + (j % n);
    let vertices: Vec<[f64; 3]> = (0..n * n)
        .map(|k| [(k / n) as f64 * h, (k % n) as f64 * h, 0.0])
        .collect();
    let mut faces = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let a = idx(i, j);
            let b = idx(i + 1, j);
            let c = idx(i, j + 1);
            let d = idx(i + 1, j + 1);
            faces.push(vec![a, b, d]);
            faces.push(vec![a, c, d]);
        }
    }
    SimplicialComplex::from_simplices(vertices, faces, ComplexMetric::PeriodicFlat { period })
}

fn icosphere(subdivisions: usize) -> Result<SimplicialComplex, DecError> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    for v in &mut vertices {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        *v = [v[0] / n, v[1] / n, v[2] / n];
    }
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&m) = midpoints.get(&key) {
                return m;
            }
            let pa = vertices[a];
            let pb = vertices[b];
            let mut m = [
                0.5 * (pa[0] + pb[0]),
                0.5 * (pa[1] + pb[1]),
                0.5 * (pa[2] + pb[2]),
            ];
            let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
            m = [m[0] / n, m[1] / n, m[2] / n];
            vertices.push(m);
            let idx = vertices.len() - 1;
            midpoints.insert(key, idx);
            idx
        };
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            new_faces.push([a, ab, ca]);
            new_faces.push([b, bc, ab]);
            new_faces.push([c, ca, bc]);
            new_faces.push([ab, bc, ca]);
        }
        faces = new_faces;
    }

    SimplicialComplex::from_simplices(
        vertices,
        faces.into_iter().map(|f| f.to_vec()).collect(),
        ComplexMetric::Embedded,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dec::euler_characteristic;

    #[test]
    fn cycle_counts() {
        let c = generate("cycle", &CatalogParams::default().with_n(3)).unwrap();
        assert_eq!(c.simplex_count(0), 3);
        assert_eq!(c.simplex_count(1), 3);
    }

    #[test]
    fn torus_grid_counts() {
        let c = generate("torus_grid", &CatalogParams::default().with_n(4)).unwrap();
        assert_eq!(c.simplex_count(0), 16);
        assert_eq!(c.simplex_count(1), 48);
        assert_eq!(c.simplex_count(2), 32);
        assert!(c.check_closed().is_ok());
    }

    #[test]
    fn octahedron_counts_and_euler() {
        let c = generate("octahedron", &CatalogParams::default()).unwrap();
        assert_eq!(c.simplex_count(0), 6);
        assert_eq!(c.simplex_count(1), 12);
        assert_eq!(c.simplex_count(2), 8);
        assert_eq!(euler_characteristic(&c), 2);
    }

    #[test]
    fn icosphere_levels() {
        let c0 = generate("icosphere", &CatalogParams::default().with_subdivisions(0)).unwrap();
        assert_eq!(c0.simplex_count(0), 12);
        assert_eq!(c0.simplex_count(2), 20);
        let c1 = generate("icosphere", &CatalogParams::default().with_subdivisions(1)).unwrap();
        assert_eq!(c1.simplex_count(0), 42);
        assert_eq!(c1.simplex_count(1), 120);
        assert_eq!(c1.simplex_count(2), 80);
        assert_eq!(euler_characteristic(&c1), 2);
        assert!(c1.check_closed().is_ok());
    }

    #[test]
    fn unknown_entry_errors() {
        assert!(matches!(
            generate("klein_bottle", &CatalogParams::default()),
            Err(DecError::UnknownCatalogEntry(_))
        ));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = generate("icosphere", &CatalogParams::default()).unwrap();
        let b = generate("icosphere", &CatalogParams::default()).unwrap();
        assert_eq!(a.vertex_coordinates(), b.vertex_coordinates());
        for p in 0..=2 {
            assert_eq!(a.simplices(p), b.simplices(p));
        }
    }
}

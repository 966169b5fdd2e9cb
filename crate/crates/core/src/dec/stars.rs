//! Diagonal Hodge star weights per form degree.
//!
//! The inner product on p-cochains is `<a, b>_p = sum_s w_s a_s b_s` with
//! strictly positive weights. Three constructions: combinatorial (all ones,
//! the default for topology runs), barycentric dual volumes, and
//! circumcentric dual volumes (classical cotangent weights; only valid where
//! the mesh keeps them positive — it degenerates on right-triangle grids,
//! in which case an error is returned rather than a clamped weight).

use super::complex::{cross, dot, norm, sub, SimplicialComplex};
use super::DecError;

#[derive(Debug, Clone)]
pub struct HodgeStarSet {
    weights: Vec<Vec<f64>>,
}

impl HodgeStarSet {
    pub fn from_weights(weights: Vec<Vec<f64>>) -> Result<Self, DecError> {
        for (p, w) in weights.iter().enumerate() {
            if w.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(DecError::InvalidStars(format!(
                    "non-positive weight at degree {p}"
                )));
            }
        }
        Ok(Self { weights })
    }

    /// All weights one.
    pub fn combinatorial(complex: &SimplicialComplex) -> Self {
        let weights = (0..=complex.top_dimension())
            .map(|p| vec![1.0; complex.simplex_count(p)])
            .collect();
        Self { weights }
    }

    /// Barycentric dual volumes: `w_p = |dual cell| / |primal cell|`.
    /// Positive for any non-degenerate mesh.
    pub fn barycentric_dual(complex: &SimplicialComplex) -> Result<Self, DecError> {
        geometric_stars(complex, Center::Barycenter)
    }

    /// Circumcentric dual volumes. Errors when a weight is non-positive
    /// (obtuse or right triangles place circumcenters on or across edges).
    pub fn circumcentric(complex: &SimplicialComplex) -> Result<Self, DecError> {
        geometric_stars(complex, Center::Circumcenter)
    }

    pub fn weights(&self, p: usize) -> &[f64] {
        &self.weights[p]
    }

    pub fn check(&self, complex: &SimplicialComplex) -> Result<(), DecError> {
        if self.weights.len() != complex.top_dimension() + 1 {
            return Err(DecError::InvalidStars(format!(
                "{} degree(s) of weights for a complex of top dimension {}",
                self.weights.len(),
                complex.top_dimension()
            )));
        }
        for p in 0..self.weights.len() {
            if self.weights[p].len() != complex.simplex_count(p) {
                return Err(DecError::InvalidStars(format!(
                    "degree {p}: {} weights for {} simplices",
                    self.weights[p].len(),
                    complex.simplex_count(p)
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Center {
    Barycenter,
    Circumcenter,
}

fn triangle_center(pts: &[[f64; 3]], which: Center) -> [f64; 3] {
    match which {
        Center::Barycenter => [
            (pts[0][0] + pts[1][0] + pts[2][0]) / 3.0,
            (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0,
            (pts[0][2] + pts[1][2] + pts[2][2]) / 3.0,
        ],
        Center::Circumcenter => {
            // Barycentric circumcenter weights a^2(b^2+c^2-a^2) etc., with
            // a the edge opposite vertex 0 and so on.
            let a2 = dist2(pts[1], pts[2]);
            let b2 = dist2(pts[0], pts[2]);
            let c2 = dist2(pts[0], pts[1]);
            let wa = a2 * (b2 + c2 - a2);
            let wb = b2 * (c2 + a2 - b2);
            let wc = c2 * (a2 + b2 - c2);
            let s = wa + wb + wc;
            [
                (wa * pts[0][0] + wb * pts[1][0] + wc * pts[2][0]) / s,
                (wa * pts[0][1] + wb * pts[1][1] + wc * pts[2][1]) / s,
                (wa * pts[0][2] + wb * pts[1][2] + wc * pts[2][2]) / s,
            ]
        }
    }
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = sub(a, b);
    dot(d, d)
}

fn geometric_stars(
    complex: &SimplicialComplex,
    center: Center,
) -> Result<HodgeStarSet, DecError> {
    let top = complex.top_dimension();
    match top {
        1 => {
            let nv = complex.simplex_count(0);
            let ne = complex.simplex_count(1);
            let mut w0 = vec![0.0f64; nv];
            let mut w1 = vec![0.0f64; ne];
            for e in 0..ne {
                let len = complex.simplex_volume(1, e);
                if len <= 0.0 {
                    return Err(DecError::InvalidStars(format!("edge {e} has zero length")));
                }
                w1[e] = 1.0 / len;
                for &v in &complex.simplices(1)[e] {
                    w0[v] += 0.5 * len;
                }
            }
            HodgeStarSet::from_weights(vec![w0, w1])
        }
        2 => {
            let nv = complex.simplex_count(0);
            let ne = complex.simplex_count(1);
            let nt = complex.simplex_count(2);
            let mut w0 = vec![0.0f64; nv];
            let mut dual_len = vec![0.0f64; ne];
            let mut w2 = vec![0.0f64; nt];
            for t in 0..nt {
                let pts = complex.simplex_points(2, t);
                let area = complex.simplex_volume(2, t);
                if area <= 0.0 {
                    return Err(DecError::InvalidStars(format!(
                        "triangle {t} has zero area"
                    )));
                }
                w2[t] = 1.0 / area;
                let c = triangle_center(&pts, center);
                let tri = complex.simplices(2)[t].clone();
                // vertex duals: split the triangle into center-edge-vertex
                // kite pieces; for the barycenter this reproduces area/3.
                for (local, &v) in tri.iter().enumerate() {
                    let others: Vec<usize> = (0..3).filter(|&k| k != local).collect();
                    let mut piece = 0.0;
                    for &o in &others {
                        let mid = midpoint(pts[local], pts[o]);
                        piece += signed_area3(pts[local], mid, c);
                    }
                    w0[v] += piece;
                }
                // edge duals: distance from center to each edge midpoint,
                // signed by which side of the edge the center falls on.
                for (skip, _) in tri.iter().enumerate() {
                    let (i, j) = match skip {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let face = [tri[i].min(tri[j]), tri[i].max(tri[j])];
                    let eidx = complex
                        .simplex_index(1, &face)
                        .expect("edge present");
                    let mid = midpoint(pts[i], pts[j]);
                    let third = pts[skip];
                    let seg = sub(c, mid);
                    let inward = sub(third, mid);
                    let sign = if dot(seg, inward) >= 0.0 { 1.0 } else { -1.0 };
                    dual_len[eidx] += sign * norm(seg);
                }
            }
            let mut w1 = vec![0.0f64; ne];
            for e in 0..ne {
                let len = complex.simplex_volume(1, e);
                w1[e] = dual_len[e] / len;
            }
            HodgeStarSet::from_weights(vec![w0, w1, w2]).map_err(|_| {
                DecError::InvalidStars(
                    "circumcentric/barycentric dual degenerate on this mesh \
                     (non-positive dual volume)"
                        .into(),
                )
            })
        }
        d => Err(DecError::InvalidStars(format!(
            "geometric stars unimplemented for top dimension {d}"
        ))),
    }
}

fn midpoint(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        0.5 * (a[0] + b[0]),
        0.5 * (a[1] + b[1]),
        0.5 * (a[2] + b[2]),
    ]
}

/// Unsigned area of the triangle a-b-c (used for kite pieces; the pieces of
/// a non-degenerate center decomposition are positively oriented already).
fn signed_area3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    0.5 * norm(cross(sub(b, a), sub(c, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dec::{generate, CatalogParams};

    #[test]
    fn combinatorial_is_all_ones() {
        let c = generate("octahedron", &CatalogParams::default()).unwrap();
        let s = HodgeStarSet::combinatorial(&c);
        for p in 0..=2 {
            assert!(s.weights(p).iter().all(|&w| w == 1.0));
        }
    }

    #[test]
    fn barycentric_vertex_weight_is_third_of_incident_area() {
        let c = generate("octahedron", &CatalogParams::default()).unwrap();
        let s = HodgeStarSet::barycentric_dual(&c).unwrap();
        // every vertex of the octahedron touches 4 congruent triangles
        let tri_area = c.simplex_volume(2, 0);
        for &w in s.weights(0) {
            assert!((w - 4.0 * tri_area / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circumcentric_positive_on_octahedron_and_cycle() {
        let oct = generate("octahedron", &CatalogParams::default()).unwrap();
        assert!(HodgeStarSet::circumcentric(&oct).is_ok());
        let cyc = generate("cycle", &CatalogParams::default().with_n(9)).unwrap();
        assert!(HodgeStarSet::circumcentric(&cyc).is_ok());
    }

    #[test]
    fn circumcentric_degenerates_on_right_triangle_torus() {
        // diagonal-split squares put circumcenters on the hypotenuses
        let torus = generate("torus_grid", &CatalogParams::default().with_n(4)).unwrap();
        assert!(matches!(
            HodgeStarSet::circumcentric(&torus),
            Err(DecError::InvalidStars(_))
        ));
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(HodgeStarSet::from_weights(vec![vec![1.0, 0.0]]).is_err());
        assert!(HodgeStarSet::from_weights(vec![vec![1.0, -2.0]]).is_err());
    }
}

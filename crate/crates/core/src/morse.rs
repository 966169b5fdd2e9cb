//! Analytic Morse functions, critical point detection, Morse counts, and the
//! weak / strong / polynomial Morse inequalities.
//!
//! A [`MorseFunctionSpec`] is a set of charts, each carrying scalar,
//! gradient, and Hessian callbacks. Critical points are found by damped
//! Newton iteration on the gradient from a dense seed grid, deduplicated
//! (modulo periodicity), and classified by the signed Hessian spectrum. The
//! inequality checkers are exact integer arithmetic.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MorseError {
    #[error("count vectors have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degenerate critical point at {location:?} (Hessian eigenvalue {eigenvalue:e} below floor {floor:e})")]
    DegenerateCritical {
        location: Vec<f64>,
        eigenvalue: f64,
        floor: f64,
    },
    #[error("polynomial division leaves nonzero remainder {0} (top-degree strong equality fails)")]
    NonzeroRemainder(i64),
    #[error("unknown catalog pair `{0}`")]
    UnknownCatalogEntry(String),
    #[error("callback consistency check failed: {0}")]
    InvalidSpec(String),
}

pub type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type HessFn = Box<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// One coordinate chart of the manifold with callbacks expressed in chart
/// coordinates.
pub struct Chart {
    pub name: String,
    /// Seed box bounds per coordinate.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Wrap coordinates into `[lo, hi)` (flat torus charts).
    pub periodic: bool,
    pub f: ScalarFn,
    pub grad: GradFn,
    pub hess: HessFn,
    /// Ownership predicate: converged points outside it belong to another
    /// chart and are dropped (deduplication across overlapping charts).
    pub keep: Box<dyn Fn(&[f64]) -> bool + Send + Sync>,
}

impl Chart {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    fn wrap(&self, x: &mut [f64]) {
        if !self.periodic {
            return;
        }
        for (k, xi) in x.iter_mut().enumerate() {
            let width = self.hi[k] - self.lo[k];
            let mut v = (*xi - self.lo[k]) % width;
            if v < 0.0 {
                v += width;
            }
            *xi = self.lo[k] + v;
        }
    }

    fn in_search_region(&self, x: &[f64]) -> bool {
        if self.periodic {
            return true;
        }
        x.iter()
            .enumerate()
            .all(|(k, &v)| v >= self.lo[k] - 1e-9 && v <= self.hi[k] + 1e-9)
    }
}

/// An analytic scalar field on a manifold described by one or more charts.
pub struct MorseFunctionSpec {
    pub name: String,
    /// Manifold dimension.
    pub dim: usize,
    pub charts: Vec<Chart>,
}

const GRAD_TOL: f64 = 1e-10;
const NONDEGENERACY_FLOOR: f64 = 1e-8;
const DEDUP_DISTANCE: f64 = 1e-6;

/// A detected nondegenerate critical point.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub chart: String,
    pub location: Vec<f64>,
    pub value: f64,
    pub hessian_eigenvalues: Vec<f64>,
    /// Morse index: count of negative Hessian eigenvalues.
    pub index: usize,
}

impl MorseFunctionSpec {
    /// Check the gradient against central differences of `f`, and the
    /// Hessian against central differences of the gradient, at random
    /// points (relative 1e-5).
    pub fn validate(&self, samples: usize, seed: u64) -> Result<(), MorseError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for chart in &self.charts {
            let d = chart.dim();
            for _ in 0..samples {
                let x: Vec<f64> = (0..d)
                    .map(|k| {
                        // stay inside the box; FD stencils need margin
                        let w = chart.hi[k] - chart.lo[k];
                        chart.lo[k] + w * (0.1 + 0.8 * rng.gen::<f64>())
                    })
                    .collect();
                let h = 1e-5;
                let g = (chart.grad)(&x);
                let hess = (chart.hess)(&x);
                for k in 0..d {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[k] += h;
                    xm[k] -= h;
                    let fd = ((chart.f)(&xp) - (chart.f)(&xm)) / (2.0 * h);
                    let scale = g[k].abs().max(fd.abs()).max(1.0);
                    if (g[k] - fd).abs() > 1e-5 * scale {
                        return Err(MorseError::InvalidSpec(format!(
                            "grad[{k}] = {} vs finite difference {} at {:?} in chart {}",
                            g[k], fd, x, chart.name
                        )));
                    }
                    let gp = (chart.grad)(&xp);
                    let gm = (chart.grad)(&xm);
                    for l in 0..d {
                        let fd2 = (gp[l] - gm[l]) / (2.0 * h);
                        let scale = hess[(l, k)].abs().max(fd2.abs()).max(1.0);
                        if (hess[(l, k)] - fd2).abs() > 1e-5 * scale {
                            return Err(MorseError::InvalidSpec(format!(
                                "hess[{l},{k}] = {} vs finite difference {} at {:?} in chart {}",
                                hess[(l, k)],
                                fd2,
                                x,
                                chart.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Newton search for critical points from a dense seed grid, one search per
/// chart. Non-converging seeds are dropped; converged points are
/// deduplicated modulo periodicity and classified. A Hessian eigenvalue
/// below the nondegeneracy floor is fatal: the input is not a Morse
/// function.
pub fn find_critical_points(
    spec: &MorseFunctionSpec,
    seed_grid_resolution: usize,
) -> Result<Vec<CriticalPoint>, MorseError> {
    let mut found: Vec<CriticalPoint> = Vec::new();
    for chart in &spec.charts {
        let d = chart.dim();
        let mut seeds = vec![vec![0.0; d]];
        for k in 0..d {
            let mut next = Vec::new();
            for base in &seeds {
                for s in 0..seed_grid_resolution {
                    let frac = if chart.periodic {
                        s as f64 / seed_grid_resolution as f64
                    } else {
                        (s as f64 + 0.5) / seed_grid_resolution as f64
                    };
                    let mut x = base.clone();
                    x[k] = chart.lo[k] + frac * (chart.hi[k] - chart.lo[k]);
                    next.push(x);
                }
            }
            seeds = next;
        }

        for seed in seeds {
            let Some(mut x) = newton(chart, seed) else {
                continue; // non-convergence: seed dropped
            };
            chart.wrap(&mut x);
            if !chart.in_search_region(&x) || !(chart.keep)(&x) {
                continue;
            }
            let g = (chart.grad)(&x);
            let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gnorm > GRAD_TOL {
                continue;
            }
            if found.iter().any(|cp| {
                cp.chart == chart.name && chart_distance(chart, &cp.location, &x) < DEDUP_DISTANCE
            }) {
                continue;
            }
            let hess = (chart.hess)(&x);
            let eig = hess.clone().symmetric_eigen();
            let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            eigenvalues.sort_by(f64::total_cmp);
            if let Some(&small) = eigenvalues
                .iter()
                .find(|e| e.abs() < NONDEGENERACY_FLOOR)
            {
                return Err(MorseError::DegenerateCritical {
                    location: x,
                    eigenvalue: small,
                    floor: NONDEGENERACY_FLOOR,
                });
            }
            let index = eigenvalues.iter().filter(|&&e| e < 0.0).count();
            found.push(CriticalPoint {
                chart: chart.name.clone(),
                value: (chart.f)(&x),
                location: x,
                hessian_eigenvalues: eigenvalues,
                index,
            });
        }
    }
    // deterministic order by (chart, location)
    found.sort_by(|a, b| {
        a.chart
            .cmp(&b.chart)
            .then_with(|| a.location.partial_cmp(&b.location).unwrap())
    });
    Ok(found)
}

fn chart_distance(chart: &Chart, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for k in 0..a.len() {
        let mut d = (a[k] - b[k]).abs();
        if chart.periodic {
            let width = chart.hi[k] - chart.lo[k];
            d = d.min(width - d);
        }
        acc += d * d;
    }
    acc.sqrt()
}

fn newton(chart: &Chart, mut x: Vec<f64>) -> Option<Vec<f64>> {
    let d = chart.dim();
    for _ in 0..120 {
        let g = DVector::from_vec((chart.grad)(&x));
        let gnorm = g.norm();
        if gnorm <= 1e-13 {
            return Some(x);
        }
        let hess = (chart.hess)(&x);
        let step = hess.lu().solve(&g)?;
        // damped: halve until the gradient norm does not grow
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let mut xn: Vec<f64> = (0..d).map(|k| x[k] - lambda * step[k]).collect();
            chart.wrap(&mut xn);
            let gn = DVector::from_vec((chart.grad)(&xn));
            if gn.norm() < gnorm {
                x = xn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
        if !chart.periodic && !chart.in_search_region(&x) {
            return None; // wandered out of the chart
        }
    }
    let g = (chart.grad)(&x);
    if g.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-13 {
        Some(x)
    } else {
        None
    }
}

/// Morse counts `M[p]` for p = 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseCounts(pub Vec<usize>);

pub fn morse_counts(points: &[CriticalPoint], n: usize) -> MorseCounts {
    let mut counts = vec![0usize; n + 1];
    for p in points {
        counts[p.index] += 1;
    }
    MorseCounts(counts)
}

/// Weak Morse inequalities: `M_p >= beta_p` per degree.
#[derive(Debug, Clone)]
pub struct WeakVerdict {
    pub per_degree: Vec<bool>,
    pub pass: bool,
}

pub fn check_weak(m: &[usize], beta: &[usize]) -> Result<WeakVerdict, MorseError> {
    if m.len() != beta.len() {
        return Err(MorseError::LengthMismatch(m.len(), beta.len()));
    }
    let per_degree: Vec<bool> = m.iter().zip(beta).map(|(mp, bp)| mp >= bp).collect();
    let pass = per_degree.iter().all(|&v| v);
    Ok(WeakVerdict { per_degree, pass })
}

/// Strong Morse inequalities: the alternating partial sums
/// `sum_{i<=q} (-1)^{q-i} M_i >= sum_{i<=q} (-1)^{q-i} beta_i` for every q,
/// with equality at the top degree (the Morse Index Theorem).
#[derive(Debug, Clone)]
pub struct StrongVerdict {
    pub per_degree: Vec<bool>,
    pub top_equality: bool,
    pub pass: bool,
}

pub fn check_strong(m: &[usize], beta: &[usize]) -> Result<StrongVerdict, MorseError> {
    if m.len() != beta.len() {
        return Err(MorseError::LengthMismatch(m.len(), beta.len()));
    }
    let n = m.len();
    let mut per_degree = Vec::with_capacity(n);
    let mut top_diff = 0i64;
    for q in 0..n {
        let mut lhs = 0i64;
        let mut rhs = 0i64;
        for i in 0..=q {
            let sign = if (q - i) % 2 == 0 { 1 } else { -1 };
            lhs += sign * m[i] as i64;
            rhs += sign * beta[i] as i64;
        }
        per_degree.push(lhs >= rhs);
        if q == n - 1 {
            top_diff = lhs - rhs;
        }
    }
    let top_equality = top_diff == 0;
    let pass = per_degree.iter().all(|&v| v) && top_equality;
    Ok(StrongVerdict {
        per_degree,
        top_equality,
        pass,
    })
}

/// Result of dividing the Morse-minus-Poincaré polynomial by `(1 + t)`.
#[derive(Debug, Clone)]
pub struct PolynomialGap {
    /// Coefficients of Q(t), degree 0 upward.
    pub coefficients: Vec<i64>,
    /// True iff every coefficient is nonnegative (the polynomial form of
    /// the inequalities).
    pub nonnegative: bool,
}

impl PolynomialGap {
    pub fn success(&self) -> bool {
        self.nonnegative
    }
}

/// Synthetic division of `N_t - P_t` by `(1 + t)`: succeeds with the Q(t)
/// coefficients when the remainder vanishes, errors with
/// [`MorseError::NonzeroRemainder`] otherwise. The quotient coefficients are
/// exactly the alternating partial sums `q_k = sum_{i<=k} (-1)^{k-i}
/// (M_i - beta_i)`; both routes are computed and must agree.
pub fn polynomial_gap(m: &[usize], beta: &[usize]) -> Result<PolynomialGap, MorseError> {
    if m.len() != beta.len() {
        return Err(MorseError::LengthMismatch(m.len(), beta.len()));
    }
    let n = m.len();
    let c: Vec<i64> = (0..n).map(|k| m[k] as i64 - beta[k] as i64).collect();

    // synthetic division by (1+t): c_k = q_k + q_{k-1}
    let mut q = vec![0i64; n.saturating_sub(1)];
    let mut prev = 0i64;
    for k in 0..n.saturating_sub(1) {
        q[k] = c[k] - prev;
        prev = q[k];
    }
    let remainder = c[n - 1] - prev;

    // cross-check: matching-coefficient identity (alternating partial sums)
    for (k, &qk) in q.iter().enumerate() {
        let mut alt = 0i64;
        for i in 0..=k {
            let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
            alt += sign * c[i];
        }
        assert_eq!(alt, qk, "matching-coefficient identity must hold");
    }

    if remainder != 0 {
        return Err(MorseError::NonzeroRemainder(remainder));
    }
    let nonnegative = q.iter().all(|&x| x >= 0);
    Ok(PolynomialGap {
        coefficients: q,
        nonnegative,
    })
}

pub mod catalog {
    //! Named (manifold, function) pairs with closed-form oracles.

    use super::*;

    /// A catalog pair: the chart description, the mesh field used to sample
    /// the same function on the matching complex, the complex name, and
    /// closed-form oracles for tests.
    pub struct CatalogPair {
        pub spec: MorseFunctionSpec,
        pub complex_name: &'static str,
        /// Scalar field on embedding / chart coordinates of the complex,
        /// consistent with the chart function.
        pub mesh_field: fn([f64; 3]) -> f64,
        /// Closed-form critical points (location in the primary chart,
        /// Morse index) where available.
        pub expected_critical: Vec<(Vec<f64>, usize)>,
        pub expected_counts: Vec<usize>,
    }

    pub const CATALOG_PAIRS: [&str; 4] = [
        "circle/cos",
        "sphere/height",
        "torus/cos+cos",
        "torus/cos2x+cosy",
    ];

    pub fn catalog_pair(name: &str) -> Result<CatalogPair, MorseError> {
        match name {
            "circle/cos" => Ok(circle_cos()),
            "sphere/height" => Ok(sphere_height()),
            "torus/cos+cos" => Ok(torus_cos_cos()),
            "torus/cos2x+cosy" => Ok(torus_cos2x_cosy()),
            other => Err(MorseError::UnknownCatalogEntry(other.to_string())),
        }
    }

    const TAU: f64 = 2.0 * std::f64::consts::PI;
    const PI: f64 = std::f64::consts::PI;

    fn periodic_chart(
        name: &str,
        dim: usize,
        f: ScalarFn,
        grad: GradFn,
        hess: HessFn,
    ) -> Chart {
        Chart {
            name: name.into(),
            lo: vec![0.0; dim],
            hi: vec![TAU; dim],
            periodic: true,
            f,
            grad,
            hess,
            keep: Box::new(|_| true),
        }
    }

    fn circle_cos() -> CatalogPair {
        let spec = MorseFunctionSpec {
            name: "circle/cos".into(),
            dim: 1,
            charts: vec![periodic_chart(
                "angle",
                1,
                Box::new(|x| x[0].cos()),
                Box::new(|x| vec![-x[0].sin()]),
                Box::new(|x| DMatrix::from_element(1, 1, -x[0].cos())),
            )],
        };
        CatalogPair {
            spec,
            complex_name: "cycle",
            // on the unit-circle mesh, cos(angle) is the x coordinate
            mesh_field: |p| p[0],
            expected_critical: vec![(vec![0.0], 1), (vec![PI], 0)],
            expected_counts: vec![1, 1],
        }
    }

    fn sphere_height() -> CatalogPair {
        // Two orthographic graph charts: height z = +-sqrt(1 - u^2 - v^2).
        fn graph_chart(north: bool) -> Chart {
            let sgn = if north { 1.0 } else { -1.0 };
            Chart {
                name: if north { "north".into() } else { "south".into() },
                lo: vec![-0.7, -0.7],
                hi: vec![0.7, 0.7],
                periodic: false,
                f: Box::new(move |x| sgn * (1.0 - x[0] * x[0] - x[1] * x[1]).sqrt()),
                grad: Box::new(move |x| {
                    let z = (1.0 - x[0] * x[0] - x[1] * x[1]).sqrt();
                    vec![-sgn * x[0] / z, -sgn * x[1] / z]
                }),
                hess: Box::new(move |x| {
                    let s = 1.0 - x[0] * x[0] - x[1] * x[1];
                    let z = s.sqrt();
                    let z3 = z * z * z;
                    DMatrix::from_row_slice(
                        2,
                        2,
                        &[
                            -sgn * (1.0 / z + x[0] * x[0] / z3),
                            -sgn * x[0] * x[1] / z3,
                            -sgn * x[0] * x[1] / z3,
                            -sgn * (1.0 / z + x[1] * x[1] / z3),
                        ],
                    )
                }),
                keep: Box::new(|x| x[0] * x[0] + x[1] * x[1] < 0.25),
            }
        }
        let spec = MorseFunctionSpec {
            name: "sphere/height".into(),
            dim: 2,
            charts: vec![graph_chart(true), graph_chart(false)],
        };
        CatalogPair {
            spec,
            complex_name: "octahedron",
            mesh_field: |p| p[2],
            expected_critical: vec![(vec![0.0, 0.0], 2), (vec![0.0, 0.0], 0)],
            expected_counts: vec![1, 0, 1],
        }
    }

    fn torus_cos_cos() -> CatalogPair {
        let spec = MorseFunctionSpec {
            name: "torus/cos+cos".into(),
            dim: 2,
            charts: vec![periodic_chart(
                "square",
                2,
                Box::new(|x| x[0].cos() + x[1].cos()),
                Box::new(|x| vec![-x[0].sin(), -x[1].sin()]),
                Box::new(|x| {
                    DMatrix::from_row_slice(2, 2, &[-x[0].cos(), 0.0, 0.0, -x[1].cos()])
                }),
            )],
        };
        CatalogPair {
            spec,
            complex_name: "torus_grid",
            mesh_field: |p| p[0].cos() + p[1].cos(),
            expected_critical: vec![
                (vec![0.0, 0.0], 2),
                (vec![0.0, PI], 1),
                (vec![PI, 0.0], 1),
                (vec![PI, PI], 0),
            ],
            expected_counts: vec![1, 2, 1],
        }
    }

    fn torus_cos2x_cosy() -> CatalogPair {
        let spec = MorseFunctionSpec {
            name: "torus/cos2x+cosy".into(),
            dim: 2,
            charts: vec![periodic_chart(
                "square",
                2,
                Box::new(|x| (2.0 * x[0]).cos() + x[1].cos()),
                Box::new(|x| vec![-2.0 * (2.0 * x[0]).sin(), -x[1].sin()]),
                Box::new(|x| {
                    DMatrix::from_row_slice(
                        2,
                        2,
                        &[-4.0 * (2.0 * x[0]).cos(), 0.0, 0.0, -x[1].cos()],
                    )
                }),
            )],
        };
        let mut expected_critical = Vec::new();
        for (k, x) in [0.0, PI / 2.0, PI, 1.5 * PI].iter().enumerate() {
            for (l, y) in [0.0, PI].iter().enumerate() {
                // f_xx = -4cos2x: negative at x = 0, pi; f_yy = -cos y
                let mu = usize::from(k % 2 == 0) + usize::from(l == 0);
                expected_critical.push((vec![*x, *y], mu));
            }
        }
        CatalogPair {
            spec,
            complex_name: "torus_grid",
            mesh_field: |p| (2.0 * p[0]).cos() + p[1].cos(),
            expected_critical,
            expected_counts: vec![2, 4, 2],
        }
    }

    /// The sphere height function in a stereographic chart around the north
    /// pole (projection from the south pole): used to confirm that the Morse
    /// index does not depend on the parameterization.
    pub fn sphere_height_stereographic() -> MorseFunctionSpec {
        MorseFunctionSpec {
            name: "sphere/height (stereographic)".into(),
            dim: 2,
            charts: vec![Chart {
                name: "stereographic-north".into(),
                lo: vec![-1.0, -1.0],
                hi: vec![1.0, 1.0],
                periodic: false,
                f: Box::new(|x| {
                    let r2 = x[0] * x[0] + x[1] * x[1];
                    (4.0 - r2) / (4.0 + r2)
                }),
                grad: Box::new(|x| {
                    let r2 = x[0] * x[0] + x[1] * x[1];
                    let d = (4.0 + r2) * (4.0 + r2);
                    vec![-16.0 * x[0] / d, -16.0 * x[1] / d]
                }),
                hess: Box::new(|x| {
                    let r2 = x[0] * x[0] + x[1] * x[1];
                    let d = 4.0 + r2;
                    let d2 = d * d;
                    let d3 = d2 * d;
                    DMatrix::from_row_slice(
                        2,
                        2,
                        &[
                            -16.0 / d2 + 64.0 * x[0] * x[0] / d3,
                            64.0 * x[0] * x[1] / d3,
                            64.0 * x[0] * x[1] / d3,
                            -16.0 / d2 + 64.0 * x[1] * x[1] / d3,
                        ],
                    )
                }),
                keep: Box::new(|x| x[0] * x[0] + x[1] * x[1] < 0.81),
            }],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn catalog_specs_validate() {
        for name in CATALOG_PAIRS {
            let pair = catalog_pair(name).unwrap();
            pair.spec.validate(100, 11).unwrap();
        }
        sphere_height_stereographic().validate(100, 12).unwrap();
    }

    #[test]
    fn circle_cos_critical_points() {
        let pair = catalog_pair("circle/cos").unwrap();
        let pts = find_critical_points(&pair.spec, 16).unwrap();
        assert_eq!(pts.len(), 2);
        let at_zero = pts
            .iter()
            .find(|p| p.location[0] < 0.1 || p.location[0] > 6.0)
            .unwrap();
        assert_eq!(at_zero.index, 1);
        let at_pi = pts
            .iter()
            .find(|p| (p.location[0] - std::f64::consts::PI).abs() < 0.1)
            .unwrap();
        assert_eq!(at_pi.index, 0);
    }

    #[test]
    fn torus_cos_cos_counts() {
        let pair = catalog_pair("torus/cos+cos").unwrap();
        let pts = find_critical_points(&pair.spec, 12).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(morse_counts(&pts, 2).0, vec![1, 2, 1]);
        for p in &pts {
            let (loc, idx) = pair
                .expected_critical
                .iter()
                .find(|(loc, _)| {
                    loc.iter()
                        .zip(&p.location)
                        .all(|(a, b)| {
                            let d = (a - b).abs();
                            d.min(2.0 * std::f64::consts::PI - d) < 1e-7
                        })
                })
                .expect("matches a closed-form point");
            assert_eq!(p.index, *idx, "index at {loc:?}");
        }
    }

    #[test]
    fn torus_cos2x_cosy_counts() {
        let pair = catalog_pair("torus/cos2x+cosy").unwrap();
        let pts = find_critical_points(&pair.spec, 14).unwrap();
        assert_eq!(pts.len(), 8);
        assert_eq!(morse_counts(&pts, 2).0, vec![2, 4, 2]);
    }

    #[test]
    fn sphere_height_counts() {
        let pair = catalog_pair("sphere/height").unwrap();
        let pts = find_critical_points(&pair.spec, 9).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(morse_counts(&pts, 2).0, vec![1, 0, 1]);
    }

    #[test]
    fn morse_index_chart_invariance() {
        // north pole in the orthographic chart...
        let pair = catalog_pair("sphere/height").unwrap();
        let pts = find_critical_points(&pair.spec, 9).unwrap();
        let north = pts.iter().find(|p| p.chart == "north").unwrap();
        // ...and in the stereographic chart
        let stereo = sphere_height_stereographic();
        let pts2 = find_critical_points(&stereo, 9).unwrap();
        assert_eq!(pts2.len(), 1);
        assert_eq!(pts2[0].index, north.index);
        assert_eq!(north.index, 2);
    }

    #[test]
    fn degenerate_input_is_fatal() {
        // f = x^4 has a degenerate critical point at 0
        let spec = MorseFunctionSpec {
            name: "degenerate".into(),
            dim: 1,
            charts: vec![Chart {
                name: "line".into(),
                lo: vec![-1.0],
                hi: vec![1.0],
                periodic: false,
                f: Box::new(|x| x[0].powi(4)),
                grad: Box::new(|x| vec![4.0 * x[0].powi(3)]),
                hess: Box::new(|x| DMatrix::from_element(1, 1, 12.0 * x[0] * x[0])),
                keep: Box::new(|_| true),
            }],
        };
        match find_critical_points(&spec, 8) {
            Err(MorseError::DegenerateCritical { .. }) => {}
            other => panic!("expected DegenerateCritical, got {other:?}"),
        }
    }

    #[test]
    fn weak_verdicts() {
        assert!(check_weak(&[1, 2, 1], &[1, 2, 1]).unwrap().pass);
        assert!(check_weak(&[2, 4, 2], &[1, 2, 1]).unwrap().pass);
        let v = check_weak(&[1, 0, 1], &[1, 1, 1]).unwrap();
        assert!(!v.pass);
        assert!(!v.per_degree[1]);
        assert!(matches!(
            check_weak(&[1], &[1, 2]),
            Err(MorseError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn strong_verdicts() {
        let v = check_strong(&[2, 4, 2], &[1, 2, 1]).unwrap();
        assert!(v.pass);
        assert!(v.top_equality); // 2-4+2 = 1-2+1 = 0
        assert!(check_strong(&[1, 2, 1], &[1, 2, 1]).unwrap().pass);
        let v = check_strong(&[1, 1, 1], &[1, 0, 1]).unwrap();
        assert!(!v.per_degree[2], "1-1+1=1 < 1-0+1=2 fails at q=2");
        assert!(!v.pass);
    }

    #[test]
    fn polynomial_gap_examples() {
        let q = polynomial_gap(&[1, 2, 1], &[1, 2, 1]).unwrap();
        assert_eq!(q.coefficients, vec![0, 0]);
        assert!(q.success());

        // (N-P)(t) = t + t^2 = t(1+t)
        let q = polynomial_gap(&[1, 3, 2], &[1, 2, 1]).unwrap();
        assert_eq!(q.coefficients, vec![0, 1]);
        assert!(q.success());

        // (N-P)(t) = 1 + 2t + t^2 = (1+t)^2
        let q = polynomial_gap(&[2, 4, 2], &[1, 2, 1]).unwrap();
        assert_eq!(q.coefficients, vec![1, 1]);
        assert!(q.success());

        assert!(matches!(
            polynomial_gap(&[1, 1, 1], &[1, 0, 1]),
            Err(MorseError::NonzeroRemainder(_))
        ));
    }
}

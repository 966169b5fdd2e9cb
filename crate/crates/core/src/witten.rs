//! Witten deformation: the conjugated coboundary `d_t = e^{-tf} d e^{tf}` on
//! simplicial cochains, the fermionic commutator algebra on flat form
//! components, and the flat-torus grid realization
//! `Delta_t = Delta + t^2 ||df||^2 + t A`.
//!
//! On cochains the conjugation is exact: `d_t` entries are the integer
//! incidence signs times `exp(t (f_face - f_cell))` with `f` sampled at
//! simplex barycenters. Working with exponent *differences* is the
//! log-scaled assembly: no global `e^{tf}` factor is ever formed, so the
//! only overflow hazard is a pathological per-incidence difference, which is
//! guarded. Conjugation preserves nilpotency and kernel dimensions exactly
//! at every t.

use crate::dec::{self, DecError, HodgeStarSet, SimplicialComplex};
use crate::morse::MorseFunctionSpec;
use crate::sparse::SparseMatrix;
use crate::spectral::{SparseSymOperator, SpectralError};
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WittenError {
    #[error("degree {degree} out of range (top {top})")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("conjugation exponent {exponent} exceeds the floating-point range")]
    OverflowGuard { exponent: f64 },
    #[error("fermion index {index} out of range for n = {n}")]
    FermionIndexOutOfRange { index: usize, n: usize },
    #[error("grid/function mismatch: {0}")]
    GridMismatch(String),
    #[error(transparent)]
    Dec(#[from] DecError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

const EXP_GUARD: f64 = 700.0;

/// Deformed coboundary from explicit barycenter samples: entry
/// `(sigma, tau)` of the integer `d_p` becomes
/// `sign * exp(t (f[tau] - f[sigma]))`. At t = 0 this is exactly `d_p`.
pub fn deform_coboundary(
    complex: &SimplicialComplex,
    f_lower: &[f64],
    f_upper: &[f64],
    t: f64,
    p: usize,
) -> Result<SparseMatrix, WittenError> {
    let d = complex.coboundary(p)?;
    let mut out = SparseMatrix::new(d.rows, d.cols);
    for (row, col, sign) in d.iter_entries() {
        let exponent = t * (f_lower[col] - f_upper[row]);
        if exponent.abs() > EXP_GUARD {
            return Err(WittenError::OverflowGuard { exponent });
        }
        out.add(row, col, sign as f64 * exponent.exp());
    }
    Ok(out)
}

/// A simplicial complex with all of its deformed coboundaries and the data
/// to build the deformed Laplacians.
pub struct DeformedComplex<'a> {
    pub complex: &'a SimplicialComplex,
    pub stars: &'a HodgeStarSet,
    pub t: f64,
    f_values: Vec<Vec<f64>>,
    d_t: Vec<SparseMatrix>,
}

impl<'a> DeformedComplex<'a> {
    pub fn new(
        complex: &'a SimplicialComplex,
        stars: &'a HodgeStarSet,
        field: impl Fn([f64; 3]) -> f64,
        t: f64,
    ) -> Result<Self, WittenError> {
        stars.check(complex)?;
        let top = complex.top_dimension();
        let f_values: Vec<Vec<f64>> = (0..=top)
            .map(|p| {
                (0..complex.simplex_count(p))
                    .map(|i| field(complex.barycenter(p, i)))
                    .collect()
            })
            .collect();
        let mut d_t = Vec::with_capacity(top);
        for p in 0..top {
            d_t.push(deform_coboundary(
                complex,
                &f_values[p],
                &f_values[p + 1],
                t,
                p,
            )?);
        }
        Ok(Self {
            complex,
            stars,
            t,
            f_values,
            d_t,
        })
    }

    pub fn f_values(&self, p: usize) -> &[f64] {
        &self.f_values[p]
    }

    pub fn deformed_coboundary(&self, p: usize) -> Result<&SparseMatrix, WittenError> {
        self.d_t.get(p).ok_or(WittenError::DegreeOutOfRange {
            degree: p,
            top: self.complex.top_dimension(),
        })
    }

    /// The deformed Laplacian on p-cochains in the star-orthonormalized
    /// basis (symmetric positive semidefinite, same spectrum as
    /// `d_t d_t* + d_t* d_t`).
    pub fn laplacian(&self, p: usize) -> Result<SparseSymOperator, WittenError> {
        let top = self.complex.top_dimension();
        if p > top {
            return Err(WittenError::DegreeOutOfRange { degree: p, top });
        }
        let up = if p < top { Some(&self.d_t[p]) } else { None };
        let down = if p > 0 { Some(&self.d_t[p - 1]) } else { None };
        let lap = dec::symmetrized_laplacian(
            up,
            down,
            self.stars.weights(p),
            if p < top {
                Some(self.stars.weights(p + 1))
            } else {
                None
            },
            if p > 0 {
                Some(self.stars.weights(p - 1))
            } else {
                None
            },
        );
        Ok(SparseSymOperator::assemble(
            lap.triplets(),
            self.complex.simplex_count(p),
        )?)
    }
}

/// Spec-facing alias: the deformed Laplacian of a prepared complex.
pub fn witten_laplacian_dec(
    deformed: &DeformedComplex,
    p: usize,
) -> Result<SparseSymOperator, WittenError> {
    deformed.laplacian(p)
}

// ---------------------------------------------------------------------------
// Fermionic operators on the exterior algebra of R^n (flat metric).
// ---------------------------------------------------------------------------

/// Increasing multi-indices `I` of length p over `{1..n}`, lexicographic.
pub fn multi_indices(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(p);
    fn rec(n: usize, p: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == p {
            out.push(current.clone());
            return;
        }
        for i in start..=n {
            current.push(i);
            rec(n, p, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, p, 1, &mut current, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Matrix of the creation operator `(a^i)* = dx^i ∧ ·` from p-forms to
/// (p+1)-forms in the increasing multi-index bases (1-based axis `i`).
pub fn wedge_matrix(n: usize, p: usize, i: usize) -> DMatrix<f64> {
    let src = multi_indices(n, p);
    let dst = multi_indices(n, p + 1);
    let mut m = DMatrix::zeros(dst.len(), src.len());
    for (col, idx) in src.iter().enumerate() {
        if idx.contains(&i) {
            continue;
        }
        let mut target: Vec<usize> = idx.clone();
        let pos = target.partition_point(|&k| k < i);
        target.insert(pos, i);
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        let row = dst.iter().position(|d| d == &target).expect("valid index");
        m[(row, col)] = sign;
    }
    m
}

/// The annihilation operator `a^i` from p-forms to (p-1)-forms: the exact
/// adjoint (matrix transpose) of wedging with `dx^i` in the orthonormal
/// flat basis.
pub fn annihilation_matrix(n: usize, p: usize, i: usize) -> DMatrix<f64> {
    if p == 0 {
        return DMatrix::zeros(0, 1.max(binomial(n, 0)));
    }
    wedge_matrix(n, p - 1, i).transpose()
}

/// The commutator `[(a^i)*, a^j]` acting on p-forms.
#[derive(Debug, Clone)]
pub struct FermionMatrix {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    pub j: usize,
    pub matrix: DMatrix<f64>,
}

pub fn fermion_commutator_matrix(
    n: usize,
    p: usize,
    i: usize,
    j: usize,
) -> Result<FermionMatrix, WittenError> {
    for index in [i, j] {
        if index == 0 || index > n {
            return Err(WittenError::FermionIndexOutOfRange { index, n });
        }
    }
    if p > n {
        return Err(WittenError::DegreeOutOfRange { degree: p, top: n });
    }
    let dim = binomial(n, p);
    // (a^i)* a^j : p -> p-1 -> p
    let first = if p == 0 {
        DMatrix::zeros(dim, dim)
    } else {
        wedge_matrix(n, p - 1, i) * annihilation_matrix(n, p, j)
    };
    // a^j (a^i)* : p -> p+1 -> p
    let second = if p == n {
        DMatrix::zeros(dim, dim)
    } else {
        annihilation_matrix(n, p + 1, j) * wedge_matrix(n, p, i)
    };
    Ok(FermionMatrix {
        n,
        p,
        i,
        j,
        matrix: first - second,
    })
}

// ---------------------------------------------------------------------------
// Flat periodic grids.
// ---------------------------------------------------------------------------

/// A flat torus grid: `points_per_axis` samples per axis of `[0, 2pi)^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    pub dim: usize,
    pub points_per_axis: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self, WittenError> {
        if !(1..=2).contains(&dim) {
            return Err(WittenError::GridMismatch(format!(
                "grid dimension {dim} unsupported (1 or 2)"
            )));
        }
        if points_per_axis < 3 {
            return Err(WittenError::GridMismatch(
                "need at least 3 points per axis".into(),
            ));
        }
        Ok(Self {
            dim,
            points_per_axis,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.points_per_axis as f64
    }

    pub fn sites(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Total component count of a p-form field: C(dim, p) * sites.
    pub fn field_len(&self, p: usize) -> usize {
        binomial(self.dim, p) * self.sites()
    }

    pub fn site_index(&self, coords: &[usize]) -> usize {
        let n = self.points_per_axis;
        match self.dim {
            1 => coords[0] % n,
            2 => (coords[0] % n) * n + (coords[1] % n),
            _ => unreachable!(),
        }
    }

    pub fn site_coords(&self, site: usize) -> Vec<usize> {
        let n = self.points_per_axis;
        match self.dim {
            1 => vec![site],
            2 => vec![site / n, site % n],
            _ => unreachable!(),
        }
    }

    pub fn site_position(&self, site: usize) -> Vec<f64> {
        let h = self.spacing();
        self.site_coords(site)
            .into_iter()
            .map(|c| c as f64 * h)
            .collect()
    }
}

/// A p-form field on a torus grid: one grid scalar per increasing
/// multi-index component, stored component-major.
#[derive(Debug, Clone)]
pub struct TorusGridField {
    pub grid: TorusGrid,
    pub degree: usize,
    pub data: Vec<f64>,
}

impl TorusGridField {
    pub fn zeros(grid: TorusGrid, degree: usize) -> Self {
        let data = vec![0.0; grid.field_len(degree)];
        Self { grid, degree, data }
    }

    pub fn component_count(&self) -> usize {
        binomial(self.grid.dim, self.degree)
    }

    pub fn index(&self, component: usize, site: usize) -> usize {
        component * self.grid.sites() + site
    }
}

fn single_periodic_chart<'s>(
    grid: &TorusGrid,
    spec: &'s MorseFunctionSpec,
) -> Result<&'s crate::morse::Chart, WittenError> {
    if spec.charts.len() != 1 {
        return Err(WittenError::GridMismatch(format!(
            "grid fields need a single-chart function, `{}` has {}",
            spec.name,
            spec.charts.len()
        )));
    }
    let chart = &spec.charts[0];
    if !chart.periodic || chart.dim() != grid.dim {
        return Err(WittenError::GridMismatch(format!(
            "`{}` is not a periodic chart of dimension {}",
            spec.name, grid.dim
        )));
    }
    let tau = 2.0 * std::f64::consts::PI;
    for k in 0..chart.dim() {
        if (chart.hi[k] - chart.lo[k] - tau).abs() > 1e-12 {
            return Err(WittenError::GridMismatch(
                "grid charts must have period 2pi".into(),
            ));
        }
    }
    Ok(chart)
}

/// The potential-route grid Witten Laplacian on p-form fields:
/// componentwise second-order centered (3-point per axis) Laplacian, plus
/// the diagonal potential `t^2 ||grad f||^2` sampled pointwise, plus the
/// zeroth-order coupling `t sum_ij Hess f_ij(x) [(a^i)*, a^j]` acting on the
/// component index at each site.
pub fn grid_witten_laplacian(
    grid: &TorusGrid,
    spec: &MorseFunctionSpec,
    t: f64,
    p: usize,
) -> Result<SparseSymOperator, WittenError> {
    let chart = single_periodic_chart(grid, spec)?;
    let dim = grid.dim;
    if p > dim {
        return Err(WittenError::DegreeOutOfRange { degree: p, top: dim });
    }
    let comps = binomial(dim, p);
    let sites = grid.sites();
    let n_axis = grid.points_per_axis;
    let h = grid.spacing();
    let w = 1.0 / (h * h);

    // component-coupling blocks F^{ij}
    let mut fermion = Vec::new();
    for i in 1..=dim {
        for j in 1..=dim {
            fermion.push(((i, j), fermion_commutator_matrix(dim, p, i, j)?.matrix));
        }
    }

    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for site in 0..sites {
        let coords = grid.site_coords(site);
        let x = grid.site_position(site);
        let g = (chart.grad)(&x);
        let hess = (chart.hess)(&x);
        let grad2: f64 = g.iter().map(|v| v * v).sum();

        // A(x) = sum_ij Hess_ij F^{ij} on the component index
        let mut coupling = DMatrix::<f64>::zeros(comps, comps);
        for ((i, j), f) in &fermion {
            let c = hess[(i - 1, j - 1)];
            if c != 0.0 {
                coupling += f * c;
            }
        }

        for comp in 0..comps {
            let row = comp * sites + site;
            entries.push((row, row, 2.0 * dim as f64 * w + t * t * grad2));
            for axis in 0..dim {
                for dir in [-1i64, 1i64] {
                    let mut nb = coords.clone();
                    nb[axis] = ((nb[axis] as i64 + dir).rem_euclid(n_axis as i64)) as usize;
                    let col = comp * sites + grid.site_index(&nb);
                    entries.push((row, col, -w));
                }
            }
            for comp2 in 0..comps {
                let c = coupling[(comp, comp2)];
                if c != 0.0 {
                    entries.push((row, comp2 * sites + site, t * c));
                }
            }
        }
    }
    Ok(SparseSymOperator::assemble(entries, comps * sites)?)
}

/// The conjugation-route grid Witten Laplacian on 0-forms: the exact
/// diagonal conjugation of the lattice derivative, `d_t = E^{-1} d E` with
/// `E = diag(e^{t f})` sampled at sites and axis-edge midpoints, and
/// `Delta_t = d_t^T d_t`. Its kernel is exactly t-independent; it differs
/// from the potential route by the O(h^2) discretization gap between the
/// two constructions.
pub fn grid_witten_laplacian_conjugated(
    grid: &TorusGrid,
    spec: &MorseFunctionSpec,
    t: f64,
) -> Result<SparseSymOperator, WittenError> {
    let chart = single_periodic_chart(grid, spec)?;
    let dim = grid.dim;
    let sites = grid.sites();
    let n_axis = grid.points_per_axis;
    let h = grid.spacing();

    let mut d_t = SparseMatrix::new(dim * sites, sites);
    for site in 0..sites {
        let coords = grid.site_coords(site);
        let x = grid.site_position(site);
        let f_here = (chart.f)(&x);
        for axis in 0..dim {
            let mut nb = coords.clone();
            nb[axis] = (nb[axis] + 1) % n_axis;
            let neighbor = grid.site_index(&nb);
            let mut mid = x.clone();
            mid[axis] += 0.5 * h;
            let mut far = x.clone();
            far[axis] += h;
            let f_mid = (chart.f)(&mid);
            let f_far = (chart.f)(&far);
            for exponent in [t * (f_here - f_mid), t * (f_far - f_mid)] {
                if exponent.abs() > EXP_GUARD {
                    return Err(WittenError::OverflowGuard { exponent });
                }
            }
            let row = axis * sites + site;
            d_t.add(row, site, -(t * (f_here - f_mid)).exp() / h);
            d_t.add(row, neighbor, (t * (f_far - f_mid)).exp() / h);
        }
    }
    let lap = d_t.transpose().matmul(&d_t);
    Ok(SparseSymOperator::assemble(lap.triplets(), sites)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dec::{generate, CatalogParams};
    use crate::morse::catalog::catalog_pair;
    use crate::spectral::{self, SpectrumRequest};

    #[test]
    fn deformation_at_zero_is_integer_coboundary() {
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let deformed = DeformedComplex::new(&complex, &stars, |p| p[2], 0.0).unwrap();
        let d0 = complex.coboundary(0).unwrap();
        let dt0 = deformed.deformed_coboundary(0).unwrap();
        for (r, c, v) in dt0.iter_entries() {
            assert_eq!(v, d0.get(r, c) as f64);
        }
    }

    #[test]
    fn cycle_hand_computed_entries() {
        // cycle N=4, vertex values f = (1,0,0,0), edge values 0, t = 1:
        // d_t[e, v] = sign * e^{f(v) - f(e)}
        let complex = generate("cycle", &CatalogParams::default().with_n(4)).unwrap();
        let f_v = vec![1.0, 0.0, 0.0, 0.0];
        let f_e = vec![0.0; 4];
        let d_t = deform_coboundary(&complex, &f_v, &f_e, 1.0, 0).unwrap();
        let d = complex.coboundary(0).unwrap();
        for (r, c, v) in d_t.iter_entries() {
            let expected = d.get(r, c) as f64 * (f_v[c]).exp();
            assert!((v - expected).abs() < 1e-15);
            if c == 0 {
                assert!((v.abs() - std::f64::consts::E).abs() < 1e-15);
            } else {
                assert!((v.abs() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn deformed_nilpotency_octahedron() {
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let deformed = DeformedComplex::new(&complex, &stars, |p| p[2], 3.0).unwrap();
        let d0 = deformed.deformed_coboundary(0).unwrap();
        let d1 = deformed.deformed_coboundary(1).unwrap();
        let prod = d1.matmul(d0);
        let scale = d0.max_abs().max(d1.max_abs());
        assert!(prod.max_abs() <= 1e-12 * scale * scale);
    }

    #[test]
    fn kernel_dimension_is_t_independent_on_torus() {
        let complex = generate("torus_grid", &CatalogParams::default().with_n(8)).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let pair = catalog_pair("torus/cos+cos").unwrap();
        for &t in &[0.0, 0.5, 1.0, 2.0] {
            let deformed = DeformedComplex::new(&complex, &stars, pair.mesh_field, t).unwrap();
            let lap = deformed.laplacian(1).unwrap();
            let k = spectral::kernel_dimension(&lap, spectral::DEFAULT_GAP_FACTOR).unwrap();
            assert_eq!(k, 2, "kernel at t={t}");
        }
    }

    #[test]
    fn octahedron_zero_forms_kernel_at_t() {
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let deformed = DeformedComplex::new(&complex, &stars, |p| p[2], 1.0).unwrap();
        let lap = deformed.laplacian(0).unwrap();
        assert_eq!(
            spectral::kernel_dimension(&lap, spectral::DEFAULT_GAP_FACTOR).unwrap(),
            1
        );
    }

    #[test]
    fn overflow_guard_trips() {
        let complex = generate("cycle", &CatalogParams::default().with_n(4)).unwrap();
        let f_v = vec![1000.0, 0.0, 0.0, 0.0];
        let f_e = vec![0.0; 4];
        assert!(matches!(
            deform_coboundary(&complex, &f_v, &f_e, 1.0, 0),
            Err(WittenError::OverflowGuard { .. })
        ));
    }

    #[test]
    fn fermion_diagonal_case_split() {
        // [(a^i)*, a^i] is diagonal with +1 on components containing i and
        // -1 otherwise, for every n <= 4 and degree.
        for n in 1..=4 {
            for p in 0..=n {
                let indices = multi_indices(n, p);
                for i in 1..=n {
                    let fm = fermion_commutator_matrix(n, p, i, i).unwrap();
                    for (r, idx) in indices.iter().enumerate() {
                        for c in 0..indices.len() {
                            let want = if r == c {
                                if idx.contains(&i) {
                                    1.0
                                } else {
                                    -1.0
                                }
                            } else {
                                0.0
                            };
                            assert_eq!(fm.matrix[(r, c)], want, "n={n} p={p} i={i}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fermion_anticommutation_is_kronecker_delta() {
        for n in 1..=4usize {
            for p in 0..=n {
                let dim = binomial(n, p);
                for i in 1..=n {
                    for j in 1..=n {
                        // {a^i, (a^j)*} on p-forms
                        let up_then_down = if p < n {
                            annihilation_matrix(n, p + 1, i) * wedge_matrix(n, p, j)
                        } else {
                            DMatrix::zeros(dim, dim)
                        };
                        let down_then_up = if p > 0 {
                            wedge_matrix(n, p - 1, j) * annihilation_matrix(n, p, i)
                        } else {
                            DMatrix::zeros(dim, dim)
                        };
                        let anti = up_then_down + down_then_up;
                        let want = if i == j {
                            DMatrix::identity(dim, dim)
                        } else {
                            DMatrix::zeros(dim, dim)
                        };
                        assert_eq!(anti, want, "n={n} p={p} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn fermion_mixed_commutator_n2() {
        // n=2, p=1: [(a^1)*, a^2] maps dx^2 to 2 dx^1 and kills dx^1
        // (= 2 (a^1)* a^2 since the mixed operators anticommute).
        let fm = fermion_commutator_matrix(2, 1, 1, 2).unwrap();
        assert_eq!(fm.matrix[(0, 1)], 2.0);
        assert_eq!(fm.matrix[(0, 0)], 0.0);
        assert_eq!(fm.matrix[(1, 0)], 0.0);
        assert_eq!(fm.matrix[(1, 1)], 0.0);
        // and on 0-forms [(a^1)*, a^1] = -1
        let f0 = fermion_commutator_matrix(2, 0, 1, 1).unwrap();
        assert_eq!(f0.matrix[(0, 0)], -1.0);
    }

    #[test]
    fn grid_plain_laplacian_has_zero_ground_state() {
        let grid = TorusGrid::new(1, 32).unwrap();
        let pair = catalog_pair("circle/cos").unwrap();
        let op = grid_witten_laplacian(&grid, &pair.spec, 0.0, 0).unwrap();
        let res = spectral::smallest_eigs(&op, &SpectrumRequest::smallest(2)).unwrap();
        assert!(res.eigenvalues[0].abs() < 1e-9 * op.inf_norm());
        assert!(res.eigenvalues[1] > 0.5);
    }

    #[test]
    fn grid_witten_ground_state_approaches_zero() {
        // matches a dense diagonalization oracle and sinks toward 0 with t
        let grid = TorusGrid::new(1, 64).unwrap();
        let pair = catalog_pair("circle/cos").unwrap();
        let mut previous = f64::INFINITY;
        for &t in &[1.0, 2.0, 4.0] {
            let op = grid_witten_laplacian(&grid, &pair.spec, t, 0).unwrap();
            let res = spectral::smallest_eigs(&op, &SpectrumRequest::smallest(1)).unwrap();
            let dense = op.to_dense().symmetric_eigen();
            let oracle = dense
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            assert!((res.eigenvalues[0] - oracle).abs() < 1e-8 * op.inf_norm().max(1.0));
            assert!(res.eigenvalues[0].abs() < previous.abs() + 1e-12);
            previous = res.eigenvalues[0];
        }
        assert!(previous.abs() < 0.05, "ground energy {previous}");
    }

    #[test]
    fn conjugated_grid_route_has_exact_kernel() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let pair = catalog_pair("torus/cos+cos").unwrap();
        let op = grid_witten_laplacian_conjugated(&grid, &pair.spec, 3.0).unwrap();
        let res = spectral::smallest_eigs(&op, &SpectrumRequest::smallest(2)).unwrap();
        assert!(res.eigenvalues[0].abs() < 1e-10 * op.inf_norm());
        assert!(res.eigenvalues[1] > 0.1);
    }

    #[test]
    fn field_component_counts() {
        let grid = TorusGrid::new(2, 8).unwrap();
        assert_eq!(TorusGridField::zeros(grid, 0).data.len(), 64);
        assert_eq!(TorusGridField::zeros(grid, 1).data.len(), 128);
        assert_eq!(TorusGridField::zeros(grid, 2).data.len(), 64);
    }
}

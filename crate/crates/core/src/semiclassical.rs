//! Harmonic-oscillator model operators at critical points, their merged
//! model spectra, scalar Schrödinger discretizations for the semiclassical
//! limit, partitions of unity, and the IMS localization identity.
//!
//! Scalar wells: `K^a = -Laplacian + (1/2) Hess h (x-x^a)^2 + g(x^a)` has
//! spectrum `sum_i omega_i (2 n_i + 1) + g(x^a)` with `omega_i^2` the
//! eigenvalues of `(1/2) Hess h`. Form wells carry the signed Hessian
//! eigenvalues of the Morse function; the coupling shifts each axis by
//! `+/- omega_i` according to whether the axis lies in the form's
//! multi-index, which reproduces the `gamma` combinatorics in normalized
//! coordinates.

use crate::spectral::{self, SparseSymOperator, SpectralError, SpectrumRequest};
use crate::witten::multi_indices;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SemiclassicalError {
    #[error("well at {well} sits within 25% of the domain boundary [{lo}, {hi}]")]
    WellTooCloseToBoundary { well: f64, lo: f64, hi: f64 },
    #[error("partition supports overlap: centers {a} and {b} are {distance:.4e} apart, need >= {required:.4e}")]
    OverlappingSupports {
        a: f64,
        b: f64,
        distance: f64,
        required: f64,
    },
    #[error("partition is not diagonal over the operator grid: {0}")]
    NonDiagonalPartition(String),
    #[error("schedule must be strictly increasing")]
    ScheduleNotIncreasing,
    #[error("invalid well data: {0}")]
    InvalidWell(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

// ---------------------------------------------------------------------------
// Model spectra.
// ---------------------------------------------------------------------------

/// Scalar-case well data: oscillator frequencies (square roots of the
/// eigenvalues of `(1/2) Hess h` at the well) and the offset `g(x^a)`.
#[derive(Debug, Clone)]
pub struct ScalarWell {
    pub omegas: Vec<f64>,
    pub offset: f64,
}

impl ScalarWell {
    /// Build from the Hessian of `h` at a nondegenerate zero.
    pub fn from_hessian(hess: &DMatrix<f64>, offset: f64) -> Result<Self, SemiclassicalError> {
        let eig = hess.clone().symmetric_eigen();
        let mut omegas = Vec::with_capacity(eig.eigenvalues.len());
        for &lam in eig.eigenvalues.iter() {
            let half = 0.5 * lam;
            if half <= 0.0 {
                return Err(SemiclassicalError::InvalidWell(format!(
                    "Hessian eigenvalue {lam} is not strictly positive"
                )));
            }
            omegas.push(half.sqrt());
        }
        omegas.sort_by(f64::total_cmp);
        Ok(Self { omegas, offset })
    }
}

/// Form-case well data: the signed Hessian eigenvalues of the Morse
/// function at the critical point. Frequencies are their magnitudes; the
/// Morse index is the count of negatives.
#[derive(Debug, Clone)]
pub struct FormWell {
    pub hessian_eigenvalues: Vec<f64>,
}

impl FormWell {
    pub fn morse_index(&self) -> usize {
        self.hessian_eigenvalues.iter().filter(|&&l| l < 0.0).count()
    }
}

/// One model eigenvalue with its provenance.
#[derive(Debug, Clone)]
pub struct ModelLevel {
    pub value: f64,
    pub well: usize,
    pub quantum_numbers: Vec<usize>,
    /// Increasing multi-index of the form component (form case only).
    pub component: Option<Vec<usize>>,
}

/// Sorted merged model eigenvalues; ties are broken by well index then
/// quantum numbers, which keeps runs reproducible (the limit statement is
/// insensitive to tie order).
#[derive(Debug, Clone)]
pub struct ModelSpectrum {
    pub levels: Vec<ModelLevel>,
}

impl ModelSpectrum {
    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }
}

fn sort_levels(levels: &mut Vec<ModelLevel>) {
    levels.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.well.cmp(&b.well))
            .then(a.component.cmp(&b.component))
            .then(a.quantum_numbers.cmp(&b.quantum_numbers))
    });
}

/// All levels of one well with `sum omega_i (2 n_i + 1) + base <= cutoff`.
fn enumerate_levels(
    omegas: &[f64],
    base: f64,
    cutoff: f64,
    well: usize,
    component: Option<&Vec<usize>>,
) -> Vec<ModelLevel> {
    let mut out = Vec::new();
    let ground: f64 = base + omegas.iter().sum::<f64>();
    if ground > cutoff {
        return out;
    }
    let mut q = vec![0usize; omegas.len()];
    fn rec(
        omegas: &[f64],
        axis: usize,
        value: f64,
        cutoff: f64,
        q: &mut Vec<usize>,
        well: usize,
        component: Option<&Vec<usize>>,
        out: &mut Vec<ModelLevel>,
    ) {
        if axis == omegas.len() {
            out.push(ModelLevel {
                value,
                well,
                quantum_numbers: q.clone(),
                component: component.cloned(),
            });
            return;
        }
        let mut n = 0usize;
        loop {
            let v = value + 2.0 * n as f64 * omegas[axis];
            if v > cutoff + 1e-12 {
                break;
            }
            q[axis] = n;
            rec(omegas, axis + 1, v, cutoff, q, well, component, out);
            n += 1;
        }
        q[axis] = 0;
    }
    rec(omegas, 0, ground, cutoff, &mut q, well, component, &mut out);
    out
}

/// The first `count` eigenvalues of the direct sum of the scalar model
/// operators, multiplicity preserved. Enumeration is complete below the
/// returned maximum: the cutoff grows until every well has been exhausted
/// up to it and enough levels exist.
pub fn scalar_model_spectrum(wells: &[ScalarWell], count: usize) -> ModelSpectrum {
    let mut cutoff = wells
        .iter()
        .map(|w| w.offset + w.omegas.iter().sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
        + 1.0;
    loop {
        let mut levels = Vec::new();
        for (a, w) in wells.iter().enumerate() {
            levels.extend(enumerate_levels(&w.omegas, w.offset, cutoff, a, None));
        }
        if levels.len() >= count {
            sort_levels(&mut levels);
            // the prefix below the cutoff is complete; truncate
            levels.truncate(count);
            return ModelSpectrum { levels };
        }
        cutoff = cutoff * 2.0 + 1.0;
    }
}

/// The set-count from the diagonal action of the model coupling on a form
/// component: `gamma = |I and K| - |J and K| - |I and L| + |J and L|` with
/// `K` the first `n - mu` axes, `L` the last `mu`, and `J` the complement
/// of `I` (1-based axes).
pub fn gamma(n: usize, index_set: &[usize], mu: usize) -> i64 {
    let in_i = |axis: usize| index_set.contains(&axis);
    let in_k = |axis: usize| axis <= n - mu;
    let mut acc = 0i64;
    for axis in 1..=n {
        let i = in_i(axis);
        let k = in_k(axis);
        match (i, k) {
            (true, true) => acc += 1,   // |I ∩ K|
            (false, true) => acc -= 1,  // -|J ∩ K|
            (true, false) => acc -= 1,  // -|I ∩ L|
            (false, false) => acc += 1, // +|J ∩ L|
        }
    }
    acc
}

/// The first `count` eigenvalues of the direct sum of the form-valued model
/// operators restricted to p-forms, in units of t:
/// `sum_i omega_i (1 + 2 n_i) + sum_{i in I} lambda_i - sum_{i not in I}
/// lambda_i` over increasing multi-indices `|I| = p`. The kernel at degree p
/// is exactly the set of wells with Morse index p.
pub fn form_model_spectrum(
    n: usize,
    wells: &[FormWell],
    p: usize,
    count: usize,
) -> ModelSpectrum {
    let components = multi_indices(n, p);
    let mut cutoff = 1.0f64;
    loop {
        let mut levels = Vec::new();
        for (a, w) in wells.iter().enumerate() {
            let lambdas = &w.hessian_eigenvalues;
            let omegas: Vec<f64> = lambdas.iter().map(|l| l.abs()).collect();
            for comp in &components {
                let shift: f64 = (1..=n)
                    .map(|axis| {
                        if comp.contains(&axis) {
                            lambdas[axis - 1]
                        } else {
                            -lambdas[axis - 1]
                        }
                    })
                    .sum();
                levels.extend(enumerate_levels(&omegas, shift, cutoff, a, Some(comp)));
            }
        }
        if levels.len() >= count {
            sort_levels(&mut levels);
            levels.truncate(count);
            return ModelSpectrum { levels };
        }
        cutoff = cutoff * 2.0 + 1.0;
    }
}

// ---------------------------------------------------------------------------
// Scalar Schrödinger grids.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

/// A one-dimensional grid domain for `H(lambda) = -Laplacian + lambda^2 h +
/// lambda g`.
#[derive(Debug, Clone, Copy)]
pub struct GridDomain1D {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub boundary: Boundary,
}

impl GridDomain1D {
    pub fn spacing(&self) -> f64 {
        match self.boundary {
            Boundary::Dirichlet => (self.hi - self.lo) / (self.points as f64 + 1.0),
            Boundary::Periodic => (self.hi - self.lo) / self.points as f64,
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        match self.boundary {
            Boundary::Dirichlet => self.lo + self.spacing() * (i as f64 + 1.0),
            Boundary::Periodic => self.lo + self.spacing() * i as f64,
        }
    }
}

/// Second-order centered finite-difference discretization of
/// `-d^2/dx^2 + lambda^2 h(x) + lambda g(x)`. Wells (`h` zeros) must keep a
/// quarter of the box away from the boundary so that truncation does not
/// contaminate the bottom of the spectrum.
pub fn scalar_schrodinger_grid(
    domain: &GridDomain1D,
    h: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    lambda: f64,
    wells: &[f64],
) -> Result<SparseSymOperator, SemiclassicalError> {
    let width = domain.hi - domain.lo;
    if domain.boundary == Boundary::Dirichlet {
        for &w in wells {
            if (w - domain.lo).min(domain.hi - w) < 0.25 * width {
                return Err(SemiclassicalError::WellTooCloseToBoundary {
                    well: w,
                    lo: domain.lo,
                    hi: domain.hi,
                });
            }
        }
    }
    let n = domain.points;
    let dx = domain.spacing();
    let w = 1.0 / (dx * dx);
    let mut entries = Vec::with_capacity(3 * n);
    for i in 0..n {
        let x = domain.point(i);
        entries.push((i, i, 2.0 * w + lambda * lambda * h(x) + lambda * g(x)));
        match domain.boundary {
            Boundary::Dirichlet => {
                if i + 1 < n {
                    entries.push((i, i + 1, -w));
                    entries.push((i + 1, i, -w));
                }
            }
            Boundary::Periodic => {
                let j = (i + 1) % n;
                entries.push((i, j, -w));
                entries.push((j, i, -w));
            }
        }
    }
    Ok(SparseSymOperator::assemble(entries, n)?)
}

// ---------------------------------------------------------------------------
// Convergence tables.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub lambda: f64,
    /// 1-based eigenvalue index.
    pub n: usize,
    /// E_n(lambda) / lambda
    pub scaled: f64,
    pub model: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Per eigenvalue index: deviations non-increasing along the schedule.
    pub monotone: Vec<bool>,
}

/// Track `E_n(lambda)/lambda` against the model values over a schedule.
/// The operator factory owns grid refinement (resolution should grow at
/// least like sqrt(lambda) to resolve the shrinking wells).
pub fn semiclassical_convergence(
    mut operator_at: impl FnMut(f64) -> Result<SparseSymOperator, SemiclassicalError>,
    model: &ModelSpectrum,
    schedule: &[f64],
    n_eigs: usize,
    seed: u64,
) -> Result<ConvergenceTable, SemiclassicalError> {
    if schedule.windows(2).any(|w| w[1] <= w[0]) || schedule.is_empty() {
        return Err(SemiclassicalError::ScheduleNotIncreasing);
    }
    let model_values = model.values();
    let mut rows = Vec::new();
    let mut deviations: Vec<Vec<f64>> = vec![Vec::new(); n_eigs];
    for &lambda in schedule {
        let op = operator_at(lambda)?;
        let req = SpectrumRequest::smallest(n_eigs).with_seed(seed);
        let res = spectral::smallest_eigs(&op, &req)?;
        for n in 0..n_eigs {
            let scaled = res.eigenvalues[n] / lambda;
            let model_value = model_values.get(n).copied().unwrap_or(f64::NAN);
            let deviation = (scaled - model_value).abs();
            deviations[n].push(deviation);
            rows.push(ConvergenceRow {
                lambda,
                n: n + 1,
                scaled,
                model: model_value,
                deviation,
            });
        }
    }
    let monotone = deviations
        .iter()
        .map(|d| d.windows(2).all(|w| w[1] <= w[0] + 1e-12))
        .collect();
    Ok(ConvergenceTable { rows, monotone })
}

// ---------------------------------------------------------------------------
// Partition of unity and the IMS identity.
// ---------------------------------------------------------------------------

/// Smooth bump profile: 1 on `r <= inner`, 0 on `r >= outer`, a C-infinity
/// exponential blend in between.
#[derive(Debug, Clone, Copy)]
pub struct BumpProfile {
    pub inner: f64,
    pub outer: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self {
            inner: 1.0,
            outer: 2.0,
        }
    }
}

impl BumpProfile {
    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            let phi = |u: f64| (-1.0 / u).exp();
            let a = phi(self.outer - r);
            let b = phi(r - self.inner);
            a / (a + b)
        }
    }
}

/// Diagonal partition-of-unity members on a grid: localized bumps `J_a`
/// around each center plus the complement `J_0 = sqrt(1 - sum J_a^2)`.
#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    pub complement: Vec<f64>,
    pub bumps: Vec<Vec<f64>>,
}

impl PartitionOfUnity {
    pub fn members(&self) -> impl Iterator<Item = &Vec<f64>> {
        std::iter::once(&self.complement).chain(self.bumps.iter())
    }

    pub fn len(&self) -> usize {
        self.complement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complement.is_empty()
    }

    /// max |sum_a J_a(x)^2 - 1| over the grid.
    pub fn square_sum_deviation(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let s: f64 = self.members().map(|j| j[i] * j[i]).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Build the semiclassical partition: bumps `J_a(x) = J(lambda^{2/5} (x -
/// x^a))` and the square-root complement. The scaled supports (radius
/// `outer * lambda^{-2/5}`) must be pairwise disjoint.
pub fn build_partition(
    grid_points: &[f64],
    periodic_width: Option<f64>,
    centers: &[f64],
    lambda: f64,
    profile: BumpProfile,
) -> Result<PartitionOfUnity, SemiclassicalError> {
    let scale = lambda.powf(-0.4);
    let support = profile.outer * scale;
    let distance = |a: f64, b: f64| -> f64 {
        let d = (a - b).abs();
        match periodic_width {
            Some(w) => d.min(w - d % w).min((d % w).min(w - d % w)),
            None => d,
        }
    };
    for (i, &a) in centers.iter().enumerate() {
        for &b in centers.iter().skip(i + 1) {
            let d = distance(a, b);
            if d < 2.0 * support {
                return Err(SemiclassicalError::OverlappingSupports {
                    a,
                    b,
                    distance: d,
                    required: 2.0 * support,
                });
            }
        }
    }
    let bumps: Vec<Vec<f64>> = centers
        .iter()
        .map(|&c| {
            grid_points
                .iter()
                .map(|&x| profile.eval(distance(x, c) / scale))
                .collect()
        })
        .collect();
    let complement: Vec<f64> = (0..grid_points.len())
        .map(|i| {
            let s: f64 = bumps.iter().map(|j| j[i] * j[i]).sum();
            (1.0 - s).max(0.0).sqrt()
        })
        .collect();
    Ok(PartitionOfUnity { complement, bumps })
}

/// The IMS localization identity with the gradient term realized as the
/// double commutator: checks `H = sum_a J_a H J_a + (1/2) sum_a [J_a, [J_a,
/// H]]` entrywise and returns the maximal absolute deviation. For diagonal
/// `J_a` with `sum J_a^2 = 1` this is an exact matrix identity, so the
/// deviation is pure roundoff regardless of the discretization.
pub fn ims_identity_check(
    h: &SparseSymOperator,
    partition: &PartitionOfUnity,
) -> Result<f64, SemiclassicalError> {
    if partition.len() != h.dim() {
        return Err(SemiclassicalError::NonDiagonalPartition(format!(
            "partition over {} grid points, operator dimension {}",
            partition.len(),
            h.dim()
        )));
    }
    // (sum_a J_a H J_a + 1/2 [J_a,[J_a,H]])_{rc}
    //   = H_rc * sum_a (j_r j_c + (j_r - j_c)^2 / 2)
    let mut worst = 0.0f64;
    for (r, c, v) in h.entries() {
        let mut factor = 0.0;
        for j in partition.members() {
            let d = j[r] - j[c];
            factor += j[r] * j[c] + 0.5 * d * d;
        }
        worst = worst.max(((factor - 1.0) * v).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_well_unit_frequency() {
        let wells = [ScalarWell {
            omegas: vec![1.0],
            offset: 0.0,
        }];
        let spec = scalar_model_spectrum(&wells, 4);
        assert_eq!(spec.values(), vec![1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn double_well_quartic() {
        // h = (1-x^2)^2 has h'' = 8 at both wells: A = 4, omega = 2
        let well = ScalarWell {
            omegas: vec![2.0],
            offset: 0.0,
        };
        let spec = scalar_model_spectrum(&[well.clone(), well], 6);
        assert_eq!(spec.values(), vec![2.0, 2.0, 6.0, 6.0, 10.0, 10.0]);
    }

    #[test]
    fn anisotropic_well_with_offset() {
        let wells = [ScalarWell {
            omegas: vec![1.0, 2.0],
            offset: 0.5,
        }];
        let spec = scalar_model_spectrum(&wells, 4);
        assert_eq!(spec.values(), vec![3.5, 5.5, 7.5, 7.5]);
    }

    #[test]
    fn scalar_well_from_hessian_of_quartic_double_well() {
        let hess = DMatrix::from_element(1, 1, 8.0);
        let w = ScalarWell::from_hessian(&hess, 0.0).unwrap();
        assert_eq!(w.omegas, vec![2.0]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // independent rectangular-bound brute force over quantum numbers
        let wells = [
            ScalarWell {
                omegas: vec![1.0, 3.0],
                offset: 0.2,
            },
            ScalarWell {
                omegas: vec![2.0],
                offset: -0.1,
            },
        ];
        let count = 40;
        let spec = scalar_model_spectrum(&wells, count);
        let mut brute = Vec::new();
        for w in &wells {
            match w.omegas.len() {
                1 => {
                    for n0 in 0..200usize {
                        brute.push(w.offset + w.omegas[0] * (2.0 * n0 as f64 + 1.0));
                    }
                }
                2 => {
                    for n0 in 0..200usize {
                        for n1 in 0..200usize {
                            brute.push(
                                w.offset
                                    + w.omegas[0] * (2.0 * n0 as f64 + 1.0)
                                    + w.omegas[1] * (2.0 * n1 as f64 + 1.0),
                            );
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        brute.sort_by(f64::total_cmp);
        for (got, want) in spec.values().iter().zip(brute.iter().take(count)) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(2, &[], 0), -2);
        assert_eq!(gamma(2, &[2], 1), -2);
        assert_eq!(gamma(2, &[1], 1), 2);
    }

    #[test]
    fn gamma_lower_bound_and_equality_set() {
        // gamma >= -n with equality exactly when I = {n-mu+1..n}
        for n in 1..=6usize {
            for mu in 0..=n {
                for p in 0..=n {
                    for idx in multi_indices(n, p) {
                        let g = gamma(n, &idx, mu);
                        assert!(g >= -(n as i64), "gamma {g} below -{n}");
                        let l_block: Vec<usize> = ((n - mu + 1)..=n).collect();
                        if g == -(n as i64) {
                            assert_eq!(idx, l_block);
                        }
                        if idx == l_block {
                            assert_eq!(g, -(n as i64));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn form_spectrum_matches_gamma_in_normalized_coordinates() {
        // lambda = (+2,...,+2,-2,...,-2) with mu negatives at the end:
        // levels are 2 sum (1+2n_i) + 2 gamma.
        for n in 1..=3usize {
            for mu in 0..=n {
                let mut lam = vec![2.0; n];
                for l in lam.iter_mut().skip(n - mu) {
                    *l = -2.0;
                }
                let well = FormWell {
                    hessian_eigenvalues: lam,
                };
                for p in 0..=n {
                    let spec = form_model_spectrum(n, &[well.clone()], p, 8);
                    for level in &spec.levels {
                        let g = gamma(n, level.component.as_ref().unwrap(), mu);
                        let base: f64 = level
                            .quantum_numbers
                            .iter()
                            .map(|&q| 2.0 * (1.0 + 2.0 * q as f64))
                            .sum();
                        assert!(
                            (level.value - (base + 2.0 * g as f64)).abs() < 1e-12,
                            "n={n} mu={mu} p={p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn form_kernel_counts_wells_by_index() {
        // exhaustive over n <= 4 and all sign assignments
        for n in 1..=4usize {
            for signs in 0..(1u32 << n) {
                let lam: Vec<f64> = (0..n)
                    .map(|k| if signs >> k & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                let well = FormWell {
                    hessian_eigenvalues: lam,
                };
                let mu = well.morse_index();
                for p in 0..=n {
                    let spec = form_model_spectrum(n, &[well.clone()], p, 6);
                    let zeros = spec.values().iter().filter(|v| v.abs() < 1e-12).count();
                    assert_eq!(zeros, usize::from(mu == p), "n={n} signs={signs:b} p={p}");
                }
            }
        }
    }

    #[test]
    fn oscillator_grid_eigenvalues() {
        let lambda = 10.0;
        let domain = GridDomain1D {
            lo: -8.0,
            hi: 8.0,
            points: 2048,
            boundary: Boundary::Dirichlet,
        };
        let op = scalar_schrodinger_grid(&domain, |x| x * x, |_| 0.0, lambda, &[0.0]).unwrap();
        let res =
            spectral::smallest_eigs(&op, &SpectrumRequest::smallest(3).with_seed(1)).unwrap();
        for (n, &e) in res.eigenvalues.iter().enumerate() {
            let want = lambda * (2.0 * n as f64 + 1.0);
            assert!(
                (e / lambda - (2.0 * n as f64 + 1.0)).abs() < 1e-3,
                "E_{n} = {e}, want {want}"
            );
        }
    }

    #[test]
    fn constant_g_shifts_spectrum_exactly() {
        let domain = GridDomain1D {
            lo: -6.0,
            hi: 6.0,
            points: 128,
            boundary: Boundary::Dirichlet,
        };
        let lambda = 3.0;
        let c = 0.7;
        let base = scalar_schrodinger_grid(&domain, |x| x * x, |_| 0.0, lambda, &[0.0]).unwrap();
        let shifted =
            scalar_schrodinger_grid(&domain, |x| x * x, |_| c, lambda, &[0.0]).unwrap();
        // matrix identity: shifted = base + lambda c I
        let diff = shifted.to_dense() - base.to_dense();
        for r in 0..diff.nrows() {
            for cc in 0..diff.ncols() {
                let want = if r == cc { lambda * c } else { 0.0 };
                assert!((diff[(r, cc)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn well_boundary_guard() {
        let domain = GridDomain1D {
            lo: 0.0,
            hi: 4.0,
            points: 64,
            boundary: Boundary::Dirichlet,
        };
        assert!(matches!(
            scalar_schrodinger_grid(&domain, |x| x * x, |_| 0.0, 1.0, &[0.5]),
            Err(SemiclassicalError::WellTooCloseToBoundary { .. })
        ));
    }

    #[test]
    fn truncated_spectral_ceiling_grows_quadratically() {
        // stand-in for the essential-spectrum bound: the top of the
        // computed window grows at least like lambda^2
        let domain = GridDomain1D {
            lo: -8.0,
            hi: 8.0,
            points: 512,
            boundary: Boundary::Dirichlet,
        };
        let ceiling = |lambda: f64| {
            scalar_schrodinger_grid(&domain, |x| x * x, |_| 0.0, lambda, &[0.0])
                .unwrap()
                .inf_norm()
        };
        let (a, b, c) = (ceiling(10.0), ceiling(20.0), ceiling(40.0));
        assert!(b / a >= 3.5);
        assert!(c / b >= 3.5);
    }

    #[test]
    fn partition_square_sums_to_one() {
        let grid: Vec<f64> = (0..400).map(|i| -4.0 + i as f64 * 0.02).collect();
        let part = build_partition(&grid, None, &[-1.0, 1.0], 30.0, BumpProfile::default())
            .unwrap();
        assert!(part.square_sum_deviation() <= 1e-12);
        for j in part.members() {
            assert!(j.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        }
    }

    #[test]
    fn partition_single_center() {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
        let part =
            build_partition(&grid, None, &[2.5], 4.0, BumpProfile::default()).unwrap();
        assert_eq!(part.bumps.len(), 1);
        assert!(part.square_sum_deviation() <= 1e-12);
    }

    #[test]
    fn partition_overlap_guard() {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
        // lambda too small: support radius 2 lambda^{-2/5} too wide
        assert!(matches!(
            build_partition(&grid, None, &[2.0, 2.5], 1.2, BumpProfile::default()),
            Err(SemiclassicalError::OverlappingSupports { .. })
        ));
    }

    #[test]
    fn ims_identity_trivial_partition() {
        let op = SparseSymOperator::assemble(
            [(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)],
            2,
        )
        .unwrap();
        let part = PartitionOfUnity {
            complement: vec![1.0, 1.0],
            bumps: vec![],
        };
        assert_eq!(ims_identity_check(&op, &part).unwrap(), 0.0);
    }

    #[test]
    fn ims_identity_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let n = 40 + (rng.gen::<u32>() % 60) as usize;
            let mut entries = Vec::new();
            for i in 0..n {
                entries.push((i, i, 2.0 + rng.gen::<f64>()));
                if i + 1 < n {
                    let v = rng.gen::<f64>() - 0.5;
                    entries.push((i, i + 1, v));
                    entries.push((i + 1, i, v));
                }
            }
            let h = SparseSymOperator::assemble(entries, n).unwrap();
            let grid: Vec<f64> = (0..n).map(|i| i as f64 / n as f64 * 10.0).collect();
            let part = build_partition(
                &grid,
                None,
                &[2.5, 7.5],
                2.0 + 3.0 * rng.gen::<f64>(),
                BumpProfile::default(),
            )
            .unwrap();
            let dev = ims_identity_check(&h, &part).unwrap();
            assert!(dev <= 1e-12 * h.inf_norm());
        }
    }

    #[test]
    fn ims_dimension_mismatch() {
        let op = SparseSymOperator::assemble([(0, 0, 1.0)], 1).unwrap();
        let part = PartitionOfUnity {
            complement: vec![1.0, 1.0],
            bumps: vec![],
        };
        assert!(matches!(
            ims_identity_check(&op, &part),
            Err(SemiclassicalError::NonDiagonalPartition(_))
        ));
    }

    #[test]
    fn convergence_table_monotone_for_oscillator() {
        let model = scalar_model_spectrum(
            &[ScalarWell {
                omegas: vec![1.0],
                offset: 0.0,
            }],
            3,
        );
        let table = semiclassical_convergence(
            |lambda| {
                let points = (256.0 * lambda.sqrt()) as usize;
                let domain = GridDomain1D {
                    lo: -8.0,
                    hi: 8.0,
                    points,
                    boundary: Boundary::Dirichlet,
                };
                scalar_schrodinger_grid(&domain, |x| x * x, |_| 0.0, lambda, &[0.0])
            },
            &model,
            &[4.0, 8.0, 16.0],
            2,
            7,
        )
        .unwrap();
        assert_eq!(table.rows.len(), 6);
        for row in &table.rows {
            assert!(row.deviation < 1e-2, "{row:?}");
        }
    }

    #[test]
    fn schedule_must_increase() {
        let model = scalar_model_spectrum(
            &[ScalarWell {
                omegas: vec![1.0],
                offset: 0.0,
            }],
            1,
        );
        let r = semiclassical_convergence(
            |_| {
                scalar_schrodinger_grid(
                    &GridDomain1D {
                        lo: -4.0,
                        hi: 4.0,
                        points: 32,
                        boundary: Boundary::Dirichlet,
                    },
                    |x| x * x,
                    |_| 0.0,
                    1.0,
                    &[0.0],
                )
            },
            &model,
            &[2.0, 2.0],
            1,
            0,
        );
        assert!(matches!(r, Err(SemiclassicalError::ScheduleNotIncreasing)));
    }
}

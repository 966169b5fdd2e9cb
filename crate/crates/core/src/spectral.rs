//! Sparse symmetric operators and iterative computation of their smallest
//! eigenvalues.
//!
//! Every operator in this crate — Hodge Laplacians, Witten Laplacians,
//! Schrödinger discretizations — ends up as a [`SparseSymOperator`]. The
//! solver is a block Lanczos / Rayleigh–Ritz iteration with full
//! reorthogonalization: robust at desk scale (dims up to ~10^5), deterministic
//! for a fixed seed, and accurate near zero where the spectra of interest
//! live. Kernel dimensions are decided by a *relative* spectral gap rule so
//! that the answer is invariant under positive rescaling of the operator.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("triplet index ({row},{col}) out of range for dim {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },
    #[error("non-finite value at ({row},{col})")]
    NonFiniteValue { row: usize, col: usize },
    #[error("input not symmetric: |A - A^T| = {deviation:e} exceeds {tolerance:e}")]
    AsymmetricInput { deviation: f64, tolerance: f64 },
    #[error("operator dimension must be positive")]
    ZeroDimension,
    #[error("invalid spectrum request: {0}")]
    InvalidRequest(String),
    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },
    #[error("operator has negative spectrum (smallest eigenvalue {smallest:e}, tolerance {tolerance:e})")]
    NegativeSpectrum { smallest: f64, tolerance: f64 },
    #[error("no spectral gap of ratio >= {required_ratio:e} separates a candidate kernel from the rest")]
    AmbiguousGap { required_ratio: f64 },
}

/// Assembled real symmetric operator in triplet + CSR storage.
///
/// Duplicate `(row, col)` triplets are summed during assembly; the stored
/// matrix is the symmetrization `(A + A^T)/2` of the summed input, which is
/// rejected if it deviates from symmetry by more than `1e-12 * max|A|`.
#[derive(Debug, Clone)]
pub struct SparseSymOperator {
    dim: usize,
    // CSR
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    inf_norm: f64,
}

const SYMMETRY_RTOL: f64 = 1e-12;

impl SparseSymOperator {
    /// Assemble from `(row, col, value)` triplets, summing duplicates and
    /// symmetrizing. Fails on out-of-range indices, non-finite values, or
    /// asymmetry beyond `1e-12` relative.
    pub fn assemble(
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
        dim: usize,
    ) -> Result<Self, SpectralError> {
        if dim == 0 {
            return Err(SpectralError::ZeroDimension);
        }
        let mut summed: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for (row, col, value) in entries {
            if row >= dim || col >= dim {
                return Err(SpectralError::IndexOutOfRange { row, col, dim });
            }
            if !value.is_finite() {
                return Err(SpectralError::NonFiniteValue { row, col });
            }
            *summed.entry((row, col)).or_insert(0.0) += value;
        }

        let max_abs = summed.values().fold(0.0f64, |m, v| m.max(v.abs()));
        let tolerance = SYMMETRY_RTOL * max_abs;
        let mut max_dev = 0.0f64;
        for (&(r, c), &v) in &summed {
            if r < c {
                let vt = summed.get(&(c, r)).copied().unwrap_or(0.0);
                max_dev = max_dev.max((v - vt).abs());
            } else if r > c && !summed.contains_key(&(c, r)) {
                max_dev = max_dev.max(v.abs());
            }
        }
        if max_dev > tolerance {
            return Err(SpectralError::AsymmetricInput {
                deviation: max_dev,
                tolerance,
            });
        }

        // Symmetrize: keep (min,max) keys, value = average of the two slots.
        let mut sym: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for (&(r, c), &v) in &summed {
            if r == c {
                sym.insert((r, c), v);
            } else {
                let (a, b) = (r.min(c), r.max(c));
                let vt = summed.get(&(c, r)).copied().unwrap_or(0.0);
                sym.insert((a, b), 0.5 * (v + vt));
            }
        }

        // CSR with both halves stored explicitly.
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for (&(r, c), &v) in &sym {
            if v != 0.0 {
                per_row[r].push((c, v));
                if r != c {
                    per_row[c].push((r, v));
                }
            }
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut inf_norm = 0.0f64;
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut row_sum = 0.0;
            for &(c, v) in row.iter() {
                col_idx.push(c);
                values.push(v);
                row_sum += v.abs();
            }
            inf_norm = inf_norm.max(row_sum);
            row_ptr.push(col_idx.len());
        }

        Ok(Self {
            dim,
            row_ptr,
            col_idx,
            values,
            inf_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Max absolute row sum; an upper bound on the spectral norm.
    pub fn inf_norm(&self) -> f64 {
        self.inf_norm
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.dim);
        self.matvec(x.as_slice(), y.as_mut_slice());
        y
    }

    /// Dense copy; intended for small operators and tests.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.col_idx[k])] = self.values[k];
            }
        }
        m
    }

    /// Iterate stored entries (upper and lower halves both appear).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    /// Operator scaled by a constant factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= factor;
        }
        out.inf_norm *= factor.abs();
        out
    }
}

/// What end of the spectrum to compute. Only the smallest (algebraic)
/// eigenvalues are supported; that is the end every experiment here needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralTarget {
    #[default]
    SmallestAlgebraic,
}

/// Request for `k` eigenpairs of a [`SparseSymOperator`].
#[derive(Debug, Clone)]
pub struct SpectrumRequest {
    pub k: usize,
    pub target: SpectralTarget,
    /// Residual tolerance, relative to the spectral norm estimate.
    pub tol: f64,
    /// Cap on the Krylov basis size; 0 selects an automatic cap.
    pub max_iterations: usize,
    pub deterministic_seed: u64,
}

impl SpectrumRequest {
    pub fn smallest(k: usize) -> Self {
        Self {
            k,
            target: SpectralTarget::SmallestAlgebraic,
            tol: 1e-9,
            max_iterations: 0,
            deterministic_seed: 0x5eed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.deterministic_seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self, dim: usize) -> Result<(), SpectralError> {
        if self.k == 0 {
            return Err(SpectralError::InvalidRequest("k must be >= 1".into()));
        }
        if self.k >= dim {
            return Err(SpectralError::InvalidRequest(format!(
                "k = {} must be < dim = {}",
                self.k, dim
            )));
        }
        if !(self.tol > 0.0) {
            return Err(SpectralError::InvalidRequest("tol must be > 0".into()));
        }
        Ok(())
    }
}

/// Computed eigenpairs, ascending.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Per-pair `||A v - lambda v|| / scale` with scale the Ritz estimate of
    /// the spectral norm.
    pub residuals: Vec<f64>,
    pub eigenvectors: Option<DMatrix<f64>>,
}

/// The `k` smallest eigenvalues of an assembled operator.
///
/// Block Lanczos with full reorthogonalization; the Rayleigh–Ritz projection
/// `T = V^T A V` is kept explicitly, so clustered and repeated eigenvalues
/// are resolved by the block structure. Runs until every requested residual
/// is below `tol` relative to the Ritz norm estimate, growing the basis up to
/// `max_iterations` columns (or the full dimension, whichever is smaller).
pub fn smallest_eigs(
    op: &SparseSymOperator,
    req: &SpectrumRequest,
) -> Result<SpectrumResult, SpectralError> {
    req.validate(op.dim())?;
    bottom_spectrum(op, req.k, req)
}

/// Bottom spectral window, permitting `k == dim` (quotienting the public
/// request validation). Kernel detection and graded-spectrum assembly use
/// this to see the entire spectrum of small operators.
pub fn bottom_spectrum(
    op: &SparseSymOperator,
    k: usize,
    req: &SpectrumRequest,
) -> Result<SpectrumResult, SpectralError> {
    let n = op.dim();
    let k = k.min(n);
    let block = k.clamp(2, 6).min(n);
    let cap = if req.max_iterations == 0 {
        n.min((60 * k).max(600))
    } else {
        n.min(req.max_iterations.max(k))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(req.deterministic_seed);
    // Basis V (n x m), image W = A V, projection T = V^T W.
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut image: Vec<DVector<f64>> = Vec::new();
    let mut proj = DMatrix::<f64>::zeros(cap, cap);

    let mut best_residual = f64::INFINITY;

    // Seed block.
    let mut pending: Vec<DVector<f64>> = (0..block)
        .map(|_| DVector::from_fn(n, |_, _| rng.gen::<f64>() - 0.5))
        .collect();

    loop {
        // Orthonormalize pending columns against the basis and each other
        // (two Gram-Schmidt passes), replacing breakdowns with fresh
        // random directions.
        for mut v in pending.drain(..) {
            if basis.len() >= cap.min(n) {
                break;
            }
            let mut attempts = 0;
            loop {
                for _ in 0..2 {
                    for b in &basis {
                        let c = b.dot(&v);
                        v.axpy(-c, b, 1.0);
                    }
                }
                let norm = v.norm();
                if norm > 1e-10 {
                    v /= norm;
                    break;
                }
                attempts += 1;
                if attempts > 4 {
                    break;
                }
                v = DVector::from_fn(n, |_, _| rng.gen::<f64>() - 0.5);
            }
            if attempts > 4 {
                continue;
            }
            let w = op.apply(&v);
            let m = basis.len();
            for (i, b) in basis.iter().enumerate() {
                let tij = b.dot(&w);
                proj[(i, m)] = tij;
                proj[(m, i)] = tij;
            }
            proj[(m, m)] = v.dot(&w);
            basis.push(v);
            image.push(w);
        }

        let m = basis.len();
        if m == 0 {
            return Err(SpectralError::NoConvergence {
                iterations: 0,
                best_residual,
            });
        }

        // Rayleigh-Ritz on the current basis.
        let t_small = proj.view((0, 0), (m, m)).into_owned();
        let eig = t_small.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let scale = (0..m)
            .map(|i| eig.eigenvalues[i].abs())
            .fold(f64::MIN_POSITIVE, f64::max);

        let kk = k.min(m);
        let exact = m >= n; // basis spans the whole space
        let mut residuals = Vec::with_capacity(kk);
        let mut worst = 0.0f64;
        for &j in order.iter().take(kk) {
            let theta = eig.eigenvalues[j];
            let y = eig.eigenvectors.column(j);
            let mut r = DVector::zeros(n);
            for (i, w) in image.iter().enumerate() {
                r.axpy(y[i], w, 1.0);
            }
            for (i, b) in basis.iter().enumerate() {
                r.axpy(-theta * y[i], b, 1.0);
            }
            let res = r.norm() / scale;
            residuals.push(res);
            worst = worst.max(res);
        }
        best_residual = best_residual.min(worst);

        let have_margin = m >= (k + block).min(n);
        if exact || (m >= kk && worst <= req.tol && have_margin) {
            let mut eigenvalues = Vec::with_capacity(kk);
            let mut vectors = DMatrix::zeros(n, kk);
            for (out_col, &j) in order.iter().take(kk).enumerate() {
                eigenvalues.push(eig.eigenvalues[j]);
                let y = eig.eigenvectors.column(j);
                let mut v = DVector::zeros(n);
                for (i, b) in basis.iter().enumerate() {
                    v.axpy(y[i], b, 1.0);
                }
                vectors.set_column(out_col, &v);
            }
            // Recompute residuals for the exact path so the contract holds.
            if exact {
                residuals.clear();
                for (out_col, &ev) in eigenvalues.iter().enumerate() {
                    let v = vectors.column(out_col).into_owned();
                    let r = op.apply(&v) - &v * ev;
                    residuals.push(r.norm() / scale);
                }
            }
            return Ok(SpectrumResult {
                eigenvalues,
                residuals,
                eigenvectors: Some(vectors),
            });
        }

        if m >= cap {
            return Err(SpectralError::NoConvergence {
                iterations: m,
                best_residual,
            });
        }

        // Expand: next block from the images of the Ritz vectors with the
        // worst residuals (restarted-refinement flavored), padded with the
        // images of the newest basis vectors (plain Lanczos flavored).
        let grow = block.min(cap - m);
        for g in 0..grow {
            if g < kk {
                let j = order[g];
                let y = eig.eigenvectors.column(j);
                let mut w = DVector::zeros(n);
                for (i, wi) in image.iter().enumerate() {
                    w.axpy(y[i], wi, 1.0);
                }
                pending.push(w);
            } else {
                pending.push(image[m - 1 - (g - kk)].clone());
            }
        }
    }
}

/// Relative-gap kernel detection parameters.
///
/// An eigenvalue belongs to the kernel candidate when it is at most
/// `gap_factor` times the first eigenvalue above the candidate set, and at
/// most `REL_ZERO_CEILING` times the top of the computed window. The split
/// must additionally exhibit a ratio of at least `AMBIGUITY_RATIO`.
pub const REL_ZERO_CEILING: f64 = 1e-8;
const AMBIGUITY_RATIO: f64 = 1e3;
const PSD_TOL: f64 = 1e-9;
pub const DEFAULT_GAP_FACTOR: f64 = 1e-6;

/// Dimension of the kernel of a positive semidefinite operator, decided by
/// the relative spectral gap rule. Scale-invariant: multiplying the operator
/// by any positive constant does not change the answer.
pub fn kernel_dimension(
    op: &SparseSymOperator,
    gap_factor: f64,
) -> Result<usize, SpectralError> {
    kernel_dimension_seeded(op, gap_factor, 0x5eed)
}

pub fn kernel_dimension_seeded(
    op: &SparseSymOperator,
    gap_factor: f64,
    seed: u64,
) -> Result<usize, SpectralError> {
    let n = op.dim();
    if op.inf_norm() == 0.0 {
        return Ok(n);
    }
    let mut window = n.min(12);
    loop {
        let req = SpectrumRequest::smallest(window.min(n.saturating_sub(1)).max(1))
            .with_seed(seed);
        let spectrum = bottom_spectrum(op, window, &req)?;
        match classify_kernel(&spectrum.eigenvalues, gap_factor, op.inf_norm(), n, window) {
            KernelVerdict::Count(c) => return Ok(c),
            KernelVerdict::Negative { smallest, tolerance } => {
                return Err(SpectralError::NegativeSpectrum { smallest, tolerance })
            }
            KernelVerdict::Ambiguous => {
                return Err(SpectralError::AmbiguousGap {
                    required_ratio: AMBIGUITY_RATIO,
                })
            }
            KernelVerdict::NeedWiderWindow => {
                if window >= n {
                    // Everything computed is zero and the window is the whole
                    // space: the operator is (numerically) zero.
                    return Ok(n);
                }
                window = (window * 2).min(n);
            }
        }
    }
}

enum KernelVerdict {
    Count(usize),
    Negative { smallest: f64, tolerance: f64 },
    Ambiguous,
    NeedWiderWindow,
}

/// Kernel count inside an already-computed bottom window of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKernel {
    Count(usize),
    /// Every value in the window is numerically zero; the kernel extends at
    /// least to the window edge and the caller must widen it to decide.
    AllZero,
}

/// Apply the relative-gap kernel rule to an eigenvalue window that may not
/// reach the full dimension. `norm_hint` is a scale for the operator (an
/// inf-norm estimate); it anchors the "numerically zero" floor.
pub fn kernel_count_in_window(
    eigs: &[f64],
    gap_factor: f64,
    norm_hint: f64,
) -> Result<WindowKernel, SpectralError> {
    if eigs.is_empty() {
        return Err(SpectralError::InvalidRequest("empty window".into()));
    }
    match classify_kernel(eigs, gap_factor, norm_hint, usize::MAX, eigs.len()) {
        KernelVerdict::Count(c) => Ok(WindowKernel::Count(c)),
        KernelVerdict::Negative { smallest, tolerance } => {
            Err(SpectralError::NegativeSpectrum { smallest, tolerance })
        }
        KernelVerdict::Ambiguous => Err(SpectralError::AmbiguousGap {
            required_ratio: AMBIGUITY_RATIO,
        }),
        KernelVerdict::NeedWiderWindow => Ok(WindowKernel::AllZero),
    }
}

fn classify_kernel(
    eigs: &[f64],
    gap_factor: f64,
    inf_norm: f64,
    dim: usize,
    window: usize,
) -> KernelVerdict {
    let k = eigs.len();
    let psd_tol = PSD_TOL * inf_norm;
    if eigs[0] < -psd_tol {
        return KernelVerdict::Negative {
            smallest: eigs[0],
            tolerance: psd_tol,
        };
    }
    let vals: Vec<f64> = eigs.iter().map(|&e| e.max(0.0)).collect();
    let top = vals[k - 1];
    let all_zero_floor = 1e-12 * inf_norm;
    if top <= all_zero_floor {
        // The whole window is numerically zero; only conclusive if the
        // window is the full spectrum.
        if window >= dim {
            return KernelVerdict::Count(dim);
        }
        return KernelVerdict::NeedWiderWindow;
    }
    let ceiling = REL_ZERO_CEILING * top;

    // Largest split s with: kernel part below both the ceiling and
    // gap_factor * first-above, and a clear ratio across the split.
    for s in (1..k).rev() {
        let below = vals[s - 1];
        let above = vals[s];
        if above <= 0.0 {
            continue;
        }
        let ratio_ok = above >= AMBIGUITY_RATIO * below.max(all_zero_floor.min(above * 1e-16));
        if below <= ceiling && below <= gap_factor * above && ratio_ok {
            if s == k && window < dim {
                return KernelVerdict::NeedWiderWindow;
            }
            return KernelVerdict::Count(s);
        }
    }
    // No split: kernel is empty only if the bottom is clearly nonzero.
    if vals[0] > ceiling {
        return KernelVerdict::Count(0);
    }
    KernelVerdict::Ambiguous
}

//! The supersymmetric structure over the graded cochain space: the grading
//! `P = (-1)^p`, the supercharge `Q_t = d_t + d_t*` as a block operator, the
//! even/odd pairing of the nonzero spectrum, and the low-lying eigenvalue
//! bookkeeping that yields the strong Morse inequalities.

use crate::spectral::{self, SpectralError, SpectrumRequest, WindowKernel};
use crate::sparse::SparseMatrix;
use crate::witten::{DeformedComplex, WittenError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SusyError {
    #[error("insufficient spectrum: {0}")]
    InsufficientSpectrum(String),
    #[error("supersymmetry identity violated: deviation {deviation:e} exceeds {tolerance:e}")]
    IdentityViolation { deviation: f64, tolerance: f64 },
    #[error("no spectral gap splits the low-lying cluster from the O(t) cluster: {0}")]
    NoGap(String),
    #[error("count vectors have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Witten(#[from] WittenError),
}

/// Per-degree ascending eigenvalue lists of a deformed Laplacian family,
/// tagged with the deformation parameter.
#[derive(Debug, Clone)]
pub struct GradedSpectrum {
    pub parameter: f64,
    pub degrees: Vec<Vec<f64>>,
}

impl GradedSpectrum {
    pub fn new(parameter: f64, degrees: Vec<Vec<f64>>) -> Self {
        Self { parameter, degrees }
    }

    /// Compute up to `k` smallest eigenvalues of every degree of a deformed
    /// complex (clamped to each degree's dimension).
    pub fn compute(
        deformed: &DeformedComplex,
        k: usize,
        seed: u64,
    ) -> Result<Self, SusyError> {
        let top = deformed.complex.top_dimension();
        let mut degrees = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let lap = deformed.laplacian(p)?;
            let kk = k.min(lap.dim());
            let req = SpectrumRequest::smallest(kk.min(lap.dim() - 1).max(1)).with_seed(seed);
            let res = spectral::bottom_spectrum(&lap, kk, &req)?;
            degrees.push(res.eigenvalues);
        }
        Ok(Self {
            parameter: deformed.t,
            degrees,
        })
    }

    fn max_value(&self) -> f64 {
        self.degrees
            .iter()
            .flat_map(|d| d.iter().copied())
            .fold(0.0f64, f64::max)
    }
}

/// The supercharge as a block operator together with its identity checks.
pub struct SuperchargeReport {
    /// Block matrix of Q_t in the star-orthonormalized graded basis.
    pub q: SparseMatrix,
    /// Offsets of each degree inside the graded index space.
    pub offsets: Vec<usize>,
    /// max |Q^2 - (+)Delta| relative to max |Delta|.
    pub square_deviation: f64,
    /// max |QP + PQ| relative to max |Q| (exactly zero by block structure).
    pub grading_deviation: f64,
}

const SUPERCHARGE_TOL: f64 = 1e-10;

/// Assemble `Q_t = d_t + d_t*` over all degrees and verify `Q_t^2 = Delta_t`
/// blockwise and `{Q_t, P} = 0`. Errors with [`SusyError::IdentityViolation`]
/// when the square deviates beyond 1e-10 relative (a broken adjoint
/// convention would do that).
pub fn supercharge(deformed: &DeformedComplex) -> Result<SuperchargeReport, SusyError> {
    let complex = deformed.complex;
    let stars = deformed.stars;
    let top = complex.top_dimension();
    let mut offsets = vec![0usize; top + 2];
    for p in 0..=top {
        offsets[p + 1] = offsets[p] + complex.simplex_count(p);
    }
    let total = offsets[top + 1];

    // Up-blocks B_p = W_{p+1}^{1/2} d_t^{(p)} W_p^{-1/2}; Q = sum B_p + B_p^T.
    let mut q = SparseMatrix::new(total, total);
    for p in 0..top {
        let w_hi: Vec<f64> = stars.weights(p + 1).iter().map(|w| w.sqrt()).collect();
        let w_lo: Vec<f64> = stars.weights(p).iter().map(|w| 1.0 / w.sqrt()).collect();
        let b = deformed
            .deformed_coboundary(p)?
            .scale_rows(&w_hi)
            .scale_cols(&w_lo);
        for (r, c, v) in b.iter_entries() {
            q.add(offsets[p + 1] + r, offsets[p] + c, v);
            q.add(offsets[p] + c, offsets[p + 1] + r, v);
        }
    }

    // Q^2 against the block-diagonal deformed Laplacians.
    let q2 = q.matmul(&q);
    let mut delta = SparseMatrix::new(total, total);
    for p in 0..=top {
        let lap = deformed.laplacian(p)?;
        for (r, c, v) in lap.entries() {
            delta.add(offsets[p] + r, offsets[p] + c, v);
        }
    }
    let scale = delta.max_abs().max(f64::MIN_POSITIVE);
    let mut diff = q2.clone();
    let mut neg_delta = SparseMatrix::new(total, total);
    for (r, c, v) in delta.iter_entries() {
        neg_delta.add(r, c, -v);
    }
    diff.add_matrix(&neg_delta);
    let square_deviation = diff.max_abs() / scale;

    // {Q, P} with P = (-1)^p: entries q_rc ((-1)^{deg r} + (-1)^{deg c});
    // Q only connects adjacent degrees, so every term cancels exactly.
    let degree_of = |idx: usize| -> usize {
        (0..=top)
            .find(|&p| idx < offsets[p + 1])
            .expect("index in range")
    };
    let mut grading_deviation = 0.0f64;
    let qscale = q.max_abs().max(f64::MIN_POSITIVE);
    for (r, c, v) in q.iter_entries() {
        let sr = if degree_of(r) % 2 == 0 { 1.0 } else { -1.0 };
        let sc = if degree_of(c) % 2 == 0 { 1.0 } else { -1.0 };
        grading_deviation = grading_deviation.max((v * (sr + sc)).abs());
    }
    grading_deviation /= qscale;

    if square_deviation > SUPERCHARGE_TOL {
        return Err(SusyError::IdentityViolation {
            deviation: square_deviation,
            tolerance: SUPERCHARGE_TOL,
        });
    }
    Ok(SuperchargeReport {
        q,
        offsets,
        square_deviation,
        grading_deviation,
    })
}

/// Outcome of matching the nonzero spectra of the even and odd sectors.
#[derive(Debug, Clone)]
pub struct PairingReport {
    pub zero_threshold: f64,
    /// (even value, odd value) pairs matched within `match_tol`, ascending.
    pub pairs: Vec<(f64, f64)>,
    pub max_relative_mismatch: f64,
    pub unmatched_even: Vec<f64>,
    pub unmatched_odd: Vec<f64>,
}

impl PairingReport {
    pub fn pass(&self) -> bool {
        self.unmatched_even.is_empty() && self.unmatched_odd.is_empty()
    }
}

/// Match the nonzero eigenvalues of even degrees against odd degrees by
/// greedy nearest pairing after sorting. Values beyond the shorter sector's
/// computed window are ignored (they have no computed counterpart).
pub fn pairing_check(
    spectra: &GradedSpectrum,
    zero_threshold: Option<f64>,
    match_tol: f64,
) -> Result<PairingReport, SusyError> {
    if spectra.degrees.len() < 2 {
        return Err(SusyError::InsufficientSpectrum(format!(
            "{} degree(s); even/odd pairing needs at least two",
            spectra.degrees.len()
        )));
    }
    let zero_threshold =
        zero_threshold.unwrap_or(spectral::REL_ZERO_CEILING * spectra.max_value());

    let collect = |parity: usize| -> Vec<f64> {
        let mut v: Vec<f64> = spectra
            .degrees
            .iter()
            .enumerate()
            .filter(|(p, _)| p % 2 == parity)
            .flat_map(|(_, eigs)| eigs.iter().copied())
            .filter(|&e| e > zero_threshold)
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let even = collect(0);
    let odd = collect(1);
    if even.is_empty() || odd.is_empty() {
        return Err(SusyError::InsufficientSpectrum(
            "a sector has no nonzero eigenvalues in the computed window".into(),
        ));
    }
    // Per-degree windows end where computation stopped; comparable range is
    // the smallest per-sector maximum.
    let window = even.last().unwrap().min(*odd.last().unwrap());

    let mut pairs = Vec::new();
    let mut unmatched_even = Vec::new();
    let mut unmatched_odd = Vec::new();
    let mut max_relative_mismatch = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < even.len() && j < odd.len() {
        let (a, b) = (even[i], odd[j]);
        if a > window && b > window {
            break;
        }
        let rel = (a - b).abs() / a.abs().max(b.abs());
        if rel <= match_tol {
            max_relative_mismatch = max_relative_mismatch.max(rel);
            pairs.push((a, b));
            i += 1;
            j += 1;
        } else if a < b {
            if a <= window {
                unmatched_even.push(a);
            }
            i += 1;
        } else {
            if b <= window {
                unmatched_odd.push(b);
            }
            j += 1;
        }
    }
    Ok(PairingReport {
        zero_threshold,
        pairs,
        max_relative_mismatch,
        unmatched_even,
        unmatched_odd,
    })
}

/// How the low-lying window is cut: eigenvalues in (kernel ceiling,
/// `coefficient * t`) count as low-lying. The default coefficient 1.0 is
/// half the first nonzero model eigenvalue (which is 2, in units of t).
#[derive(Debug, Clone, Copy)]
pub struct SplitRule {
    pub coefficient: f64,
}

impl Default for SplitRule {
    fn default() -> Self {
        Self { coefficient: 1.0 }
    }
}

/// Per-degree kernel and low-lying counts.
#[derive(Debug, Clone)]
pub struct LowLyingReport {
    pub t: f64,
    pub kernel: Vec<usize>,
    pub low_lying: Vec<usize>,
    pub window_top: f64,
}

impl LowLyingReport {
    pub fn total_even_low(&self) -> usize {
        self.low_lying.iter().step_by(2).sum()
    }

    pub fn total_odd_low(&self) -> usize {
        self.low_lying.iter().skip(1).step_by(2).sum()
    }
}

/// Split each degree's spectrum into kernel / low-lying / O(t) clusters.
///
/// Kernel counts use the relative-gap rule. Low-lying eigenvalues are the
/// nonzero ones below `rule.coefficient * t`. The split is only accepted
/// when a factor-10 gap separates the low-lying cluster from the first
/// eigenvalue above the window; otherwise [`SusyError::NoGap`].
pub fn low_lying(
    spectra: &GradedSpectrum,
    t: f64,
    rule: SplitRule,
) -> Result<LowLyingReport, SusyError> {
    if t <= 0.0 {
        return Err(SusyError::NoGap("deformation parameter must be positive".into()));
    }
    let window_top = rule.coefficient * t;
    let mut kernel = Vec::with_capacity(spectra.degrees.len());
    let mut low = Vec::with_capacity(spectra.degrees.len());
    for (p, eigs) in spectra.degrees.iter().enumerate() {
        if eigs.is_empty() {
            return Err(SusyError::InsufficientSpectrum(format!(
                "degree {p} has no computed eigenvalues"
            )));
        }
        let top_val = eigs.last().copied().unwrap();
        if top_val <= window_top {
            return Err(SusyError::InsufficientSpectrum(format!(
                "degree {p}: computed window tops out at {top_val:.3e}, below the split {window_top:.3e}"
            )));
        }
        let norm_hint = top_val.max(1e-300);
        let k = match spectral::kernel_count_in_window(
            eigs,
            spectral::DEFAULT_GAP_FACTOR,
            norm_hint,
        )? {
            WindowKernel::Count(c) => c,
            WindowKernel::AllZero => {
                return Err(SusyError::InsufficientSpectrum(format!(
                    "degree {p}: whole window numerically zero"
                )))
            }
        };
        let ceiling = spectral::REL_ZERO_CEILING * top_val;
        let in_window: Vec<f64> = eigs[k..]
            .iter()
            .copied()
            .filter(|&e| e <= window_top)
            .collect();
        let above = eigs[k..].iter().copied().find(|&e| e > window_top);
        // the nonzero-but-o(t) cluster must sit well below the O(t) cluster
        if let Some(theta_bottom) = above {
            let ll_top = in_window.last().copied().unwrap_or(ceiling).max(ceiling);
            if theta_bottom < 10.0 * ll_top {
                return Err(SusyError::NoGap(format!(
                    "degree {p}: ratio {:.2} between {theta_bottom:.3e} and {ll_top:.3e} is below 10 (t too small)",
                    theta_bottom / ll_top
                )));
            }
        }
        kernel.push(k);
        low.push(in_window.len());
    }
    Ok(LowLyingReport {
        t,
        kernel,
        low_lying: low,
        window_top,
    })
}

/// Strong Morse inequality verdicts reconstructed from low-lying counts:
/// `M_p = beta_p + l_p`, the alternating injectivity chains, the even/odd
/// balance of the low-lying totals, and the Morse Index equality.
#[derive(Debug, Clone)]
pub struct CountVerdicts {
    pub reconstructed_m: Vec<usize>,
    /// chain q: sum_{i<=q} (-1)^{q-i} l_i >= 0
    pub chains: Vec<bool>,
    pub even_excess: usize,
    pub odd_excess: usize,
    pub susy_balance: bool,
    pub index_theorem: bool,
    pub pass: bool,
}

pub fn strong_inequalities_from_counts(
    report: &LowLyingReport,
    beta: &[usize],
) -> Result<CountVerdicts, SusyError> {
    let l = &report.low_lying;
    if l.len() != beta.len() {
        return Err(SusyError::LengthMismatch(l.len(), beta.len()));
    }
    let n = l.len();
    let reconstructed_m: Vec<usize> = l.iter().zip(beta).map(|(a, b)| a + b).collect();
    // The chains of the injectivity argument are alternating partial sums of
    // M - beta = l.
    let mut chains = Vec::with_capacity(n);
    for q in 0..n {
        let mut acc = 0i64;
        for i in 0..=q {
            let sign = if (q - i) % 2 == 0 { 1 } else { -1 };
            acc += sign * l[i] as i64;
        }
        chains.push(acc >= 0);
    }
    let even_excess = report.total_even_low();
    let odd_excess = report.total_odd_low();
    let susy_balance = even_excess == odd_excess;
    // balance is exactly the Morse Index equality sum (-1)^p M_p = chi
    let index_theorem = susy_balance;
    let pass = chains.iter().all(|&c| c) && susy_balance;
    Ok(CountVerdicts {
        reconstructed_m,
        chains,
        even_excess,
        odd_excess,
        susy_balance,
        index_theorem,
        pass,
    })
}

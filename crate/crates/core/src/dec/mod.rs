//! Discrete exterior calculus on oriented simplicial complexes.
//!
//! A [`SimplicialComplex`] stores vertices and the ascending-ordered vertex
//! tuples of its simplices per degree; orientation is induced by the stored
//! order, so the integer coboundary matrices satisfy `d_{p+1} d_p = 0`
//! exactly over the integers. A [`HodgeStarSet`] supplies strictly positive
//! diagonal inner-product weights per degree; the codifferential is the
//! adjoint of `d` with respect to those weights and the Hodge Laplacian
//! `dd* + d*d` is assembled in the star-orthonormalized cochain basis, where
//! it is a genuinely symmetric positive semidefinite matrix with the same
//! spectrum.

mod catalog;
mod complex;
mod off;
mod stars;

pub use catalog::{generate, CatalogParams};
pub use complex::{ComplexMetric, SimplicialComplex};
pub use off::{load_off, parse_off};
pub use stars::HodgeStarSet;

use crate::sparse::SparseMatrix;
use crate::spectral::{self, SparseSymOperator, SpectralError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecError {
    #[error("degree {degree} out of range (top dimension {top})")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("complex invariant violated: {0}")]
    InvalidComplex(String),
    #[error("star weights invalid: {0}")]
    InvalidStars(String),
    #[error("complex is not closed: {0}")]
    NotClosed(String),
    #[error("OFF parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The codifferential `d*_p` mapping p-cochains to (p-1)-cochains: the
/// adjoint of `d_{p-1}` in the star inner products,
/// `d*_p = W_{p-1}^{-1} d_{p-1}^T W_p`.
pub fn codifferential(
    complex: &SimplicialComplex,
    stars: &HodgeStarSet,
    p: usize,
) -> Result<SparseMatrix, DecError> {
    if p == 0 || p > complex.top_dimension() {
        return Err(DecError::DegreeOutOfRange {
            degree: p,
            top: complex.top_dimension(),
        });
    }
    stars.check(complex)?;
    let d = complex.coboundary(p - 1)?.to_real();
    let inv_w_lower: Vec<f64> = stars.weights(p - 1).iter().map(|w| 1.0 / w).collect();
    Ok(d.transpose()
        .scale_rows(&inv_w_lower)
        .scale_cols(stars.weights(p)))
}

/// The Hodge Laplacian on p-cochains, expressed in the star-orthonormalized
/// basis: `L_p = W_p^{1/2} (d*d + dd*) W_p^{-1/2}`, a symmetric positive
/// semidefinite operator with the same spectrum as `d*d + dd*`.
pub fn hodge_laplacian(
    complex: &SimplicialComplex,
    stars: &HodgeStarSet,
    p: usize,
) -> Result<SparseSymOperator, DecError> {
    stars.check(complex)?;
    let top = complex.top_dimension();
    if p > top {
        return Err(DecError::DegreeOutOfRange { degree: p, top });
    }
    let up = if p < top {
        Some(complex.coboundary(p)?.to_real())
    } else {
        None
    };
    let down = if p > 0 {
        Some(complex.coboundary(p - 1)?.to_real())
    } else {
        None
    };
    let laplacian = symmetrized_laplacian(
        up.as_ref(),
        down.as_ref(),
        stars.weights(p),
        if p < top { Some(stars.weights(p + 1)) } else { None },
        if p > 0 { Some(stars.weights(p - 1)) } else { None },
    );
    Ok(SparseSymOperator::assemble(
        laplacian.triplets(),
        complex.simplex_count(p),
    )?)
}

/// Shared assembly for Hodge and Witten Laplacians: given the (possibly
/// deformed) coboundaries into and out of degree p, build
/// `W^{1/2}(d* d + d d*)W^{-1/2}` which is symmetric by construction:
/// up-term `B^T B` with `B = W_{p+1}^{1/2} d_p W_p^{-1/2}`, down-term `C C^T`
/// with `C = W_p^{1/2} d_{p-1} W_{p-1}^{-1/2}`.
pub(crate) fn symmetrized_laplacian(
    d_up: Option<&SparseMatrix>,
    d_down: Option<&SparseMatrix>,
    w_p: &[f64],
    w_up: Option<&[f64]>,
    w_down: Option<&[f64]>,
) -> SparseMatrix {
    let n = w_p.len();
    let sqrt_w: Vec<f64> = w_p.iter().map(|w| w.sqrt()).collect();
    let inv_sqrt_w: Vec<f64> = w_p.iter().map(|w| 1.0 / w.sqrt()).collect();
    let mut acc = SparseMatrix::new(n, n);
    if let (Some(d), Some(wu)) = (d_up, w_up) {
        let half_up: Vec<f64> = wu.iter().map(|w| w.sqrt()).collect();
        let b = d.scale_rows(&half_up).scale_cols(&inv_sqrt_w);
        acc.add_matrix(&b.transpose().matmul(&b));
    }
    if let (Some(d), Some(wd)) = (d_down, w_down) {
        let inv_half_down: Vec<f64> = wd.iter().map(|w| 1.0 / w.sqrt()).collect();
        let c = d.scale_rows(&sqrt_w).scale_cols(&inv_half_down);
        acc.add_matrix(&c.matmul(&c.transpose()));
    }
    acc
}

/// Betti number as the kernel dimension of the degree-p Hodge Laplacian.
/// Requires a closed complex; independent of the chosen stars.
pub fn betti(
    complex: &SimplicialComplex,
    stars: &HodgeStarSet,
    p: usize,
) -> Result<usize, DecError> {
    complex.check_closed()?;
    let lap = hodge_laplacian(complex, stars, p)?;
    Ok(spectral::kernel_dimension(
        &lap,
        spectral::DEFAULT_GAP_FACTOR,
    )?)
}

/// All Betti numbers from degree 0 to the top dimension.
pub fn betti_all(
    complex: &SimplicialComplex,
    stars: &HodgeStarSet,
) -> Result<Vec<usize>, DecError> {
    (0..=complex.top_dimension())
        .map(|p| betti(complex, stars, p))
        .collect()
}

/// Euler characteristic as the alternating sum of simplex counts.
pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    (0..=complex.top_dimension())
        .map(|p| {
            let c = complex.simplex_count(p) as i64;
            if p % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_cochain(n: usize, rng: &mut impl rand::Rng) -> Vec<f64> {
        (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()
    }

    #[test]
    fn triangle_coboundary_rows() {
        let complex = SimplicialComplex::from_simplices(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2]],
            ComplexMetric::Embedded,
        )
        .unwrap();
        let d0 = complex.coboundary(0).unwrap();
        assert_eq!(d0.rows, 3);
        assert_eq!(d0.cols, 3);
        // each row has exactly one +1 and one -1
        for r in 0..3 {
            let vals: Vec<i64> = (0..3).map(|c| d0.get(r, c)).collect();
            assert_eq!(vals.iter().filter(|&&v| v == 1).count(), 1);
            assert_eq!(vals.iter().filter(|&&v| v == -1).count(), 1);
        }
    }

    #[test]
    fn octahedron_d1_d0_is_zero() {
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let d0 = complex.coboundary(0).unwrap();
        let d1 = complex.coboundary(1).unwrap();
        assert_eq!(d1.matmul(&d0).nnz(), 0);
    }

    #[test]
    fn cycle_coboundary_rank() {
        let complex = generate("cycle", &CatalogParams::default().with_n(5)).unwrap();
        let d0 = complex.coboundary(0).unwrap();
        let mut m = crate::homology::IntMatrix::zeros(d0.rows, d0.cols);
        for (r, c, v) in d0.iter_entries() {
            m.set(r, c, v as i128);
        }
        assert_eq!(crate::homology::integer_rank(&m), 4);
    }

    #[test]
    fn adjointness_contract_octahedron() {
        use rand::SeedableRng;
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for stars in [
            HodgeStarSet::combinatorial(&complex),
            HodgeStarSet::circumcentric(&complex).unwrap(),
            HodgeStarSet::barycentric_dual(&complex).unwrap(),
        ] {
            for p in 1..=2usize {
                let d = complex.coboundary(p - 1).unwrap().to_real();
                let dstar = codifferential(&complex, &stars, p).unwrap();
                for _ in 0..100 {
                    let alpha = random_cochain(complex.simplex_count(p - 1), &mut rng);
                    let beta = random_cochain(complex.simplex_count(p), &mut rng);
                    let d_alpha = d.matvec(&alpha);
                    let dstar_beta = dstar.matvec(&beta);
                    let lhs: f64 = d_alpha
                        .iter()
                        .zip(&beta)
                        .zip(stars.weights(p))
                        .map(|((a, b), w)| w * a * b)
                        .sum();
                    let rhs: f64 = alpha
                        .iter()
                        .zip(&dstar_beta)
                        .zip(stars.weights(p - 1))
                        .map(|((a, b), w)| w * a * b)
                        .sum();
                    assert!(
                        (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0),
                        "adjointness violated at p={p}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn combinatorial_codifferential_is_transpose() {
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let d0 = complex.coboundary(0).unwrap().to_real();
        let dstar = codifferential(&complex, &stars, 1).unwrap();
        let dt = d0.transpose();
        for ((r1, c1, v1), (r2, c2, v2)) in dstar.iter_entries().zip(dt.iter_entries()) {
            assert_eq!((r1, c1), (r2, c2));
            assert!((v1 - v2).abs() < 1e-15);
        }
    }

    #[test]
    fn codifferential_kills_constants_through_d() {
        // d* d applied to a constant 0-cochain is zero for any stars.
        let complex = generate("torus_grid", &CatalogParams::default().with_n(4)).unwrap();
        let stars = HodgeStarSet::barycentric_dual(&complex).unwrap();
        let d0 = complex.coboundary(0).unwrap().to_real();
        let dstar = codifferential(&complex, &stars, 1).unwrap();
        let ones = vec![1.0; complex.simplex_count(0)];
        let out = dstar.matvec(&d0.matvec(&ones));
        assert!(out.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn cycle_laplacian_kernel_is_constants() {
        let complex = generate("cycle", &CatalogParams::default().with_n(12)).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let lap = hodge_laplacian(&complex, &stars, 0).unwrap();
        assert_eq!(
            spectral::kernel_dimension(&lap, spectral::DEFAULT_GAP_FACTOR).unwrap(),
            1
        );
    }

    #[test]
    fn octahedron_one_forms_have_no_kernel() {
        let complex = generate("octahedron", &CatalogParams::default()).unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        let lap = hodge_laplacian(&complex, &stars, 1).unwrap();
        assert_eq!(
            spectral::kernel_dimension(&lap, spectral::DEFAULT_GAP_FACTOR).unwrap(),
            0
        );
    }

    #[test]
    fn euler_characteristics() {
        let oct = generate("octahedron", &CatalogParams::default()).unwrap();
        assert_eq!(euler_characteristic(&oct), 2);
        let torus = generate("torus_grid", &CatalogParams::default().with_n(4)).unwrap();
        assert_eq!(euler_characteristic(&torus), 0);
        let cycle = generate("cycle", &CatalogParams::default().with_n(7)).unwrap();
        assert_eq!(euler_characteristic(&cycle), 0);
    }

    #[test]
    fn betti_requires_closed_complex() {
        let complex = SimplicialComplex::from_simplices(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2]],
            ComplexMetric::Embedded,
        )
        .unwrap();
        let stars = HodgeStarSet::combinatorial(&complex);
        assert!(matches!(
            betti(&complex, &stars, 0),
            Err(DecError::NotClosed(_))
        ));
    }
}

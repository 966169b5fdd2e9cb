//! Spectral Morse theory toolkit.
//!
//! Builds discrete Hodge and Witten-deformed Laplacians on triangulated
//! surfaces and flat periodic grids, computes their low spectra, and checks
//! the Morse inequalities, the supersymmetric spectrum pairing, and the
//! semiclassical eigenvalue limits that connect them.
//!
//! Module map:
//!
//! - [`spectral`] — sparse symmetric operators and the low-end eigensolver.
//! - [`dec`] — oriented simplicial complexes, coboundaries, Hodge stars,
//!   Hodge Laplacians, Betti numbers.
//! - [`homology`] — integer homology ranks via Smith normal form; the
//!   independent cross-check for the spectral Betti numbers.
//! - [`morse`] — analytic Morse functions, critical point detection, Morse
//!   counts, and the weak/strong/polynomial inequalities.
//! - [`witten`] — the deformed coboundary `d_t = e^{-tf} d e^{tf}` on
//!   cochains, fermionic commutator matrices, and flat-torus grid
//!   realizations of the deformed Laplacian.
//! - [`susy`] — supercharge block operators, even/odd spectrum pairing, and
//!   low-lying eigenvalue bookkeeping.
//! - [`semiclassical`] — harmonic oscillator model spectra at critical
//!   points, Schrödinger grid discretizations, partitions of unity, and the
//!   IMS localization identity.

pub mod dec;
pub mod homology;
pub mod morse;
pub mod semiclassical;
pub mod sparse;
pub mod spectral;
pub mod susy;
pub mod witten;

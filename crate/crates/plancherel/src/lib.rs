//! Row statistics of Plancherel-random Young diagrams, by every route that
//! connects them.
//!
//! The length of the first row of an RSK shape is the longest increasing
//! subsequence of the underlying permutation; the first two rows together are
//! Greene's longest 2-increasing subsequence.  After Poissonization the
//! distribution functions of the first and second row lengths turn into
//! Toeplitz determinants of the weight `e^{2√λ cos θ}`, Fredholm determinants
//! of an integrable kernel on the unit circle, and, in the edge scaling limit,
//! the Tracy-Widom laws of the largest and second-largest GUE eigenvalues.
//!
//! Each module computes one of these descriptions:
//!
//! * [`combinat`] — exact partition enumeration, hook-length and
//!   determinant dimension formulas, finite-N row-length CDFs in big-rational
//!   arithmetic.
//! * [`rsk`] — row insertion, Greene oracles, and seeded Monte Carlo
//!   sampling of the scaled row statistics.
//! * [`detform`] — the Poissonized generating functions via truncated
//!   series, Toeplitz and Hankel determinants, and orthogonal polynomials on
//!   the circle.
//! * [`fredholm`] — Nyström discretization of the kernel, determinants,
//!   resolvent traces, spectra, and the determinant identities tying them to
//!   the Toeplitz side.
//! * [`painleve`] — the Painlevé II family, the Tracy-Widom CDF `F(x;t)`,
//!   the second-row limit law `F⁽²⁾`, and their moments.
//!
//! The point of having many routes is that they check each other: every pair
//! of descriptions overlaps on a grid of `(n, λ)` where both are cheap, and
//! the crate's test suite drives those comparisons to tight tolerances.

pub mod combinat;
pub mod detform;
pub mod fredholm;
pub mod painleve;
pub mod rsk;

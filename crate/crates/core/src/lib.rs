//! Spherical Fourier-Bessel (SFB) band-limited spaces in `R^d`, `d >= 2`.
//!
//! The crate evaluates the reproducing kernel of the space spanned by
//! `r^{(2-d)/2} J_{l+(d-2)/2}(k r) Y_{l,m}(xi)` with `l <= L` and `k <= K`,
//! the profile functions `U`, `U^(d)` and `W^(d)` that its `K^{-d}`-scaled
//! diagonal converges to when `L = kappa * K`, and the spectrum of the
//! spatiospectral concentration operator on rotationally symmetric domains.
//!
//! Module map:
//!
//! * [`bessel`]: `J_v` for real `v >= 0`, derivatives, zeros and the
//!   band-limited radial (Lommel) integral.
//! * [`harmonic`]: harmonic-space dimensions, normalized Gegenbauer
//!   polynomials and sphere volumes.
//! * [`quadrature`]: Gauss-Legendre rules and adaptive Gauss-Kronrod.
//! * [`profiles`]: `U`, `U^(d)`, `W^(d)`, dilations and the summation
//!   functionals that link discrete degree sums to integrals.
//! * [`kernel`]: kernel evaluation on and off the diagonal, the Paley-Wiener
//!   comparison kernel and the near-diagonal ratio explorer.
//! * [`ballbasis`]: Dirichlet and Neumann SFB bases on the unit ball.
//! * [`concentration`]: Nystrom discretization of the concentration operator,
//!   spectra, Shannon number and eigenvalue-distribution statistics.
//! * [`acceptance`]: the end-to-end verification experiments.

#![allow(clippy::excessive_precision)]

pub mod acceptance;
pub mod ballbasis;
pub mod bessel;
pub mod concentration;
mod error;
pub mod harmonic;
pub mod kernel;
pub mod profiles;
pub mod quadrature;
mod sum;

pub use error::{Error, Result};

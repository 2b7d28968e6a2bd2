//! Numerical laboratory for zeta cycles.
//!
//! The crate realizes the scale-invariant Riemann sum
//! `E(f)(u) = u^{1/2} sum_{n>0} f(nu)`, its periodization over circles of
//! length `L`, and the Fourier analysis that exposes the factor
//! `zeta(1/2 - 2 pi i n / L)` in every coefficient. On top of that sit
//! zeta-cycle detection and scanning, the Laplacian `H(1+H)` and its
//! quotient spectrum, and the global-section / jet machinery over the
//! scaling site.
//!
//! Module map:
//!
//! - [`specfun`]: complex gamma, zeta on the critical line, Riemann–Siegel,
//!   zero finding and jets.
//! - [`schwartz`]: Gaussian-polynomial test functions and their Mellin
//!   transforms.
//! - [`operators`]: `E`, the trace identity, circle Fourier coefficients,
//!   coverings and the scaling action.
//! - [`cycles`]: detection, scans and covering stability.
//! - [`laplacian`]: eigenvalues `(rho - 1/2)^2 - 1/4` and the negativity
//!   predicate.
//! - [`sheaf`]: global sections, Whitney ideal membership and jets.
//! - [`zero_cache`]: the on-disk CSV cache of zeta zeros.

pub mod cycles;
pub mod error;
pub mod laplacian;
pub mod operators;
pub mod quadrature;
pub mod schwartz;
pub mod sheaf;
pub mod specfun;
pub mod zero_cache;

mod format;

pub use num_complex::Complex64;

pub use cycles::{CycleReport, DetectionMatrix, Dip, ScanConfig, ScanResult};
pub use error::{Error, Result};
pub use laplacian::QuotientEigenvalue;
pub use operators::{CircleFunction, TailBound};
pub use schwartz::{GaussianPoly, MellinValue, TestFunction};
pub use sheaf::{GlobalSection, IdealGenerator, JetVector};
pub use specfun::{EvalConfig, ZetaZero};

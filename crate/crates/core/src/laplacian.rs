//! The Laplacian `Δ = H(1+H)` with `H = x d/dx`.
//!
//! Under the Mellin transform `Δ` becomes multiplication by
//! `(iz - 1/2)(iz + 1/2) = -(z² + 1/4)`; in the variable `ρ = 1/2 + iz`
//! this is `-ρ(1-ρ) = (ρ - 1/2)² - 1/4`. Over the zeros of zeta the quotient
//! spectrum is `{(ρ - 1/2)² - 1/4}`, which is real and non-positive
//! exactly when `ρ ∈ [0, 1] ∪ (1/2 + iR)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::schwartz::{GaussianPoly, TestFunction};
use crate::specfun::ZetaZero;

/// Tolerance on the imaginary part for an eigenvalue to count as real.
pub const REAL_TOL: f64 = 1e-12;

/// An eigenvalue of `Δ` on the quotient attached to a zero `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientEigenvalue {
    pub rho: Complex64,
    pub value: Complex64,
    pub multiplicity: u32,
}

impl QuotientEigenvalue {
    pub fn new(rho: Complex64, multiplicity: u32) -> Self {
        Self {
            rho,
            value: delta_eigenvalue(rho),
            multiplicity,
        }
    }

    pub fn from_zero(zero: &ZetaZero) -> Self {
        Self::new(Complex64::new(0.5, zero.ordinate), zero.multiplicity)
    }

    /// Real to [`REAL_TOL`] and strictly negative.
    pub fn negativity_ok(&self) -> bool {
        self.value.im.abs() <= REAL_TOL && self.value.re < 0.0
    }
}

/// `(ρ - 1/2)² - 1/4`.
pub fn delta_eigenvalue(rho: Complex64) -> Complex64 {
    let shifted = rho - 0.5;
    shifted * shifted - 0.25
}

/// `-z(1 - z)`.
pub fn conjugated_delta_multiplier(z: Complex64) -> Complex64 {
    -z * (Complex64::new(1.0, 0.0) - z)
}

/// The eigenvalue of `ρ` is real (to [`REAL_TOL`]) and non-positive.
pub fn rh_predicate(rho: Complex64) -> bool {
    let v = delta_eigenvalue(rho);
    v.im.abs() <= REAL_TOL && v.re <= 0.0
}

/// `ρ ∈ [0, 1] ∪ (1/2 + iR)`, decided from the coordinates.
pub fn in_critical_set(rho: Complex64) -> bool {
    rho.re == 0.5 || (rho.im == 0.0 && (0.0..=1.0).contains(&rho.re))
}

/// Result of [`delta_on_test_function`].
#[derive(Clone, Debug)]
pub struct DeltaImage {
    pub function: TestFunction,
    /// Largest relative gap between `psi_{Δg}(s)` and `-(s² + 1/4) psi_g(s)`
    /// over the sample points.
    pub max_mellin_residual: f64,
}

/// Sample points `s = -9.5, -8.5, ..., 9.5` for the Mellin check.
pub fn mellin_sample_points() -> Vec<f64> {
    (0..20).map(|i| -9.5 + i as f64).collect()
}

/// Applies `H(1+H)` symbolically and compares both sides of the Mellin
/// conjugation at the sample points.
pub fn delta_on_test_function(g: &TestFunction) -> Result<DeltaImage> {
    let poly = g.poly().ok_or_else(|| {
        Error::UnsupportedRepresentation(format!(
            "{} has no Gaussian-polynomial representation",
            g.label()
        ))
    })?;
    let image = poly.apply_delta();
    let residual = mellin_residual(poly, &image)?;
    Ok(DeltaImage {
        function: TestFunction::from_poly(format!("delta({})", g.label()), image),
        max_mellin_residual: residual,
    })
}

fn mellin_residual(g: &GaussianPoly, image: &GaussianPoly) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in mellin_sample_points() {
        let z = Complex64::new(s, 0.0);
        // (iz - 1/2)(iz + 1/2) per factor of H and 1 + H
        let i = Complex64::i();
        let multiplier = (i * z - 0.5) * (i * z + 0.5);
        let lhs = image.mellin_closed(z)?;
        let rhs = multiplier * g.mellin_closed(z)?;
        let scale = lhs.norm().max(rhs.norm());
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}

/// One eigenvalue per cached zero.
pub fn negativity_report(zeros: &[ZetaZero]) -> Vec<QuotientEigenvalue> {
    zeros.iter().map(QuotientEigenvalue::from_zero).collect()
}

/// CSV `ordinate,eigenvalue,negativity_ok`.
pub fn report_csv(report: &[QuotientEigenvalue]) -> String {
    let mut out = String::from("ordinate,eigenvalue,negativity_ok\n");
    for q in report {
        out.push_str(&format!(
            "{},{},{}\n",
            sig15(q.rho.im),
            sig15(q.value.re),
            q.negativity_ok()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwartz::{gaussian_seed, make_test_function};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(delta_eigenvalue(c(0.5, 0.0)), c(-0.25, 0.0));
        assert_eq!(delta_eigenvalue(c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(delta_eigenvalue(c(1.0, 0.0)), c(0.0, 0.0));
        let t = 14.134725141734693;
        let v = delta_eigenvalue(c(0.5, t));
        assert!((v.re + (t * t + 0.25)).abs() < 1e-12 && v.im == 0.0);
        assert!((v.re + 200.0404).abs() < 1e-3);
    }

    #[test]
    fn predicate_examples() {
        assert!(rh_predicate(c(0.5, 21.022)));
        assert!(!rh_predicate(c(0.6, 14.0)));
        let v = delta_eigenvalue(c(0.6, 14.0));
        assert!((v - c(-196.24, 2.8)).norm() < 1e-12);
        assert!(rh_predicate(c(0.7, 0.0)));
        assert!(!rh_predicate(c(1.2, 0.0)));
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(conjugated_delta_multiplier(c(0.5, 0.0)), c(-0.25, 0.0));
        assert_eq!(conjugated_delta_multiplier(c(0.0, 0.0)).norm(), 0.0);
    }

    #[test]
    fn delta_image_matches_family() {
        let g = TestFunction::from_poly("g0", gaussian_seed(0).unwrap());
        let img = delta_on_test_function(&g).unwrap();
        assert!(img.max_mellin_residual < 1e-8);
        let f0 = make_test_function(0).unwrap();
        assert_eq!(img.function.poly(), f0.poly());
        let z = delta_on_test_function(&TestFunction::zero()).unwrap();
        assert!(z.function.is_zero());
    }

    #[test]
    fn csv_shape() {
        let z = ZetaZero {
            ordinate: 14.134725141734693,
            multiplicity: 1,
            abs_error: 1e-10,
        };
        let csv = report_csv(&negativity_report(&[z]));
        assert_eq!(
            csv,
            "ordinate,eigenvalue,negativity_ok\n14.1347251417347,-200.040454832387,true\n"
        );
    }
}

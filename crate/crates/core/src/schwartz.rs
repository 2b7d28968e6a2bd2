//! Admissible test functions and their Mellin transforms.
//!
//! Test functions are even Gaussian-polynomials
//! `f(x) = e^{-a x²} sum_j c_j x^{2j}`. That representation is closed under
//! `H = x d/dx`, under the Fourier transform, and has Mellin transforms in
//! closed form, so the vanishing conditions `f(0) = 0` and `∫ f = 0` hold
//! symbolically for every member built as `H(1+H) g`.
//!
//! `psi(z) = ∫_0^∞ f(u) u^{1/2 - iz} du/u` is holomorphic for
//! `Im z > -1/2`. Under the transform the lifted generator `H + 1/2`
//! (which is `u d/du` after the unitary `w(f) = u^{1/2} f`) multiplies
//! `psi` by `iz`, so `H` acts by `iz - 1/2` and `1 + H` by `iz + 1/2`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::specfun::{gamma_complex, ln_gamma};

/// Largest seed index accepted by [`gaussian_seed`] and [`make_test_function`].
pub const MAX_SEED: usize = 8;

/// Smallest admissible distance of `Im z` above `-1/2`.
pub const MELLIN_MARGIN: f64 = 0.01;

/// Even Gaussian-polynomial `e^{-scale x²} sum_j coeffs[j] x^{2j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPoly {
    pub coeffs: Vec<f64>,
    pub scale: f64,
}

impl GaussianPoly {
    pub fn new(coeffs: Vec<f64>, scale: f64) -> Self {
        assert!(scale > 0.0, "Gaussian scale must be positive");
        let mut p = Self { coeffs, scale };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self {
            coeffs: Vec::new(),
            scale: PI,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = x * x;
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c);
        poly * (-self.scale * y).exp()
    }

    /// `H = x d/dx`:
    /// `x^{2j} e^{-a x²} -> 2j x^{2j} e^{-a x²} - 2a x^{2j+2} e^{-a x²}`.
    pub fn apply_h(&self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[j] += 2.0 * j as f64 * c;
            out[j + 1] -= 2.0 * self.scale * c;
        }
        Self::new(out, self.scale)
    }

    pub fn apply_one_plus_h(&self) -> Self {
        let mut h = self.apply_h();
        for (o, &c) in h.coeffs.iter_mut().zip(&self.coeffs) {
            *o += c;
        }
        h.trim();
        h
    }

    /// The Laplacian `H(1+H)`.
    pub fn apply_delta(&self) -> Self {
        self.apply_one_plus_h().apply_h()
    }

    /// `H + 1/2`, the generator conjugate to multiplication by `iz`.
    pub fn apply_h_lifted(&self) -> Self {
        let mut h = self.apply_h();
        for (o, &c) in h.coeffs.iter_mut().zip(&self.coeffs) {
            *o += 0.5 * c;
        }
        h.trim();
        h
    }

    /// Closed-form `psi(z)`: each monomial contributes
    /// `(1/2) a^{-w} Γ(w)` with `w = j + 1/4 - iz/2`.
    pub fn mellin_closed(&self, z: Complex64) -> Result<Complex64> {
        check_mellin_domain(z)?;
        let ln_a = self.scale.ln();
        let mut total = Complex64::new(0.0, 0.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let w = Complex64::new(j as f64 + 0.25, 0.0) - Complex64::i() * z * 0.5;
            total += (ln_gamma(w)? - w * ln_a).exp() * (0.5 * c);
        }
        Ok(total)
    }

    /// `∫_R f(x) dx`, symbolically: `sum_j c_j Γ(j + 1/2) a^{-j-1/2}`.
    pub fn integral(&self) -> f64 {
        let mut gamma_half = PI.sqrt(); // Γ(1/2)
        let mut total = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                gamma_half *= j as f64 - 0.5;
            }
            total += c * gamma_half / self.scale.powf(j as f64 + 0.5);
        }
        total
    }

    /// Fourier transform `∫ f(x) e^{-2πixξ} dx`, again a Gaussian-polynomial.
    ///
    /// `x^{2j} e^{-a x²}` maps to `(-1/(4π²))^j d^{2j}/dξ^{2j}` of
    /// `sqrt(π/a) e^{-π² ξ² / a}`.
    pub fn fourier_transform(&self) -> Self {
        let b = PI * PI / self.scale;
        let norm = (PI / self.scale).sqrt();
        // full (not only even) polynomial in ξ, differentiated repeatedly
        let mut current = vec![norm];
        let mut out: Vec<f64> = Vec::new();
        let max_j = self.coeffs.len();
        for j in 0..max_j {
            if j > 0 {
                for _ in 0..2 {
                    current = differentiate_gaussian(&current, b);
                }
            }
            let factor = (-1.0 / (4.0 * PI * PI)).powi(j as i32) * self.coeffs[j];
            if out.len() < current.len() {
                out.resize(current.len(), 0.0);
            }
            for (o, &c) in out.iter_mut().zip(&current) {
                *o += factor * c;
            }
        }
        let even: Vec<f64> = out.iter().step_by(2).copied().collect();
        debug_assert!(out.iter().skip(1).step_by(2).all(|c| c.abs() < 1e-9 * (1.0 + even.iter().fold(0.0f64, |m, v| m.max(v.abs())))));
        Self::new(even, b)
    }

    /// Taylor coefficients of `f` at 0 in powers of `x²`, up to `x^{2 terms - 2}`.
    pub fn taylor_at_zero(&self, terms: usize) -> Vec<f64> {
        // e^{-a y} = sum_m (-a)^m y^m / m!
        let mut exp_series = Vec::with_capacity(terms);
        let mut t = 1.0;
        for m in 0..terms {
            if m > 0 {
                t *= -self.scale / m as f64;
            }
            exp_series.push(t);
        }
        (0..terms)
            .map(|m| {
                (0..=m)
                    .filter(|&j| j < self.coeffs.len())
                    .map(|j| self.coeffs[j] * exp_series[m - j])
                    .sum()
            })
            .collect()
    }

    /// Certificate `|f(x)| <= C e^{-(a/2) x²}` with
    /// `C = sum_j |c_j| (2j / (a e))^j`.
    pub fn decay_bound(&self) -> DecayBound {
        let half = 0.5 * self.scale;
        let constant = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == 0 {
                    c.abs()
                } else {
                    let jf = j as f64;
                    c.abs() * (jf / (half * std::f64::consts::E)).powf(jf)
                }
            })
            .sum();
        DecayBound {
            constant,
            scale: half,
        }
    }
}

/// `(P e^{-b ξ²})' = (P' - 2bξ P) e^{-b ξ²}` on a full polynomial.
fn differentiate_gaussian(p: &[f64], b: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        if k > 0 {
            out[k - 1] += k as f64 * c;
        }
        out[k + 1] -= 2.0 * b * c;
    }
    out
}

/// `|f(x)| <= constant * e^{-scale x²}` for all real `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayBound {
    pub constant: f64,
    pub scale: f64,
}

impl DecayBound {
    pub fn at(&self, x: f64) -> f64 {
        self.constant * (-self.scale * x * x).exp()
    }
}

/// Closed-form Mellin transforms attached to a test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormPsi {
    /// Sum of Γ terms read off the Gaussian-polynomial coefficients.
    Polynomial,
    /// `-(z² + 1/4) psi_{g_k}(z)` for `f_k = H(1+H) g_k`.
    Seeded { k: usize },
    /// `(1/4) π^{-1/4 + iz/2} (-1 - 2iz) Γ(1/4 - iz/2)` for
    /// `f(x) = e^{-πx²}(2πx² - 1)`.
    GaussianExample,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An even real test function with a decay certificate and, usually, a
/// closed-form Mellin transform.
#[derive(Clone)]
pub struct TestFunction {
    label: String,
    evaluator: Evaluator,
    poly: Option<GaussianPoly>,
    closed_form: Option<ClosedFormPsi>,
    decay: DecayBound,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("poly", &self.poly)
            .field("closed_form", &self.closed_form)
            .field("decay", &self.decay)
            .finish()
    }
}

impl TestFunction {
    pub fn from_poly(label: impl Into<String>, poly: GaussianPoly) -> Self {
        let decay = poly.decay_bound();
        let p = poly.clone();
        Self {
            label: label.into(),
            evaluator: Arc::new(move |x| p.eval(x)),
            poly: Some(poly),
            closed_form: Some(ClosedFormPsi::Polynomial),
            decay,
        }
    }

    /// A test function known only through its values. Operators that need
    /// the symbolic representation report `UnsupportedRepresentation`.
    pub fn from_fn<F>(label: impl Into<String>, decay: DecayBound, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            evaluator: Arc::new(f),
            poly: None,
            closed_form: None,
            decay,
        }
    }

    /// `f(x) = e^{-πx²}(2πx² - 1)`: `∫ f = 0` but `f(0) = -1`, so it lies in
    /// the range of `1 + H` rather than of `H(1+H)`.
    pub fn gaussian_example() -> Self {
        let mut f = Self::from_poly("gaussian_example", GaussianPoly::new(vec![-1.0, 2.0 * PI], PI));
        f.closed_form = Some(ClosedFormPsi::GaussianExample);
        f
    }

    pub fn zero() -> Self {
        Self::from_poly("zero", GaussianPoly::zero())
    }

    /// Drops the closed form so that [`mellin_psi`] falls back to quadrature.
    pub fn without_closed_form(mut self) -> Self {
        self.closed_form = None;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> Option<&GaussianPoly> {
        self.poly.as_ref()
    }

    pub fn decay(&self) -> DecayBound {
        self.decay
    }

    pub fn closed_form(&self) -> Option<ClosedFormPsi> {
        self.closed_form
    }

    pub fn is_zero(&self) -> bool {
        self.poly.as_ref().is_some_and(GaussianPoly::is_zero)
    }

    /// `f(x)`, evaluated at `|x|` so evenness is exact.
    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x.abs())
    }

    /// Closed-form `psi(z)` if one is attached.
    pub fn psi_closed(&self, z: Complex64) -> Option<Result<Complex64>> {
        let form = self.closed_form?;
        Some(match form {
            ClosedFormPsi::Polynomial => self.poly.as_ref()?.mellin_closed(z),
            ClosedFormPsi::Seeded { k } => seeded_psi(k, z),
            ClosedFormPsi::GaussianExample => gaussian_example_psi(z),
        })
    }

    /// `f(0)` and `∫ f`, the two functionals that define the admissible class.
    pub fn vanishing_residuals(&self) -> (f64, f64) {
        let at_zero = self.eval(0.0);
        let integral = 2.0 * quadrature::integrate(|x| self.eval(x), 0.0, 12.0, 48);
        (at_zero, integral)
    }

    /// Membership in the admissible class: `|f(0)| <= 1e-12`,
    /// `|∫ f| <= 1e-10`, and the decay certificate holds at 1, 2, 5, 10.
    pub fn check_membership(&self) -> Result<()> {
        let (at_zero, integral) = self.vanishing_residuals();
        if at_zero.abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "{}: f(0) = {at_zero:e} is not zero",
                self.label
            )));
        }
        if integral.abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "{}: integral {integral:e} is not zero",
                self.label
            )));
        }
        self.check_decay()
    }

    pub fn check_decay(&self) -> Result<()> {
        for x in [1.0, 2.0, 5.0, 10.0] {
            let v = self.eval(x).abs();
            if v > self.decay.at(x) * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "{}: decay certificate fails at x = {x}",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// `g_k(x) = x^{2k} e^{-πx²}`.
pub fn gaussian_seed(k: usize) -> Result<GaussianPoly> {
    if k > MAX_SEED {
        return Err(Error::InvalidArgument(format!(
            "seed index {k} exceeds {MAX_SEED}"
        )));
    }
    let mut coeffs = vec![0.0; k + 1];
    coeffs[k] = 1.0;
    Ok(GaussianPoly::new(coeffs, PI))
}

pub fn apply_h(g: &TestFunction) -> Result<GaussianPoly> {
    g.poly()
        .map(GaussianPoly::apply_h)
        .ok_or_else(|| unsupported(g))
}

pub fn apply_one_plus_h(g: &TestFunction) -> Result<GaussianPoly> {
    g.poly()
        .map(GaussianPoly::apply_one_plus_h)
        .ok_or_else(|| unsupported(g))
}

fn unsupported(g: &TestFunction) -> Error {
    Error::UnsupportedRepresentation(format!(
        "{} has no Gaussian-polynomial representation",
        g.label()
    ))
}

/// `f_k = H(1+H) g_k`, with the seeded closed form for `psi` attached.
pub fn make_test_function(k: usize) -> Result<TestFunction> {
    let seed = gaussian_seed(k)?;
    let mut f = TestFunction::from_poly(format!("f_{k}"), seed.apply_delta());
    f.closed_form = Some(ClosedFormPsi::Seeded { k });
    Ok(f)
}

/// The default detection family `{f_0, f_1, f_2}`.
pub fn default_family() -> Vec<TestFunction> {
    family(&[0, 1, 2]).expect("seeds 0..=2 are valid")
}

pub fn family(ks: &[usize]) -> Result<Vec<TestFunction>> {
    ks.iter().map(|&k| make_test_function(k)).collect()
}

/// Entry of the family manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: String,
    pub k: usize,
    pub psi_closed_form: bool,
}

/// Family manifest: `[{label, k, psi_closed_form}, ...]` as JSON.
pub fn family_manifest(ks: &[usize], fns: &[TestFunction]) -> String {
    let entries: Vec<ManifestEntry> = ks
        .iter()
        .zip(fns)
        .map(|(&k, f)| ManifestEntry {
            label: f.label().to_string(),
            k,
            psi_closed_form: f.closed_form().is_some(),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("manifest serializes")
}

fn check_mellin_domain(z: Complex64) -> Result<()> {
    let bound = -0.5 + MELLIN_MARGIN;
    if !(z.im > bound) {
        return Err(Error::MellinDomain { im: z.im, bound });
    }
    Ok(())
}

/// `psi_{g_k}(z) = (1/2) π^{-w} Γ(w)`, `w = k + 1/4 - iz/2`.
fn seed_psi(k: usize, z: Complex64) -> Result<Complex64> {
    let w = Complex64::new(k as f64 + 0.25, 0.0) - Complex64::i() * z * 0.5;
    Ok((ln_gamma(w)? - w * PI.ln()).exp() * 0.5)
}

fn seeded_psi(k: usize, z: Complex64) -> Result<Complex64> {
    check_mellin_domain(z)?;
    // (iz - 1/2)(iz + 1/2) = -(z² + 1/4)
    let multiplier = -(z * z + 0.25);
    Ok(multiplier * seed_psi(k, z)?)
}

fn gaussian_example_psi(z: Complex64) -> Result<Complex64> {
    check_mellin_domain(z)?;
    let i = Complex64::i();
    let pi_pow = (Complex64::new(-0.25, 0.0) + i * z * 0.5) * PI.ln();
    let gamma = gamma_complex(Complex64::new(0.25, 0.0) - i * z * 0.5)?;
    Ok(pi_pow.exp() * (Complex64::new(-1.0, 0.0) - i * z * 2.0) * gamma * 0.25)
}

/// A value of `psi` with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinValue {
    pub z: Complex64,
    pub psi: Complex64,
    pub abs_error: f64,
}

/// `psi(z)`: the attached closed form when there is one, quadrature otherwise.
pub fn mellin_psi(f: &TestFunction, z: Complex64) -> Result<MellinValue> {
    check_mellin_domain(z)?;
    if let Some(psi) = f.psi_closed(z) {
        let psi = psi?;
        return Ok(MellinValue {
            z,
            psi,
            abs_error: 1e-13 * psi.norm(),
        });
    }
    mellin_psi_quadrature(f, z)
}

const LOG_WINDOW: f64 = 30.0;

/// `psi(z)` by composite Gauss–Legendre on `u = e^v`, `v ∈ [-30, 30]`.
///
/// The error estimate is the change under panel doubling. When a
/// polynomial representation is available the contribution of
/// `v < -30` is added from the Taylor expansion at 0, which matters
/// when `f(0) != 0`.
pub fn mellin_psi_quadrature(f: &TestFunction, z: Complex64) -> Result<MellinValue> {
    check_mellin_domain(z)?;
    let exponent = Complex64::new(0.5, 0.0) - Complex64::i() * z;
    let integrand = |v: f64| (exponent * v).exp() * f.eval(v.exp());
    let width = (0.5f64).min(4.0 / z.norm().max(1e-300));
    let panels = ((2.0 * LOG_WINDOW) / width).ceil() as usize;
    let coarse: Complex64 = quadrature::integrate(integrand, -LOG_WINDOW, LOG_WINDOW, panels);
    let fine: Complex64 = quadrature::integrate(integrand, -LOG_WINDOW, LOG_WINDOW, 2 * panels);
    let mut psi = fine;
    let mut tail_error = 0.0;
    if let Some(poly) = f.poly() {
        // ∫_{-∞}^{-W} e^{v(2m + s)} dv = e^{-W(2m + s)} / (2m + s)
        for (m, d) in poly.taylor_at_zero(3).into_iter().enumerate() {
            let e = exponent + 2.0 * m as f64;
            psi += (-e * LOG_WINDOW).exp() / e * d;
        }
    } else {
        tail_error = f.decay.constant * (-0.5 * LOG_WINDOW).exp();
    }
    Ok(MellinValue {
        z,
        psi,
        abs_error: (fine - coarse).norm() + tail_error,
    })
}

//! Summation maps, circle Fourier analysis, coverings and scaling.
//!
//! - `E(f)(u) = u^{1/2} sum_{n>0} f(nu)` and the trace `Tr(f)(u) = 2 sum f(nu)`.
//! - `Σ_μ` periodizes `E(f)` over `μ^Z` with `μ = e^L`, producing a function
//!   on the circle `C_μ` of length `L` (in `log u`).
//! - Fourier coefficients on `C_μ` use the kernel
//!   `c_n = L^{-1/2} ∫_{C_μ} ξ(u) u^{-2πin/L} d*u`, so that
//!   `c_n(Σ_μ E f) = L^{-1/2} zeta(1/2 - 2πin/L) psi_f(2πn/L)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schwartz::{mellin_psi, DecayBound, GaussianPoly, TestFunction};
use crate::specfun::{zeta_critical, EvalConfig};

/// Default number of Fourier modes on each side.
pub const DEFAULT_MODES: usize = 64;

/// Grid points per top mode used by [`fourier_direct`].
pub const DIRECT_POINTS_PER_MODE: usize = 64;

/// Minimum grid points per top mode accepted by [`fourier_direct_with_grid`].
pub const MIN_POINTS_PER_MODE: usize = 8;

/// Absolute cut used when truncating lattice and dual sums.
const SUM_EPSILON: f64 = 1e-30;

/// Bound on the neglected tail of a Gaussian-dominated sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub terms_used: usize,
    pub bound: f64,
}

/// `sum_{n >= from} C e^{-s (n u)^2}`, bounded by a geometric series.
fn gaussian_tail(decay: DecayBound, u: f64, from: usize) -> f64 {
    if decay.constant == 0.0 {
        return 0.0;
    }
    let b = decay.scale * u * u;
    let from = from as f64;
    let ratio = (-b * (2.0 * from + 1.0)).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    decay.constant * (-b * from * from).exp() / (1.0 - ratio)
}

/// Terms needed so that the Gaussian tail past them is below `tol`.
fn terms_for(decay: DecayBound, u: f64, tol: f64) -> usize {
    if decay.constant == 0.0 {
        return 0;
    }
    let log_ratio = (decay.constant / tol).ln().max(0.0);
    let mut m = ((log_ratio / decay.scale).sqrt() / u).ceil() as usize;
    while gaussian_tail(decay, u, m + 1) >= tol {
        m += 1 + m / 8;
    }
    m
}

/// Neumaier compensated summation.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `E(f)(u) = u^{1/2} sum_{n=1}^{M} f(nu)` with `M` chosen from the decay
/// certificate so that the neglected tail is below `tol`.
pub fn eval_e(f: &TestFunction, u: f64, tol: f64) -> Result<(f64, TailBound)> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::InvalidArgument(format!("E(f)(u) needs u > 0, got {u}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let decay = f.decay();
    let root = u.sqrt();
    let m = terms_for(decay, u, tol / root);
    let mut acc = CompensatedSum::default();
    for n in 1..=m {
        acc.add(f.eval(n as f64 * u));
    }
    let bound = root * gaussian_tail(decay, u, m + 1);
    Ok((
        root * acc.value(),
        TailBound {
            terms_used: m,
            bound,
        },
    ))
}

/// `Tr(f)(u) = 2 sum_{n>=1} f(nu)`, summed from the far end inward.
pub fn trace(f: &TestFunction, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::InvalidArgument(format!("Tr(f)(u) needs u > 0, got {u}")));
    }
    let decay = f.decay();
    if decay.constant == 0.0 {
        return Ok(0.0);
    }
    let reach = ((decay.constant.max(1.0).ln() + 745.0) / decay.scale).sqrt();
    let last = (reach / u).ceil() as usize + 1;
    let total: f64 = (1..=last).rev().map(|n| f.eval(n as f64 * u)).sum();
    Ok(2.0 * total)
}

/// `|E(f)(u) - (u^{1/2}/2) Tr(f)(u)|`.
pub fn trace_identity_check(f: &TestFunction, u: f64) -> Result<f64> {
    let (e, _) = eval_e(f, u, 1e-300)?;
    let tr = trace(f, u)?;
    Ok((e - 0.5 * u.sqrt() * tr).abs())
}

/// Truncated Fourier data of a function on the circle of length `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "CircleWire", try_from = "CircleWire")]
pub struct CircleFunction {
    length: f64,
    modes: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CircleWire {
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "N")]
    modes: usize,
    coeffs: Vec<[f64; 2]>,
}

impl From<CircleFunction> for CircleWire {
    fn from(c: CircleFunction) -> Self {
        Self {
            length: c.length,
            modes: c.modes,
            coeffs: c.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<CircleWire> for CircleFunction {
    type Error = Error;

    fn try_from(w: CircleWire) -> Result<Self> {
        CircleFunction::new(
            w.length,
            w.modes,
            w.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        )
    }
}

impl CircleFunction {
    /// `coeffs` lists `c_{-N}, ..., c_N`.
    pub fn new(length: f64, modes: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "circle length must be positive, got {length}"
            )));
        }
        if coeffs.len() != 2 * modes + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients given for N = {modes}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Fourier coefficient".into()));
        }
        Ok(Self {
            length,
            modes,
            coeffs,
        })
    }

    pub fn from_fn(length: f64, modes: usize, c: impl Fn(i64) -> Complex64) -> Result<Self> {
        let n = modes as i64;
        Self::new(length, modes, (-n..=n).map(c).collect())
    }

    pub fn zero(length: f64, modes: usize) -> Result<Self> {
        Self::new(length, modes, vec![Complex64::new(0.0, 0.0); 2 * modes + 1])
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// `c_{-N}, ..., c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_n`, or zero outside `[-N, N]`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.modes {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + self.modes as i64) as usize]
    }

    /// `(n, c_n)` for `n = -N..=N`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.modes as i64;
        (-n..=n).zip(self.coeffs.iter().copied())
    }

    /// Frequency `2πn/L` of mode `n`.
    pub fn frequency(&self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.length
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max_n |a_n - b_n|` over the common modes; lengths must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.modes.min(other.modes) as i64;
        (-n..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// `c_n = L^{-1/2} zeta(1/2 - 2πin/L) psi_f(2πn/L)` for `|n| <= N`.
pub fn fourier_closed(
    f: &TestFunction,
    length: f64,
    modes: usize,
    cfg: &EvalConfig,
) -> Result<CircleFunction> {
    check_length(length)?;
    let n = modes as i64;
    let scale = length.sqrt().recip();
    let coeffs = (-n..=n)
        .into_par_iter()
        .map(|k| {
            let s = 2.0 * PI * k as f64 / length;
            let zeta = zeta_critical(-s, cfg)?;
            let psi = mellin_psi(f, Complex64::new(s, 0.0))?.psi;
            Ok(zeta * psi * scale)
        })
        .collect::<Result<Vec<_>>>()?;
    CircleFunction::new(length, modes, coeffs)
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "circle length must be positive, got {length}"
        )));
    }
    Ok(())
}

/// Evaluates `E(f)` for the periodization, directly for `u >= 1` and through
/// Poisson summation for `u < 1`:
/// `sum_{n>=1} f(nx) = (1/2)[(1/x)(f^(0) + 2 sum_{m>=1} f^(m/x)) - f(0)]`.
struct PeriodizationKernel<'a> {
    f: &'a TestFunction,
    fhat: GaussianPoly,
    fhat_decay: DecayBound,
    at_zero: f64,
}

impl<'a> PeriodizationKernel<'a> {
    fn new(f: &'a TestFunction) -> Result<Self> {
        let poly = f.poly().ok_or_else(|| {
            Error::UnsupportedRepresentation(format!(
                "{}: the direct transform needs a Gaussian-polynomial representation",
                f.label()
            ))
        })?;
        let integral = poly.integral();
        let size = poly.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if integral.abs() > 1e-10 * size.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "{}: periodization diverges unless the integral vanishes (got {integral:e})",
                f.label()
            )));
        }
        let fhat = poly.fourier_transform();
        let fhat_decay = fhat.decay_bound();
        Ok(Self {
            f,
            fhat,
            fhat_decay,
            at_zero: poly.eval(0.0),
        })
    }

    fn e_value(&self, u: f64) -> f64 {
        if u >= 1.0 {
            let decay = self.f.decay();
            let m = terms_for(decay, u, SUM_EPSILON);
            let s: f64 = (1..=m).map(|n| self.f.eval(n as f64 * u)).sum();
            return u.sqrt() * s;
        }
        let x = 1.0 / u;
        let m = terms_for(self.fhat_decay, x, SUM_EPSILON);
        let s: f64 = (1..=m).map(|k| self.fhat.eval(k as f64 * x)).sum();
        u.sqrt() * (x * s - 0.5 * self.at_zero)
    }

    /// Bound on `|E(f)(u)|` used to stop the lattice sum.
    fn e_bound(&self, u: f64) -> f64 {
        if u >= 1.0 {
            u.sqrt() * gaussian_tail(self.f.decay(), u, 1)
        } else {
            let x = 1.0 / u;
            u.sqrt() * (0.5 * self.at_zero.abs() + x * gaussian_tail(self.fhat_decay, x, 1))
        }
    }

    /// `(Σ_μ E f)(e^v) = sum_k E(f)(e^{v + kL})`.
    fn periodized(&self, v: f64, length: f64) -> f64 {
        let mut total = self.e_value(v.exp());
        for dir in [1.0, -1.0] {
            let mut k = 1.0;
            loop {
                let u = (v + dir * k * length).exp();
                if self.e_bound(u) < SUM_EPSILON || u == 0.0 || !u.is_finite() {
                    break;
                }
                total += self.e_value(u);
                k += 1.0;
            }
        }
        total
    }

    fn samples(&self, length: f64, grid: usize) -> Vec<f64> {
        let h = length / grid as f64;
        (0..grid)
            .into_par_iter()
            .map(|j| self.periodized(j as f64 * h, length))
            .collect()
    }
}

/// Samples of `Σ_μ E f` on `grid` equispaced points of `log u ∈ [0, L)`.
pub fn periodized_samples(f: &TestFunction, length: f64, grid: usize) -> Result<Vec<f64>> {
    check_length(length)?;
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    }
    Ok(PeriodizationKernel::new(f)?.samples(length, grid))
}

/// Trapezoid value of `∫_{C_μ} |Σ_μ E f|^2 d*u` on `grid` points.
pub fn periodized_l2_norm_sqr(f: &TestFunction, length: f64, grid: usize) -> Result<f64> {
    let samples = periodized_samples(f, length, grid)?;
    Ok(length / grid as f64 * samples.iter().map(|x| x * x).sum::<f64>())
}

/// Fourier coefficients of `Σ_μ E f` by the trapezoid rule on
/// `64 N` points in `log u`.
pub fn fourier_direct(f: &TestFunction, length: f64, modes: usize) -> Result<CircleFunction> {
    fourier_direct_with_grid(f, length, modes, DIRECT_POINTS_PER_MODE * modes.max(1))
}

pub fn fourier_direct_with_grid(
    f: &TestFunction,
    length: f64,
    modes: usize,
    grid: usize,
) -> Result<CircleFunction> {
    check_length(length)?;
    let needed = MIN_POINTS_PER_MODE * modes.max(1);
    if grid < needed {
        return Err(Error::Resolution {
            grid,
            modes,
            needed,
        });
    }
    let samples = PeriodizationKernel::new(f)?.samples(length, grid);
    let weight = length.sqrt() / grid as f64;
    let n = modes as i64;
    let coeffs = (-n..=n)
        .into_par_iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &x) in samples.iter().enumerate() {
                // reduce the phase index mod grid to keep the angle small
                let idx = (k * j as i64).rem_euclid(grid as i64) as f64;
                let angle = -2.0 * PI * idx / grid as f64;
                acc += Complex64::from_polar(x, angle);
            }
            acc * weight
        })
        .collect();
    CircleFunction::new(length, modes, coeffs)
}

/// Covering map `σ_n`: from length `nL` to `L`, `out_k = n^{1/2} in_{nk}`.
/// The output keeps `floor(N_in / n)` modes.
pub fn covering_sigma(xi: &CircleFunction, n: usize) -> Result<CircleFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("covering degree must be at least 1".into()));
    }
    covering_sigma_to(xi, n, xi.modes / n)
}

/// [`covering_sigma`] with an explicit number of output modes.
pub fn covering_sigma_to(xi: &CircleFunction, n: usize, target: usize) -> Result<CircleFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("covering degree must be at least 1".into()));
    }
    let needed = n * target;
    if xi.modes < needed {
        return Err(Error::InsufficientModes {
            n,
            needed,
            available: xi.modes,
        });
    }
    let root = (n as f64).sqrt();
    CircleFunction::from_fn(xi.length / n as f64, target, |k| {
        xi.coeff(k * n as i64) * root
    })
}

/// Multiplier `λ^{-2πin/L}` of the scaling action on mode `n`.
pub fn theta_multiplier(lambda: f64, length: f64, n: i64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * n as f64 * lambda.ln() / length)
}

/// Scaling action `ϑ(λ)`: `c_n -> λ^{-2πin/L} c_n`.
pub fn scaling_theta(lambda: f64, xi: &CircleFunction) -> Result<CircleFunction> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be positive, got {lambda}")));
    }
    CircleFunction::from_fn(xi.length, xi.modes, |n| {
        xi.coeff(n) * theta_multiplier(lambda, xi.length, n)
    })
}

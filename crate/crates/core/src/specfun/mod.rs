//! Special functions: complex gamma, zeta on the critical line,
//! the Riemann–Siegel `Z` and `θ` functions, zero finding and jets.
//!
//! Everything here is a pure function of its arguments and an
//! [`EvalConfig`], so it can be called from any number of workers.

mod gamma;
mod zeta;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gamma::{gamma_complex, ln_gamma};
pub use zeta::{
    riemann_siegel_theta, riemann_siegel_z, rotated_zeta, zeta_critical, zeta_critical_em,
    zeta_euler_maclaurin, MAX_VALIDATED_T,
};

/// Evaluation settings for zeta on the critical line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Minimum Euler–Maclaurin cut; raised automatically with `|t|`.
    pub euler_maclaurin_terms: usize,
    /// Ordinate above which the Riemann–Siegel formula is used.
    pub rs_threshold: f64,
    pub target_abs_error: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            euler_maclaurin_terms: 20,
            rs_threshold: 100.0,
            target_abs_error: 1e-12,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0) {
            return Err(Error::InvalidArgument(
                "target_abs_error must be positive".into(),
            ));
        }
        if !(self.rs_threshold >= 20.0) {
            return Err(Error::InvalidArgument(
                "rs_threshold must be at least 20".into(),
            ));
        }
        if self.euler_maclaurin_terms == 0 {
            return Err(Error::InvalidArgument(
                "euler_maclaurin_terms must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A zero `1/2 + i t` of zeta on the critical line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaZero {
    pub ordinate: f64,
    pub multiplicity: u32,
    pub abs_error: f64,
}

/// Options for [`find_zeros_with`].
#[derive(Clone, Copy, Debug)]
pub struct ZeroSearch {
    /// Grid step for sign-change detection.
    pub step: f64,
    /// Target half-width of the final bisection bracket.
    pub abs_error: f64,
    /// Multiplicity recorded on every zero. All known zeros are simple; other
    /// values are for synthetic experiments.
    pub multiplicity: u32,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        Self {
            step: 0.05,
            abs_error: 1e-10,
            multiplicity: 1,
        }
    }
}

/// Zeros of `Z` in `[t_min, t_max]`, each located by a sign change on a
/// uniform grid and refined by bisection.
pub fn find_zeros(t_min: f64, t_max: f64, cfg: &EvalConfig) -> Result<Vec<ZetaZero>> {
    find_zeros_with(t_min, t_max, cfg, &ZeroSearch::default())
}

pub fn find_zeros_with(
    t_min: f64,
    t_max: f64,
    cfg: &EvalConfig,
    search: &ZeroSearch,
) -> Result<Vec<ZetaZero>> {
    if !(t_min >= 0.0 && t_min < t_max) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if !(search.step > 0.0 && search.step <= 0.05) {
        return Err(Error::InvalidArgument(format!(
            "grid step must lie in (0, 0.05], got {}",
            search.step
        )));
    }
    let cells = ((t_max - t_min) / search.step).ceil() as usize;
    let grid: Vec<f64> = (0..=cells)
        .map(|i| (t_min + i as f64 * search.step).min(t_max))
        .collect();
    let values = grid
        .par_iter()
        .map(|&t| riemann_siegel_z(t, cfg))
        .collect::<Result<Vec<f64>>>()?;

    let mut zeros = Vec::new();
    for i in 0..grid.len() - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let (za, zb) = (values[i], values[i + 1]);
        if za == 0.0 {
            if i == 0 || values[i - 1] != 0.0 {
                zeros.push(ZetaZero {
                    ordinate: a,
                    multiplicity: search.multiplicity,
                    abs_error: 0.0,
                });
            }
            continue;
        }
        if zb == 0.0 && i + 1 == grid.len() - 1 {
            zeros.push(ZetaZero {
                ordinate: b,
                multiplicity: search.multiplicity,
                abs_error: 0.0,
            });
            continue;
        }
        if za * zb < 0.0 {
            let (t, err) = bisect(|t| riemann_siegel_z(t, cfg), a, b, za, search.abs_error)?;
            zeros.push(ZetaZero {
                ordinate: t,
                multiplicity: search.multiplicity,
                abs_error: err,
            });
        }
    }
    Ok(zeros)
}

/// Bisection on a bracket with `f(lo)` of sign `f_lo`; returns the midpoint
/// and the bracket half-width.
fn bisect<F>(f: F, mut lo: f64, mut hi: f64, mut f_lo: f64, half_width: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) * 0.5 <= half_width || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok((mid, 0.0));
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), 0.5 * (hi - lo)))
}

/// Jet `[zeta(s), zeta'(s), ..., zeta^{(order)}(s)]` at `s = 1/2 + i t0`,
/// derivatives taken in `s`.
///
/// Derivatives come from the Cauchy integral on a circle centred at `s`,
/// discretized by the trapezoidal rule (a symmetric difference stencil in
/// the complex plane). The radius stays at most half the distance to the
/// pole at `s = 1`, so the rule converges geometrically. Samples use the
/// Euler–Maclaurin evaluator, which is valid off the critical line.
pub fn zeta_jet(t0: f64, order: usize, cfg: &EvalConfig) -> Result<Vec<Complex64>> {
    if order > 4 {
        return Err(Error::InvalidArgument(format!(
            "jet order must be at most 4, got {order}"
        )));
    }
    let value = zeta_critical(t0, cfg)?;
    if order == 0 {
        return Ok(vec![value]);
    }
    if t0.abs() > MAX_VALIDATED_T {
        return Err(Error::AccuracyNotAchievable {
            t: t0,
            limit: MAX_VALIDATED_T,
        });
    }
    let center = Complex64::new(0.5, t0);
    let radius = (0.5 * (center - 1.0).norm()).min(0.5);
    let derivs = cauchy_derivatives(
        |w| zeta_euler_maclaurin(w, cfg.euler_maclaurin_terms, cfg.target_abs_error),
        center,
        radius,
        order,
    );
    let mut jet = vec![value];
    jet.extend_from_slice(&derivs[1..]);
    Ok(jet)
}

const JET_NODES: usize = 64;

/// `f^{(k)}(center)` for k = 0..=order from `JET_NODES` samples on a circle.
pub(crate) fn cauchy_derivatives<F>(f: F, center: Complex64, radius: f64, order: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let m = JET_NODES;
    let samples: Vec<(f64, Complex64)> = (0..m)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            (phi, f(center + Complex64::from_polar(radius, phi)))
        })
        .collect();
    let mut out = Vec::with_capacity(order + 1);
    let mut factorial = 1.0;
    for k in 0..=order {
        if k > 0 {
            factorial *= k as f64;
        }
        let acc: Complex64 = samples
            .iter()
            .map(|&(phi, v)| v * Complex64::from_polar(1.0, -(k as f64) * phi))
            .sum();
        out.push(acc * factorial / (radius.powi(k as i32) * m as f64));
    }
    out
}

/// k-th central difference quotient with second-order accuracy.
pub(crate) fn central_difference<F>(g: &F, t: f64, k: usize, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let v = |j: f64| g(t + j * h);
    Ok(match k {
        1 => (v(1.0)? - v(-1.0)?) / (2.0 * h),
        2 => (v(1.0)? - v(0.0)? * 2.0 + v(-1.0)?) / (h * h),
        3 => (v(2.0)? - v(1.0)? * 2.0 + v(-1.0)? * 2.0 - v(-2.0)?) / (2.0 * h.powi(3)),
        4 => (v(2.0)? - v(1.0)? * 4.0 + v(0.0)? * 6.0 - v(-1.0)? * 4.0 + v(-2.0)?) / h.powi(4),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "difference order {k} not supported"
            )))
        }
    })
}

/// Richardson extrapolation in `h^2` starting from step `h0` and halving
/// `levels - 1` times.
pub(crate) fn richardson<F>(approx: F, h0: f64, levels: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut prev: Vec<Complex64> = Vec::with_capacity(levels);
    let mut h = h0;
    for level in 0..levels {
        let mut row = Vec::with_capacity(level + 1);
        row.push(approx(h)?);
        let mut factor = 1.0;
        for j in 1..=level {
            factor *= 4.0;
            let r = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(r);
        }
        prev = row;
        h *= 0.5;
    }
    Ok(*prev.last().expect("at least one level"))
}

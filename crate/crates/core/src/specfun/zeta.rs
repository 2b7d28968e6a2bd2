//! Zeta on and near the critical line.
//!
//! Two evaluators: Euler–Maclaurin summation (valid for any `s != 1`, used
//! below the Riemann–Siegel threshold) and the Riemann–Siegel formula with
//! the remainder corrections `C_0 .. C_4`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::EvalConfig;
use crate::error::{Error, Result};

/// Largest `|t|` for which the evaluators are trusted in double precision.
pub const MAX_VALIDATED_T: f64 = 1.0e4;

/// `B_{2k} / (2k)!` for k = 1..=20.
const BERNOULLI_OVER_FACTORIAL: [f64; 20] = [
    0.083_333_333_333_333_333,
    -0.001_388_888_888_888_888_9,
    3.306_878_306_878_306_9e-5,
    -8.267_195_767_195_767_2e-7,
    2.087_675_698_786_809_9e-8,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_061_9e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467_5e-21,
    -8.953_517_427_037_546_9e-23,
    2.267_952_452_337_683_1e-24,
    -5.744_790_668_872_202_4e-26,
    1.455_172_475_614_864_9e-27,
    -3.685_994_940_665_310_2e-29,
    9.336_734_257_095_044_7e-31,
    -2.365_022_415_700_629_9e-32,
];

/// Euler–Maclaurin evaluation of `zeta(s)`.
///
/// The cut `N` is raised until consecutive Bernoulli corrections shrink by at
/// least a factor four, so the neglected tail stays far below `target`.
pub fn zeta_euler_maclaurin(s: Complex64, min_terms: usize, target: f64) -> Complex64 {
    let m_max = BERNOULLI_OVER_FACTORIAL.len();
    let needed = ((s.norm() + 2.0 * m_max as f64) / PI).ceil() as usize + 1;
    let n_cut = min_terms.max(needed).max(2);
    let big_n = n_cut as f64;

    let mut head = Complex64::new(0.0, 0.0);
    for n in 1..n_cut {
        head += (-s * (n as f64).ln()).exp();
    }
    let n_pow = (-s * big_n.ln()).exp(); // N^{-s}
    let one = Complex64::new(1.0, 0.0);
    let mut total = head + n_pow * big_n / (s - one) + n_pow * 0.5;

    // T_k = s (s+1) ... (s+2k-2) N^{-s-2k+1}
    let mut t_k = s * n_pow / big_n;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = t_k * *coeff;
        total += term;
        if term.norm() < target * 1e-4 {
            break;
        }
        let j = 2.0 * (k as f64 + 1.0);
        t_k *= (s + (j - 1.0)) * (s + j) / (big_n * big_n);
    }
    total
}

/// Riemann–Siegel theta function.
///
/// Uses `Im ln Γ(1/4 + it/2) - (t/2) ln π` below `t = 20` and the asymptotic
/// series above, both continuous in `t`.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    if t.abs() < 20.0 {
        let lg = ln_gamma(Complex64::new(0.25, t / 2.0)).expect("no pole on Re = 1/4");
        return lg.im - 0.5 * t * PI.ln();
    }
    let sign = t.signum();
    let t = t.abs();
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 48.0
            + inv2
                * (7.0 / 5760.0
                    + inv2 * (31.0 / 80640.0 + inv2 * (127.0 / 430_080.0 + inv2 * 511.0 / 1_216_512.0))));
    sign * (0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + series)
}

fn rs_psi(w: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    (two_pi * (w * w - w - 1.0 / 16.0)).cos() / (two_pi * w).cos()
}

const CAUCHY_NODES: usize = 64;
const CAUCHY_RADIUS: f64 = 0.5;
const PSI_ORDERS: usize = 13;

struct CauchyTable {
    nodes: Vec<Complex64>,
    // twiddles[k][j] = e^{-i k phi_j}
    twiddles: Vec<Vec<Complex64>>,
    scale: [f64; PSI_ORDERS],
}

fn cauchy_table() -> &'static CauchyTable {
    static TABLE: OnceLock<CauchyTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m = CAUCHY_NODES;
        let phis: Vec<f64> = (0..m)
            .map(|j| 2.0 * PI * (j as f64 + 0.5) / m as f64)
            .collect();
        let nodes = phis
            .iter()
            .map(|&phi| Complex64::from_polar(CAUCHY_RADIUS, phi))
            .collect();
        let twiddles = (0..PSI_ORDERS)
            .map(|k| {
                phis.iter()
                    .map(|&phi| Complex64::from_polar(1.0, -(k as f64) * phi))
                    .collect()
            })
            .collect();
        let mut scale = [0.0; PSI_ORDERS];
        let mut fact = 1.0;
        for (k, s) in scale.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *s = fact / (CAUCHY_RADIUS.powi(k as i32) * m as f64);
        }
        CauchyTable {
            nodes,
            twiddles,
            scale,
        }
    })
}

/// Derivatives `Ψ^{(k)}(p)`, k = 0..=12, of the Riemann–Siegel kernel
/// `cos(2π(p² - p - 1/16)) / cos(2πp)`, by the Cauchy integral formula on a
/// circle. The kernel is entire, so the trapezoidal rule converges
/// geometrically and no node touches the removable singularities.
pub(crate) fn rs_psi_derivatives(p: f64) -> [f64; PSI_ORDERS] {
    let table = cauchy_table();
    let samples: Vec<Complex64> = table
        .nodes
        .iter()
        .map(|&w| rs_psi(Complex64::new(p, 0.0) + w))
        .collect();
    let mut out = [0.0; PSI_ORDERS];
    for (k, value) in out.iter_mut().enumerate() {
        let acc: Complex64 = samples
            .iter()
            .zip(&table.twiddles[k])
            .map(|(s, tw)| s * tw)
            .sum();
        *value = acc.re * table.scale[k];
    }
    out
}

/// Riemann–Siegel remainder coefficients `C_0 .. C_4` at fractional part `p`.
pub(crate) fn rs_remainder_coefficients(p: f64) -> [f64; 5] {
    let d = rs_psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[6] / (18_432.0 * pi4) + d[2] / (64.0 * pi2),
        -d[9] / (5_308_416.0 * pi6) - d[5] / (3_840.0 * pi4) - d[1] / (64.0 * pi2),
        d[12] / (2_038_431_744.0 * pi8)
            + 11.0 * d[8] / (5_898_240.0 * pi6)
            + 19.0 * d[4] / (24_576.0 * pi4)
            + d[0] / (128.0 * pi2),
    ]
}

/// Hardy's `Z(t)` by the Riemann–Siegel formula, `t >= 2π`.
pub(crate) fn z_riemann_siegel(t: f64) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n_main = a.floor() as usize;
    let p = a - n_main as f64;
    let theta = riemann_siegel_theta(t);
    let mut main = 0.0;
    for n in 1..=n_main {
        let nf = n as f64;
        main += (theta - t * nf.ln()).cos() / nf.sqrt();
    }
    main *= 2.0;
    let coeffs = rs_remainder_coefficients(p);
    let mut remainder = 0.0;
    let mut a_pow = 1.0;
    for c in coeffs {
        remainder += c * a_pow;
        a_pow /= a;
    }
    let sign = if n_main % 2 == 1 { 1.0 } else { -1.0 };
    main + sign * remainder / a.sqrt()
}

fn check_range(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be finite, got {t}")));
    }
    if t.abs() > MAX_VALIDATED_T {
        return Err(Error::AccuracyNotAchievable {
            t,
            limit: MAX_VALIDATED_T,
        });
    }
    Ok(())
}

/// `zeta(1/2 + it)` by Euler–Maclaurin regardless of the threshold.
pub fn zeta_critical_em(t: f64, cfg: &EvalConfig) -> Result<Complex64> {
    check_range(t)?;
    Ok(zeta_euler_maclaurin(
        Complex64::new(0.5, t),
        cfg.euler_maclaurin_terms,
        cfg.target_abs_error,
    ))
}

/// `zeta(1/2 + it)`.
///
/// Euler–Maclaurin below `cfg.rs_threshold`, Riemann–Siegel above it.
pub fn zeta_critical(t: f64, cfg: &EvalConfig) -> Result<Complex64> {
    check_range(t)?;
    if t.abs() < cfg.rs_threshold {
        return zeta_critical_em(t, cfg);
    }
    let ta = t.abs();
    let z = z_riemann_siegel(ta);
    let value = Complex64::from_polar(z, -riemann_siegel_theta(ta));
    Ok(if t < 0.0 { value.conj() } else { value })
}

/// The rotation `e^{iθ(t)} zeta(1/2 + it)` before taking the real part.
pub fn rotated_zeta(t: f64, cfg: &EvalConfig) -> Result<Complex64> {
    let zeta = zeta_critical(t, cfg)?;
    Ok(zeta * Complex64::from_polar(1.0, riemann_siegel_theta(t)))
}

/// Hardy's `Z(t) = e^{iθ(t)} zeta(1/2 + it)`, real for real `t`.
pub fn riemann_siegel_z(t: f64, cfg: &EvalConfig) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("Z(t) needs t >= 0, got {t}")));
    }
    check_range(t)?;
    if t >= cfg.rs_threshold {
        return Ok(z_riemann_siegel(t));
    }
    Ok(rotated_zeta(t, cfg)?.re)
}

//! Zeta-cycle detection, scanning over circle lengths, and covering stability.
//!
//! Row `n` of the detection matrix is `c_n(f_j) = L^{-1/2} zeta(1/2 - 2πin/L)
//! psi_j(2πn/L)`, so the span of the family misses the direction `e_n`
//! exactly when the zeta factor vanishes. The row score
//! `r_n = max_j |M[n,j]| / max_j |psi_j(2πn/L)|` equals `L^{-1/2} |zeta|`,
//! and detection thresholds the zeta-scale score `L^{1/2} r_n`.
//!
//! Only rows with `0 < |2πn/L| <= t_max` are scored. The detection matrix
//! carries eight guard modes beyond that range, which are computed but
//! never flagged.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::schwartz::{mellin_psi, TestFunction};
use crate::specfun::{riemann_siegel_z, zeta_critical, EvalConfig, ZetaZero};

/// Default detection tolerance on `|zeta|`.
pub const DEFAULT_TOL: f64 = 1e-4;

/// Default largest ordinate under consideration.
pub const DEFAULT_T_MAX: f64 = 60.0;

/// Modes beyond the `t_max` range carried by the detection matrix.
pub const GUARD_MODES: usize = 8;

/// Below this `max_j |psi_j|` a row cannot be scored.
pub const DEGENERATE_PSI: f64 = 1e-250;

/// Distance within which a frequency matches a zero ordinate.
pub const MATCH_WINDOW: f64 = 5e-3;

/// Largest `N` accepted by [`gram_cross_check`].
pub const GRAM_MAX_MODES: usize = 64;

/// `N = ceil(L t_max / 2π) + 8`.
pub fn modes_for(length: f64, t_max: f64) -> usize {
    (length * t_max / (2.0 * PI)).ceil() as usize + GUARD_MODES
}

/// `c_n(f_j)` for `n = -N..=N` and every family member.
#[derive(Clone, Debug)]
pub struct DetectionMatrix {
    pub length: f64,
    pub modes: usize,
    /// Row `n + N`, column `j`.
    pub entries: Vec<Vec<Complex64>>,
    /// `max_j |psi_j(2πn/L)|` per row.
    pub psi_max: Vec<f64>,
}

impl DetectionMatrix {
    pub fn build(
        length: f64,
        modes: usize,
        family: &[TestFunction],
        cfg: &EvalConfig,
    ) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "circle length must be positive, got {length}"
            )));
        }
        if family.is_empty() {
            return Err(Error::InvalidArgument("detection family is empty".into()));
        }
        let n = modes as i64;
        let scale = length.sqrt().recip();
        let rows = (-n..=n)
            .map(|k| {
                let s = 2.0 * PI * k as f64 / length;
                let zeta = zeta_critical(-s, cfg)?;
                let mut psi_max = 0.0f64;
                let mut row = Vec::with_capacity(family.len());
                for f in family {
                    let psi = mellin_psi(f, Complex64::new(s, 0.0))?.psi;
                    psi_max = psi_max.max(psi.norm());
                    row.push(zeta * psi * scale);
                }
                if !(psi_max >= DEGENERATE_PSI) {
                    return Err(Error::FamilyDegenerate { n: k, max_psi: psi_max });
                }
                Ok((row, psi_max))
            })
            .collect::<Result<Vec<_>>>()?;
        let (entries, psi_max) = rows.into_iter().unzip();
        Ok(Self {
            length,
            modes,
            entries,
            psi_max,
        })
    }

    pub fn row(&self, n: i64) -> &[Complex64] {
        &self.entries[(n + self.modes as i64) as usize]
    }

    /// `r_n = max_j |M[n,j]| / max_j |psi_j(2πn/L)|`.
    pub fn row_score(&self, n: i64) -> f64 {
        let idx = (n + self.modes as i64) as usize;
        let top = self.entries[idx].iter().map(|c| c.norm()).fold(0.0, f64::max);
        top / self.psi_max[idx]
    }

    pub fn frequency(&self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.length
    }
}

/// Score of one row of the detection matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowScore {
    pub n: i64,
    pub s: f64,
    /// `r_n`.
    pub score: f64,
    /// `L^{1/2} r_n`, which equals `|zeta(1/2 - 2πin/L)|`.
    pub zeta_score: f64,
    /// Whether the row takes part in the verdict.
    pub scored: bool,
}

/// Nearest zero ordinate to a flagged frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroMatch {
    pub n: i64,
    pub s: f64,
    pub zero: f64,
    pub distance: f64,
}

/// Verdict of [`detect`] at one circle length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "N")]
    pub modes: usize,
    pub t_max: f64,
    pub tol: f64,
    pub rows: Vec<RowScore>,
    pub flagged: Vec<i64>,
    pub matched_zeros: Vec<ZeroMatch>,
    pub verdict: bool,
}

impl CycleReport {
    pub fn row(&self, n: i64) -> Option<&RowScore> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Smallest `r_n` over the scored rows, infinite when none are scored.
    pub fn min_score(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.scored)
            .map(|r| r.score)
            .fold(f64::INFINITY, f64::min)
    }

    /// Fills `matched_zeros` with the nearest ordinate for each flagged mode.
    pub fn match_zeros(&mut self, zeros: &[ZetaZero]) {
        self.matched_zeros = self
            .flagged
            .iter()
            .filter_map(|&n| {
                let s = 2.0 * PI * n as f64 / self.length;
                nearest_zero(s.abs(), zeros).map(|(zero, distance)| ZeroMatch {
                    n,
                    s,
                    zero,
                    distance,
                })
            })
            .collect();
    }

    /// Every flagged mode lies within `window` of some zero.
    pub fn all_matched(&self, window: f64) -> bool {
        self.matched_zeros.len() == self.flagged.len()
            && self.matched_zeros.iter().all(|m| m.distance <= window)
    }
}

fn nearest_zero(s: f64, zeros: &[ZetaZero]) -> Option<(f64, f64)> {
    zeros
        .iter()
        .map(|z| (z.ordinate, (z.ordinate - s).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Builds the detection matrix at `L` with `N = ceil(L t_max / 2π) + 8` and
/// flags every scored row whose zeta-scale score is below `tol`.
pub fn detect(
    length: f64,
    family: &[TestFunction],
    t_max: f64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<CycleReport> {
    if !(t_max > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_max and tol must be positive, got {t_max} and {tol}"
        )));
    }
    let modes = modes_for(length, t_max);
    let matrix = DetectionMatrix::build(length, modes, family, cfg)?;
    Ok(report_from_matrix(&matrix, t_max, tol))
}

pub fn report_from_matrix(matrix: &DetectionMatrix, t_max: f64, tol: f64) -> CycleReport {
    let root = matrix.length.sqrt();
    let n = matrix.modes as i64;
    let rows: Vec<RowScore> = (-n..=n)
        .map(|k| {
            let s = matrix.frequency(k);
            let score = matrix.row_score(k);
            RowScore {
                n: k,
                s,
                score,
                zeta_score: root * score,
                scored: k != 0 && s.abs() <= t_max,
            }
        })
        .collect();
    let flagged: Vec<i64> = rows
        .iter()
        .filter(|r| r.scored && r.zeta_score < tol)
        .map(|r| r.n)
        .collect();
    CycleReport {
        length: matrix.length,
        modes: matrix.modes,
        t_max,
        tol,
        verdict: !flagged.is_empty(),
        rows,
        flagged,
        matched_zeros: Vec::new(),
    }
}

/// Frequencies `2πn/L` of the flagged modes, ascending.
///
/// This is the truncated complement spectrum: only modes up to `t_max`
/// are examined.
pub fn complement_spectrum(report: &CycleReport) -> Result<Vec<f64>> {
    if !report.verdict {
        return Err(Error::EmptySpectrum(report.length));
    }
    let mut s: Vec<f64> = report
        .flagged
        .iter()
        .map(|&n| 2.0 * PI * n as f64 / report.length)
        .collect();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Outcome of detecting at `k L*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringOutcome {
    pub k: usize,
    pub report: CycleReport,
    /// Verdict true and every base-flagged `n` reappears as `k n`.
    pub consistent: bool,
}

/// Detects at `k L*` for each multiple and checks that the flagged modes of
/// `L*` reappear multiplied by `k`.
pub fn covering_stability(
    l_star: f64,
    multiples: &[usize],
    family: &[TestFunction],
    t_max: f64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<Vec<CoveringOutcome>> {
    let base = detect(l_star, family, t_max, tol, cfg)?;
    if !base.verdict {
        return Err(Error::EmptySpectrum(l_star));
    }
    multiples
        .iter()
        .map(|&k| {
            if k == 0 {
                return Err(Error::InvalidArgument("covering multiple must be positive".into()));
            }
            let report = detect(k as f64 * l_star, family, t_max, tol, cfg)?;
            let consistent = report.verdict
                && base
                    .flagged
                    .iter()
                    .all(|&n| report.flagged.contains(&(n * k as i64)));
            Ok(CoveringOutcome {
                k,
                report,
                consistent,
            })
        })
        .collect()
}

/// Smallest singular value of the scored positive rows of the detection
/// matrix, each row divided by `max_j |psi_j|` and each column normalized
/// to unit length.
///
/// A collapsed row makes this value small. The family must have at least
/// as many members as there are scored positive rows.
pub fn gram_cross_check(matrix: &DetectionMatrix, t_max: f64) -> Result<f64> {
    if matrix.modes > GRAM_MAX_MODES {
        return Err(Error::InvalidArgument(format!(
            "cross-check limited to N <= {GRAM_MAX_MODES}, got {}",
            matrix.modes
        )));
    }
    let rows: Vec<i64> = (1..=matrix.modes as i64)
        .filter(|&n| matrix.frequency(n) <= t_max)
        .collect();
    let cols = matrix.entries[0].len();
    if rows.is_empty() || rows.len() > cols {
        return Err(Error::InvalidArgument(format!(
            "cross-check needs 1..={cols} scored rows, got {}",
            rows.len()
        )));
    }
    let mut a = DMatrix::<Complex64>::from_fn(rows.len(), cols, |i, j| {
        let idx = (rows[i] + matrix.modes as i64) as usize;
        matrix.entries[idx][j] / matrix.psi_max[idx]
    });
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= Complex64::new(norm, 0.0);
        }
    }
    let sv = a.singular_values();
    Ok(sv.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Parameters of [`scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub l_min: f64,
    pub l_max: f64,
    pub step: f64,
    pub t_max: f64,
    pub tol: f64,
    pub eval: EvalConfig,
}

impl ScanConfig {
    pub fn new(l_min: f64, l_max: f64, step: f64) -> Self {
        Self {
            l_min,
            l_max,
            step,
            t_max: DEFAULT_T_MAX,
            tol: DEFAULT_TOL,
            eval: EvalConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.l_min > 0.0 && self.l_min < self.l_max) {
            return Err(Error::InvalidArgument(format!(
                "scan window needs 0 < L_min < L_max, got [{}, {}]",
                self.l_min, self.l_max
            )));
        }
        if !(self.step > 0.0) || !(self.t_max > 0.0) || !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(
                "step, t_max and tol must be positive".into(),
            ));
        }
        self.eval.validate()
    }

    /// `L_min, L_min + step, ...` up to `L_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.l_max - self.l_min) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| self.l_min + i as f64 * self.step)
            .collect()
    }
}

/// A refined zero crossing `zeta(1/2 - 2πin/L*) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dip {
    #[serde(rename = "L_star")]
    pub l_star: f64,
    pub n: i64,
    pub s: f64,
    pub matched_zero: Option<f64>,
    pub distance: Option<f64>,
    /// Bracket widths in `L`, one per bisection step.
    #[serde(skip)]
    pub bracket_widths: Vec<f64>,
    /// `|Z(s*)|` at the refined point.
    #[serde(skip)]
    pub final_abs_z: f64,
}

/// Wall-clock and size statistics of a scan, kept apart from its results.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RuntimeStats {
    pub grid_points: usize,
    pub rows_evaluated: usize,
    pub dips: usize,
    pub threads: usize,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    /// `(L, min_n r_n)` over the scored rows.
    pub grid: Vec<(f64, f64)>,
    /// Sorted by `L*`.
    pub dips: Vec<Dip>,
    pub runtime_stats: RuntimeStats,
}

impl ScanResult {
    pub fn match_zeros(&mut self, zeros: &[ZetaZero]) {
        for dip in &mut self.dips {
            if let Some((zero, distance)) = nearest_zero(dip.s, zeros) {
                dip.matched_zero = Some(zero);
                dip.distance = Some(distance);
            }
        }
    }

    /// Every dip lies within `window` of a zero.
    pub fn all_matched(&self, window: f64) -> bool {
        self.dips
            .iter()
            .all(|d| d.distance.is_some_and(|x| x <= window))
    }

    /// CSV `L,min_row_score`.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("L,min_row_score\n");
        for &(l, r) in &self.grid {
            out.push_str(&format!("{},{}\n", sig15(l), sig15(r)));
        }
        out
    }
}

/// Scans `L` over the grid of `cfg`.
///
/// The profile records `min_n r_n` from [`detect`] at each grid point.
/// Dips are located per mode `n >= 1` from sign changes of `Z(2πn/L)`
/// between neighbouring grid points and refined by bisection in `L`
/// down to adjacent floating-point values.
pub fn scan(cfg: &ScanConfig, family: &[TestFunction]) -> Result<ScanResult> {
    cfg.validate()?;
    let started = Instant::now();
    let grid = cfg.grid();
    let eval = &cfg.eval;

    let per_point = grid
        .par_iter()
        .map(|&length| {
            let report = detect(length, family, cfg.t_max, cfg.tol, eval)?;
            let n_hi = (length * cfg.t_max / (2.0 * PI)).floor() as usize + 1;
            let z = (1..=n_hi)
                .map(|n| riemann_siegel_z(2.0 * PI * n as f64 / length, eval))
                .collect::<Result<Vec<_>>>()?;
            Ok((report.min_score(), z))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut brackets = Vec::new();
    for (i, pair) in per_point.windows(2).enumerate() {
        let (l_a, l_b) = (grid[i], grid[i + 1]);
        let (za, zb) = (&pair[0].1, &pair[1].1);
        for idx in 0..za.len().min(zb.len()) {
            let n = idx + 1;
            // s decreases in L, so the smaller frequency sits at l_b
            if 2.0 * PI * n as f64 / l_b > cfg.t_max {
                continue;
            }
            if za[idx] == 0.0 || za[idx].signum() != zb[idx].signum() {
                brackets.push((n, l_a, l_b, za[idx]));
            }
        }
    }

    let mut dips = brackets
        .par_iter()
        .map(|&(n, l_a, l_b, z_a)| refine_dip(n, l_a, l_b, z_a, eval))
        .collect::<Result<Vec<_>>>()?;
    dips.retain(|d| d.s <= cfg.t_max);
    dips.sort_by(|a, b| a.l_star.total_cmp(&b.l_star));
    dips.dedup_by(|a, b| a.n == b.n && (a.l_star - b.l_star).abs() < 1e-12);

    let rows_evaluated = per_point.iter().map(|p| p.1.len()).sum();
    let profile = grid
        .iter()
        .zip(&per_point)
        .map(|(&l, p)| (l, p.0))
        .collect();
    let dip_count = dips.len();
    Ok(ScanResult {
        grid: profile,
        dips,
        runtime_stats: RuntimeStats {
            grid_points: grid.len(),
            rows_evaluated,
            dips: dip_count,
            threads: rayon::current_num_threads(),
            elapsed_seconds: started.elapsed().as_secs_f64(),
        },
    })
}

/// Bisection on `L -> Z(2πn/L)` over `[l_a, l_b]`, with `Z` of sign
/// `sign(z_a)` at `l_a`.
fn refine_dip(n: usize, l_a: f64, l_b: f64, z_a: f64, eval: &EvalConfig) -> Result<Dip> {
    let z_at = |l: f64| riemann_siegel_z(2.0 * PI * n as f64 / l, eval);
    let (mut lo, mut hi) = (l_a, l_b);
    let sign_lo = z_a.signum();
    let mut widths = vec![hi - lo];
    let mut best = (lo, z_a.abs());
    if z_a != 0.0 {
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let z = z_at(mid)?;
            if z.abs() < best.1 {
                best = (mid, z.abs());
            }
            if z == 0.0 {
                hi = mid;
                widths.push(0.0);
                break;
            }
            if z.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            widths.push(hi - lo);
        }
        let z_hi = z_at(hi)?.abs();
        if z_hi < best.1 {
            best = (hi, z_hi);
        }
    }
    let l_star = best.0;
    Ok(Dip {
        l_star,
        n: n as i64,
        s: 2.0 * PI * n as f64 / l_star,
        matched_zero: None,
        distance: None,
        bracket_widths: widths,
        final_abs_z: best.1,
    })
}

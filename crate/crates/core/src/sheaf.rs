//! Global sections over the scaling site, Whitney ideal membership and jets.
//!
//! An `N^×`-invariant family of circle functions is determined by its two
//! components `f_±(L) = ξ^(L, ±1)`; conversely
//! `ξ^(L, n) = |n|^{-1/2} f_{sign n}(L / |n|)` and `ξ^(L, 0) = 0`.
//! Sections are stored as samples on an increasing grid of lengths.
//!
//! Membership in the closed ideal generated by `g` is decided by Whitney's
//! criterion: at each zero `L_k` of order `m_k`, the jets of `f` through
//! order `m_k - 1` must vanish. Jets of sampled sections come from
//! Fornberg finite-difference weights on nodes clustered around `L_k`.
//!
//! The scaling action is `f_±(L) -> λ^{∓2πi/L} f_±(L)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::operators::CircleFunction;
use crate::specfun::{central_difference, richardson, zeta_critical, EvalConfig, ZetaZero};

/// Grid points per decade of the geometric part of [`section_grid`].
pub const POINTS_PER_DECADE: usize = 64;

/// Relative spacing of the nodes clustered around each zero.
pub const CLUSTER_STEP: f64 = 1e-3;

/// Nodes on each side of a zero in its cluster.
pub const CLUSTER_HALF_WIDTH: usize = 3;

/// Default vanishing-order certificate near `L = 0`.
pub const DEFAULT_VANISHING_ORDER: u32 = 6;

/// Largest ratio of neighbouring grid points accepted for interpolation.
pub const MAX_GRID_RATIO: f64 = 1.1;

/// Radius, relative to `L_k`, of the window that sets jet scales.
const SCALE_WINDOW: f64 = 0.05;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Which component of a section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Plus,
    Minus,
}

impl Slot {
    pub fn sign(self) -> f64 {
        match self {
            Slot::Plus => 1.0,
            Slot::Minus => -1.0,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Plus => "plus",
            Slot::Minus => "minus",
        })
    }
}

/// Geometric grid with [`POINTS_PER_DECADE`] points per decade over
/// `[2π/t_max, l_max]`, plus every `n L_k <= l_max` for `n <= multiples`
/// and a cluster of nodes `L_k (1 + j CLUSTER_STEP)` around each `L_k`.
pub fn section_grid(t_max: f64, l_max: f64, zero_lengths: &[f64], multiples: usize) -> Result<Vec<f64>> {
    let l_min = 2.0 * PI / t_max;
    if !(t_max > 0.0) || !(l_max > l_min) {
        return Err(Error::InvalidArgument(format!(
            "section grid needs 2π/t_max < l_max, got t_max = {t_max}, l_max = {l_max}"
        )));
    }
    let ratio = 10f64.powf(1.0 / POINTS_PER_DECADE as f64);
    let mut special = Vec::new();
    for &lk in zero_lengths {
        for n in 1..=multiples.max(1) {
            let l = n as f64 * lk;
            if l >= l_min && l <= l_max {
                special.push(l);
            }
        }
        for j in 1..=CLUSTER_HALF_WIDTH {
            for sign in [-1.0, 1.0] {
                let l = lk * (1.0 + sign * j as f64 * CLUSTER_STEP);
                if l >= l_min && l <= l_max {
                    special.push(l);
                }
            }
        }
    }
    special.sort_by(f64::total_cmp);
    let gap = 0.3 * (ratio - 1.0);
    let mut grid = special.clone();
    let mut l = l_min;
    while l <= l_max * (1.0 + 1e-12) {
        let x = l.min(l_max);
        let idx = special.partition_point(|&s| s < x);
        let near = [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter_map(|i| special.get(i))
            .any(|&s| (s - x).abs() < gap * x);
        if !near {
            grid.push(x);
        }
        l *= ratio;
    }
    if grid.last().is_none_or(|&g| g < l_max) {
        grid.push(l_max);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs());
    Ok(grid)
}

/// `(f_+, f_-)` sampled on an increasing grid of lengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SectionWire", try_from = "SectionWire")]
pub struct GlobalSection {
    grid: Vec<f64>,
    f_plus: Vec<Complex64>,
    f_minus: Vec<Complex64>,
    vanishing_order_at_zero: u32,
}

#[derive(Serialize, Deserialize)]
struct SectionWire {
    grid: Vec<f64>,
    f_plus: Vec<[f64; 2]>,
    f_minus: Vec<[f64; 2]>,
    #[serde(default = "default_order")]
    vanishing_order_at_zero: u32,
}

fn default_order() -> u32 {
    DEFAULT_VANISHING_ORDER
}

fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl From<GlobalSection> for SectionWire {
    fn from(s: GlobalSection) -> Self {
        Self {
            f_plus: to_pairs(&s.f_plus),
            f_minus: to_pairs(&s.f_minus),
            grid: s.grid,
            vanishing_order_at_zero: s.vanishing_order_at_zero,
        }
    }
}

impl TryFrom<SectionWire> for GlobalSection {
    type Error = Error;

    fn try_from(w: SectionWire) -> Result<Self> {
        let mut s = GlobalSection::new(w.grid, from_pairs(&w.f_plus), from_pairs(&w.f_minus))?;
        s.vanishing_order_at_zero = w.vanishing_order_at_zero;
        Ok(s)
    }
}

impl GlobalSection {
    pub fn new(grid: Vec<f64>, f_plus: Vec<Complex64>, f_minus: Vec<Complex64>) -> Result<Self> {
        if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "section grid must be positive and strictly increasing".into(),
            ));
        }
        if f_plus.len() != grid.len() || f_minus.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "section has {} grid points but {} / {} samples",
                grid.len(),
                f_plus.len(),
                f_minus.len()
            )));
        }
        if f_plus
            .iter()
            .chain(&f_minus)
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidArgument("non-finite section sample".into()));
        }
        Ok(Self {
            grid,
            f_plus,
            f_minus,
            vanishing_order_at_zero: DEFAULT_VANISHING_ORDER,
        })
    }

    /// Samples `f_±` on `grid`.
    pub fn from_fns<P, M>(grid: Vec<f64>, f_plus: P, f_minus: M) -> Result<Self>
    where
        P: Fn(f64) -> Complex64,
        M: Fn(f64) -> Complex64,
    {
        let fp = grid.iter().map(|&l| f_plus(l)).collect();
        let fm = grid.iter().map(|&l| f_minus(l)).collect();
        Self::new(grid, fp, fm)
    }

    pub fn zero(grid: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![c0(); n], vec![c0(); n])
    }

    pub fn with_vanishing_order(mut self, order: u32) -> Self {
        self.vanishing_order_at_zero = order;
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn f_plus(&self) -> &[Complex64] {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &[Complex64] {
        &self.f_minus
    }

    pub fn samples(&self, slot: Slot) -> &[Complex64] {
        match slot {
            Slot::Plus => &self.f_plus,
            Slot::Minus => &self.f_minus,
        }
    }

    pub fn vanishing_order_at_zero(&self) -> u32 {
        self.vanishing_order_at_zero
    }

    /// `max |f_±(L)| / L^k` over the lowest decade of the grid, with `k`
    /// the vanishing-order certificate.
    pub fn vanishing_constant(&self) -> f64 {
        let top = self.grid[0] * 10.0;
        let k = self.vanishing_order_at_zero as i32;
        self.grid
            .iter()
            .enumerate()
            .take_while(|(_, &l)| l <= top)
            .map(|(i, &l)| self.f_plus[i].norm().max(self.f_minus[i].norm()) / l.powi(k))
            .fold(0.0, f64::max)
    }

    /// Index of a grid node equal to `l` up to relative `1e-12`.
    pub fn node_index(&self, l: f64) -> Option<usize> {
        let idx = self.grid.partition_point(|&g| g < l * (1.0 - 1e-12));
        self.grid
            .get(idx)
            .filter(|&&g| (g - l).abs() <= 1e-12 * l)
            .map(|_| idx)
    }

    fn check_resolution(&self) -> Result<()> {
        if self.grid.len() < 4 {
            return Err(Error::UnderResolvedGrid(format!(
                "{} points, need at least 4 for cubic interpolation",
                self.grid.len()
            )));
        }
        if let Some(w) = self.grid.windows(2).find(|w| w[1] / w[0] > MAX_GRID_RATIO) {
            return Err(Error::UnderResolvedGrid(format!(
                "gap between {} and {} exceeds ratio {MAX_GRID_RATIO}",
                w[0], w[1]
            )));
        }
        Ok(())
    }

    /// Cubic Lagrange interpolation of `f_slot` at `l`. Exact at nodes;
    /// zero below the grid, where sections vanish; an error above it.
    pub fn interpolate(&self, slot: Slot, l: f64) -> Result<Complex64> {
        let values = self.samples(slot);
        let g = &self.grid;
        if l < g[0] * (1.0 - 1e-12) {
            return Ok(c0());
        }
        if l > g[g.len() - 1] * (1.0 + 1e-12) {
            return Err(Error::UnderResolvedGrid(format!(
                "L = {l} lies beyond the grid end {}",
                g[g.len() - 1]
            )));
        }
        if let Some(i) = self.node_index(l) {
            return Ok(values[i]);
        }
        let idx = g.partition_point(|&x| x < l);
        let start = idx.saturating_sub(2).min(g.len().saturating_sub(4));
        let nodes = &g[start..(start + 4).min(g.len())];
        let mut acc = c0();
        for (i, &xi) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (j, &xj) in nodes.iter().enumerate() {
                if i != j {
                    w *= (l - xj) / (xi - xj);
                }
            }
            acc += values[start + i] * w;
        }
        Ok(acc)
    }

    /// `ξ^(L, n) = |n|^{-1/2} f_{sign n}(L/|n|)`, `ξ^(L, 0) = 0`.
    pub fn coefficient(&self, l: f64, n: i64) -> Result<Complex64> {
        if n == 0 {
            return Ok(c0());
        }
        let slot = if n > 0 { Slot::Plus } else { Slot::Minus };
        let m = n.unsigned_abs() as f64;
        Ok(self.interpolate(slot, l / m)? / m.sqrt())
    }

    /// The circle function at length `l` with modes `|n| <= modes`.
    pub fn circle_at(&self, l: f64, modes: usize) -> Result<CircleFunction> {
        self.check_resolution()?;
        let n = modes as i64;
        let coeffs = (-n..=n)
            .map(|k| self.coefficient(l, k))
            .collect::<Result<Vec<_>>>()?;
        CircleFunction::new(l, modes, coeffs)
    }
}

/// One circle function per grid length, rebuilt from `(f_+, f_-)`.
pub fn gamma_inverse(section: &GlobalSection, modes: usize) -> Result<Vec<CircleFunction>> {
    section.check_resolution()?;
    section
        .grid
        .par_iter()
        .map(|&l| section.circle_at(l, modes))
        .collect()
}

/// `(ξ^(L, 1), ξ^(L, -1))` at every length, the inverse of [`gamma_inverse`].
pub fn gamma(circles: &[CircleFunction]) -> Result<GlobalSection> {
    let grid = circles.iter().map(CircleFunction::length).collect();
    let fp = circles.iter().map(|c| c.coeff(1)).collect();
    let fm = circles.iter().map(|c| c.coeff(-1)).collect();
    GlobalSection::new(grid, fp, fm)
}

/// `max_{0 < |k| <= modes} |n^{1/2} ξ^(nL, nk) - ξ^(L, k)|`, the defect of
/// invariance under the covering `σ_n`. Only modes `nk` are read at `nL`, so
/// `nL` may exceed the grid.
pub fn covering_residual(section: &GlobalSection, l: f64, n: usize, modes: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("covering degree must be at least 1".into()));
    }
    let root = (n as f64).sqrt();
    let mut worst = 0.0f64;
    for k in 1..=modes as i64 {
        for k in [k, -k] {
            let lifted = section.coefficient(n as f64 * l, n as i64 * k)? * root;
            worst = worst.max((lifted - section.coefficient(l, k)?).norm());
        }
    }
    Ok(worst)
}

/// Multiplier `λ^{∓2πi/L}` of the scaling action on slot `±`.
pub fn theta_section_multiplier(lambda: f64, l: f64, slot: Slot) -> Complex64 {
    Complex64::from_polar(1.0, -slot.sign() * 2.0 * PI * lambda.ln() / l)
}

/// `f_±(L) -> λ^{∓2πi/L} f_±(L)`.
pub fn theta_on_sections(lambda: f64, section: &GlobalSection) -> Result<GlobalSection> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be positive, got {lambda}")));
    }
    let apply = |slot: Slot| -> Vec<Complex64> {
        section
            .grid
            .iter()
            .zip(section.samples(slot))
            .map(|(&l, &v)| v * theta_section_multiplier(lambda, l, slot))
            .collect()
    };
    let mut out = GlobalSection::new(section.grid.clone(), apply(Slot::Plus), apply(Slot::Minus))?;
    out.vanishing_order_at_zero = section.vanishing_order_at_zero;
    Ok(out)
}

/// Fornberg weights: `weights[k][i]` multiplies `f(nodes[i])` in the
/// approximation of `f^{(k)}(x0)`, for `k <= order`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Jets `f^{(j)}(L_k)`, `j < count`, of one slot of a sampled section,
/// with the scale `M / r^j` each jet is compared against (`M` the largest
/// sample within `r = 0.05 L_k`).
fn section_jets(
    section: &GlobalSection,
    slot: Slot,
    idx: usize,
    count: usize,
) -> (Vec<Complex64>, Vec<f64>) {
    let g = &section.grid;
    let values = section.samples(slot);
    let lk = g[idx];
    let half = CLUSTER_HALF_WIDTH;
    let lo = idx.saturating_sub(half).min(g.len().saturating_sub(2 * half + 1));
    let hi = (lo + 2 * half + 1).min(g.len());
    let weights = fornberg_weights(lk, &g[lo..hi], count.saturating_sub(1));
    let jets = (0..count)
        .map(|k| {
            weights[k]
                .iter()
                .zip(&values[lo..hi])
                .map(|(&w, &v)| v * w)
                .sum()
        })
        .collect();
    let r = SCALE_WINDOW * lk;
    let local = g
        .iter()
        .zip(values)
        .filter(|(&l, _)| (l - lk).abs() <= r)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let scales = (0..count).map(|k| local / r.powi(k as i32)).collect();
    (jets, scales)
}

/// Jets `f^{(j)}(l)`, `j <= order <= 4`, of an evaluator by central
/// differences with Richardson extrapolation from step `h0`.
pub fn evaluator_jets<F>(f: F, l: f64, order: usize, h0: f64) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let g = |x: f64| -> Result<Complex64> { Ok(f(x)) };
    let mut jets = vec![f(l)];
    for k in 1..=order {
        jets.push(richardson(|h| central_difference(&g, l, k, h), h0, 6)?);
    }
    Ok(jets)
}

/// Jets of one slot at one zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetEntry {
    pub t_k: f64,
    #[serde(rename = "L_k")]
    pub l_k: f64,
    pub slot: Slot,
    pub jets: Vec<Complex64>,
    /// Magnitude each jet is compared against.
    pub scales: Vec<f64>,
}

/// The class of a section in the quotient by the ideal: its jets at the
/// zeros, through order `m_k - 1`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JetVector {
    pub entries: Vec<JetEntry>,
}

impl JetVector {
    /// Every jet is below `tol` times its scale.
    pub fn is_annihilated(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| {
            e.jets
                .iter()
                .zip(&e.scales)
                .all(|(j, &s)| j.norm() <= tol * s)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.jets.iter())
            .map(|j| j.norm())
            .fold(0.0, f64::max)
    }

    pub fn entry(&self, t_k: f64, slot: Slot) -> Option<&JetEntry> {
        self.entries
            .iter()
            .find(|e| e.slot == slot && (e.t_k - t_k).abs() <= 1e-12 * t_k)
    }

    /// CSV `t_k,L_k,slot,order,jet_re,jet_im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_k,L_k,slot,order,jet_re,jet_im\n");
        for e in &self.entries {
            for (order, j) in e.jets.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    sig15(e.t_k),
                    sig15(e.l_k),
                    e.slot,
                    order,
                    sig15(j.re),
                    sig15(j.im)
                ));
            }
        }
        out
    }
}

/// Jets of `f_+` and `f_-` at every `L_k = 2π/t_k` through order `m_k - 1`.
/// Each `L_k` must be a grid node.
pub fn quotient_jets(section: &GlobalSection, zeros: &[ZetaZero]) -> Result<JetVector> {
    let mut entries = Vec::with_capacity(2 * zeros.len());
    for z in zeros {
        let lk = 2.0 * PI / z.ordinate;
        let idx = section.node_index(lk).ok_or_else(|| {
            Error::UnderResolvedGrid(format!("L_k = 2π/{} is not a grid node", z.ordinate))
        })?;
        let count = z.multiplicity as usize;
        for slot in [Slot::Plus, Slot::Minus] {
            let (jets, scales) = section_jets(section, slot, idx, count);
            entries.push(JetEntry {
                t_k: z.ordinate,
                l_k: section.grid[idx],
                slot,
                jets,
                scales,
            });
        }
    }
    Ok(JetVector { entries })
}

/// Kind of an ideal generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `zeta_+(L) = zeta(1/2 - 2πi/L)`.
    ZetaPlus,
    /// `zeta_-(L) = zeta(1/2 + 2πi/L)`.
    ZetaMinus,
    /// `c (L - L_0)^m (1 + (L - L_0)²)`.
    Synthetic,
}

type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A generator of a closed ideal together with its zeros `(L_k, m_k)`.
#[derive(Clone)]
pub struct IdealGenerator {
    pub kind: GeneratorKind,
    pub zeros: Vec<(f64, u32)>,
    evaluator: ComplexFn,
}

impl fmt::Debug for IdealGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdealGenerator")
            .field("kind", &self.kind)
            .field("zeros", &self.zeros)
            .finish()
    }
}

impl IdealGenerator {
    fn zeta(kind: GeneratorKind, zeros: &[ZetaZero], cfg: &EvalConfig) -> Self {
        let sign = if kind == GeneratorKind::ZetaPlus { -1.0 } else { 1.0 };
        let cfg = cfg.clone();
        Self {
            kind,
            zeros: zeros
                .iter()
                .map(|z| (2.0 * PI / z.ordinate, z.multiplicity))
                .collect(),
            evaluator: Arc::new(move |l| {
                zeta_critical(sign * 2.0 * PI / l, &cfg).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }),
        }
    }

    pub fn zeta_plus(zeros: &[ZetaZero], cfg: &EvalConfig) -> Self {
        Self::zeta(GeneratorKind::ZetaPlus, zeros, cfg)
    }

    pub fn zeta_minus(zeros: &[ZetaZero], cfg: &EvalConfig) -> Self {
        Self::zeta(GeneratorKind::ZetaMinus, zeros, cfg)
    }

    /// `scale (L - l0)^order (1 + (L - l0)²)`.
    pub fn synthetic(l0: f64, order: u32, scale: f64) -> Self {
        Self {
            kind: GeneratorKind::Synthetic,
            zeros: vec![(l0, order)],
            evaluator: Arc::new(move |l| {
                let d = l - l0;
                Complex64::new(scale * d.powi(order as i32) * (1.0 + d * d), 0.0)
            }),
        }
    }

    pub fn eval(&self, l: f64) -> Complex64 {
        (self.evaluator)(l)
    }

    /// Checks by finite differences that the generator vanishes to exactly
    /// order `m_k` at each `L_k`, relative to `tol`.
    pub fn check_orders(&self, tol: f64) -> Result<()> {
        for &(lk, m) in &self.zeros {
            let h0 = 0.02 * lk;
            let jets = evaluator_jets(|l| self.eval(l), lk, m as usize, h0)?;
            let scales = local_scales(|l| self.eval(l), lk, m as usize + 1);
            for (j, (v, s)) in jets.iter().zip(&scales).enumerate() {
                let small = v.norm() <= tol * s;
                if (j < m as usize) != small {
                    return Err(Error::InvalidArgument(format!(
                        "generator jet of order {j} at L = {lk} is {:e} against scale {s:e}",
                        v.norm()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `M / r^j` with `M` the largest `|f|` at `l_k` and `l_k ± r`,
/// `r = 0.05 l_k`.
fn local_scales<F: Fn(f64) -> Complex64>(f: F, lk: f64, count: usize) -> Vec<f64> {
    let r = SCALE_WINDOW * lk;
    let m = [lk - r, lk - 0.5 * r, lk, lk + 0.5 * r, lk + r]
        .into_iter()
        .map(|x| f(x).norm())
        .fold(0.0, f64::max);
    (0..count).map(|k| m / r.powi(k as i32)).collect()
}

/// A jet that fails to vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(rename = "L_k")]
    pub l_k: f64,
    pub order: usize,
    pub jet: Complex64,
    pub scale: f64,
}

/// Verdict of [`ideal_membership`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<Violation>,
}

/// Whitney's criterion: `f` lies in the closed ideal of `g` iff its jets
/// through order `m_k - 1` vanish at every zero `(L_k, m_k)` of `g`, each
/// within `tol` times its local scale.
pub fn ideal_membership<F>(f: F, g: &IdealGenerator, tol: f64) -> Result<Membership>
where
    F: Fn(f64) -> Complex64,
{
    for &(lk, m) in &g.zeros {
        if m == 0 {
            continue;
        }
        let order = m as usize - 1;
        let jets = evaluator_jets(&f, lk, order, 0.02 * lk)?;
        let scales = local_scales(&f, lk, m as usize);
        for (j, (v, &s)) in jets.iter().zip(&scales).enumerate() {
            if v.norm() > tol * s {
                return Ok(Membership {
                    member: false,
                    witness: Some(Violation {
                        l_k: lk,
                        order: j,
                        jet: *v,
                        scale: s,
                    }),
                });
            }
        }
    }
    Ok(Membership {
        member: true,
        witness: None,
    })
}

/// The scaling action on order-2 jets at a double zero `L_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock {
    pub lambda: f64,
    pub l0: f64,
    /// `s = 2π/L_0`.
    pub s: f64,
    /// `λ^{-is}`.
    pub eigenvalue: Complex64,
    /// Action on `(f(L_0), f'(L_0))` read off sampled sections.
    pub matrix: Matrix2<Complex64>,
    /// `N(λ)` with `(2πi ln λ / L_0²)` below the diagonal.
    pub nilpotent: Matrix2<Complex64>,
    /// `max |matrix - λ^{-is}(I + N)|`.
    pub residual: f64,
}

/// Symbolic `N(λ)` at `L_0`.
pub fn jordan_nilpotent(lambda: f64, l0: f64) -> Matrix2<Complex64> {
    let coupling = Complex64::new(0.0, 2.0 * PI * lambda.ln() / (l0 * l0));
    Matrix2::new(c0(), c0(), coupling, c0())
}

/// Applies `ϑ(λ)` to the sections `1` and `L - L_0` (the jet basis at a
/// double zero of `g`) and reads the resulting jets with the sampled-section
/// stencil. The result is compared with `λ^{-is}(I + N(λ))`.
pub fn jordan_structure(lambda: f64, g: &IdealGenerator) -> Result<JordanBlock> {
    let &(l0, m) = g
        .zeros
        .first()
        .ok_or_else(|| Error::InvalidArgument("generator has no zeros".into()))?;
    if m != 2 || g.kind != GeneratorKind::Synthetic {
        return Err(Error::InvalidArgument(
            "Jordan structure needs a synthetic generator with a double zero".into(),
        ));
    }
    let grid = section_grid(2.0 * PI / (0.5 * l0), 2.0 * l0, &[l0], 1)?;
    let basis = [
        GlobalSection::from_fns(grid.clone(), |_| Complex64::new(1.0, 0.0), |_| c0())?,
        GlobalSection::from_fns(grid, |l| Complex64::new(l - l0, 0.0), |_| c0())?,
    ];
    let mut matrix = Matrix2::zeros();
    for (col, section) in basis.iter().enumerate() {
        let moved = theta_on_sections(lambda, section)?;
        let idx = moved
            .node_index(l0)
            .ok_or_else(|| Error::UnderResolvedGrid("L_0 missing from its grid".into()))?;
        let (jets, _) = section_jets(&moved, Slot::Plus, idx, 2);
        matrix[(0, col)] = jets[0];
        matrix[(1, col)] = jets[1];
    }
    let s = 2.0 * PI / l0;
    let eigenvalue = Complex64::from_polar(1.0, -s * lambda.ln());
    let nilpotent = jordan_nilpotent(lambda, l0);
    let expected = (Matrix2::identity() + nilpotent) * eigenvalue;
    let residual = (matrix - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(JordanBlock {
        lambda,
        l0,
        s,
        eigenvalue,
        matrix,
        nilpotent,
        residual,
    })
}

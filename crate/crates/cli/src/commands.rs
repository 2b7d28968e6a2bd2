//! Subcommand bodies. Each returns whether its assertions held.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use zeta_cycles::cycles::{self, complement_spectrum, detect, MATCH_WINDOW};
use zeta_cycles::laplacian::{negativity_report, report_csv};
use zeta_cycles::operators::{fourier_closed, fourier_direct, trace_identity_check};
use zeta_cycles::schwartz::{family, mellin_psi, mellin_psi_quadrature, TestFunction};
use zeta_cycles::sheaf::quotient_jets;
use zeta_cycles::zero_cache::{self, meta_path, CacheAction, CacheMeta};
use zeta_cycles::{Complex64, CycleReport, EvalConfig, GlobalSection, ScanConfig, ZetaZero};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// What a command reports back to `main`.
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T, path: &Path) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    s.push('\n');
    Ok(s)
}

fn out_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

#[derive(Serialize)]
struct Runtime<'a, T: Serialize> {
    command: &'a str,
    threads: usize,
    elapsed_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<T>,
}

fn write_runtime<T: Serialize>(cfg: &RunConfig, command: &str, started: Instant, details: Option<T>) -> CliResult<()> {
    let path = out_path(cfg, "runtime.json");
    let runtime = Runtime {
        command,
        threads: rayon::current_num_threads(),
        elapsed_seconds: started.elapsed().as_secs_f64(),
        details,
    };
    write(&path, &to_json(&runtime, &path)?)
}

/// Cached zeros up to `t_max`; the cache must already cover that range.
pub fn cached_zeros(cfg: &RunConfig) -> CliResult<Vec<ZetaZero>> {
    let path = &cfg.cache_path;
    let meta_file = meta_path(path);
    if !path.exists() || !meta_file.exists() {
        return Err(CliError::MissingCache { path: path.clone() });
    }
    let text = fs::read_to_string(&meta_file).map_err(|e| CliError::io(&meta_file, e))?;
    let meta: CacheMeta = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: meta_file.clone(),
        source,
    })?;
    if meta.t_max < cfg.t_max {
        return Err(CliError::ShortCache {
            path: path.clone(),
            covered: meta.t_max,
            needed: cfg.t_max,
        });
    }
    let zeros = zero_cache::load(path)?;
    Ok(zeros.into_iter().filter(|z| z.ordinate <= cfg.t_max).collect())
}

pub fn zeros(cfg: &RunConfig) -> CliResult<Outcome> {
    let (zeros, action) = zero_cache::ensure(&cfg.cache_path, cfg.t_max, &EvalConfig::default())?;
    let verb = match action {
        CacheAction::Created => "created",
        CacheAction::Extended => "extended",
        CacheAction::Reused => "reused",
    };
    Ok(Outcome {
        passed: true,
        summary: format!(
            "{verb} {}: {} zeros with t <= {}",
            cfg.cache_path.display(),
            zeros.len(),
            cfg.t_max
        ),
    })
}

pub fn scan(cfg: &RunConfig) -> CliResult<Outcome> {
    let started = Instant::now();
    let zeros = cached_zeros(cfg)?;
    let fam = family(&cfg.family_ks)?;
    let mut sc = ScanConfig::new(cfg.l_window.0, cfg.l_window.1, cfg.scan_step);
    sc.t_max = cfg.t_max;
    sc.tol = cfg.tol;
    let mut result = cycles::scan(&sc, &fam)?;
    result.match_zeros(&zeros);
    let passed = result.all_matched(MATCH_WINDOW);

    let dips_path = out_path(cfg, "dips.json");
    let dips_json = to_json(&result.dips, &dips_path)?;
    write(&out_path(cfg, "scan_profile.csv"), &result.profile_csv())?;
    write(&dips_path, &dips_json)?;
    write_runtime(cfg, "scan", started, Some(&result.runtime_stats))?;

    let unmatched = result
        .dips
        .iter()
        .filter(|d| !d.distance.is_some_and(|x| x <= MATCH_WINDOW))
        .count();
    Ok(Outcome {
        passed,
        summary: format!(
            "{} grid points, {} dips, {unmatched} unmatched",
            result.grid.len(),
            result.dips.len()
        ),
    })
}

#[derive(Serialize)]
struct DetectOutput<'a> {
    report: &'a CycleReport,
    /// Frequencies of the flagged modes, truncated at `t_max`.
    truncated_complement_spectrum: Vec<f64>,
}

pub fn detect_at(cfg: &RunConfig, length: f64) -> CliResult<Outcome> {
    let started = Instant::now();
    let zeros = cached_zeros(cfg)?;
    let fam = family(&cfg.family_ks)?;
    let mut report = detect(length, &fam, cfg.t_max, cfg.tol, &EvalConfig::default())?;
    report.match_zeros(&zeros);
    let spectrum = complement_spectrum(&report).unwrap_or_default();
    let passed = report.all_matched(MATCH_WINDOW);

    let path = out_path(cfg, "detect.json");
    let out = DetectOutput {
        report: &report,
        truncated_complement_spectrum: spectrum,
    };
    write(&path, &to_json(&out, &path)?)?;
    write_runtime::<()>(cfg, "detect", started, None)?;
    Ok(Outcome {
        passed,
        summary: format!(
            "L = {length}: verdict {}, flagged {:?}",
            report.verdict, report.flagged
        ),
    })
}

#[derive(Serialize)]
struct Check {
    name: String,
    residual: f64,
    threshold: f64,
    passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            threshold,
            passed: residual <= threshold,
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    checks: Vec<Check>,
}

fn fourier_check(fam: &[TestFunction]) -> CliResult<f64> {
    let cfg = EvalConfig::default();
    let mut worst = 0.0f64;
    for f in fam {
        for l in [0.8, 1.0, 4f64.ln()] {
            let closed = fourier_closed(f, l, 32, &cfg)?;
            let direct = fourier_direct(f, l, 32)?;
            worst = worst.max(closed.max_abs_diff(&direct) / closed.max_abs());
        }
    }
    Ok(worst)
}

fn trace_check(fam: &[TestFunction]) -> CliResult<f64> {
    // log-spaced u in [0.1, 10], cycling through the family
    let mut worst = 0.0f64;
    for i in 0..100 {
        let u = 0.1 * 100f64.powf((i as f64 + 0.5) / 100.0);
        worst = worst.max(trace_identity_check(&fam[i % fam.len()], u)?);
    }
    Ok(worst)
}

fn mellin_checks(fam: &[TestFunction]) -> CliResult<(f64, f64, f64)> {
    let half = Complex64::new(0.0, 0.5);
    let (mut vanish, mut agree, mut lifted) = (0.0f64, 0.0f64, 0.0f64);
    for f in fam {
        vanish = vanish
            .max(mellin_psi(f, half)?.psi.norm())
            .max(mellin_psi_quadrature(f, half)?.psi.norm());
        let poly = f.poly().expect("family members are Gaussian polynomials");
        let generator = poly.apply_h_lifted();
        for j in 0..50 {
            let z = Complex64::new(-40.0 + 80.0 * (j as f64 + 0.5) / 50.0, 0.0);
            let closed = mellin_psi(f, z)?.psi;
            agree = agree.max((closed - mellin_psi_quadrature(f, z)?.psi).norm());
            let rhs = Complex64::i() * z * closed;
            let lhs = generator.mellin_closed(z)?;
            lifted = lifted.max((lhs - rhs).norm());
        }
    }
    Ok((vanish, agree, lifted))
}

pub fn verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let started = Instant::now();
    let fam = family(&cfg.family_ks)?;
    let (vanish, agree, lifted) = mellin_checks(&fam)?;
    let checks = vec![
        Check::new("fourier_direct_vs_closed", fourier_check(&fam)?, 1e-6),
        Check::new("trace_identity", trace_check(&fam)?, 1e-14),
        Check::new("mellin_vanishing_at_i_over_2", vanish, 1e-9),
        Check::new("mellin_closed_vs_quadrature", agree, 1e-9),
        Check::new("mellin_conjugation_lifted_generator", lifted, 1e-9),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let path = out_path(cfg, "verify.json");
    write(&path, &to_json(&VerifyReport { passed, checks }, &path)?)?;
    write_runtime::<()>(cfg, "verify", started, None)?;
    Ok(Outcome {
        passed,
        summary: if passed {
            "all identity checks passed".into()
        } else {
            format!("failed: {}", failed.join(", "))
        },
    })
}

pub fn laplacian(cfg: &RunConfig) -> CliResult<Outcome> {
    let started = Instant::now();
    let zeros = cached_zeros(cfg)?;
    let report = negativity_report(&zeros);
    let passed = report.iter().all(|q| q.negativity_ok());
    write(&out_path(cfg, "laplacian.csv"), &report_csv(&report))?;
    write_runtime::<()>(cfg, "laplacian", started, None)?;
    Ok(Outcome {
        passed,
        summary: format!(
            "{} eigenvalues, {} negative",
            report.len(),
            report.iter().filter(|q| q.negativity_ok()).count()
        ),
    })
}

pub fn jets(cfg: &RunConfig, section_file: &Path) -> CliResult<Outcome> {
    let started = Instant::now();
    let zeros = cached_zeros(cfg)?;
    let text = fs::read_to_string(section_file).map_err(|e| CliError::io(section_file, e))?;
    let section: GlobalSection = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: section_file.to_path_buf(),
        source,
    })?;
    // zeros whose length 2π/t falls outside the section grid carry no jets
    let (lo, hi) = (section.grid()[0], section.grid()[section.grid().len() - 1]);
    let inside: Vec<ZetaZero> = zeros
        .into_iter()
        .filter(|z| (lo..=hi).contains(&(2.0 * PI / z.ordinate)))
        .collect();
    let jets = quotient_jets(&section, &inside)?;
    write(&out_path(cfg, "jets.csv"), &jets.to_csv())?;
    write_runtime::<()>(cfg, "jets", started, None)?;
    Ok(Outcome {
        passed: true,
        summary: format!(
            "{} zeros, max |jet| = {:e}, annihilated: {}",
            inside.len(),
            jets.max_abs(),
            jets.is_annihilated(1e-6)
        ),
    })
}

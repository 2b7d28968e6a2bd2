//! Run configuration: a flat `key = value` file overridden by flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use zeta_cycles::cycles::{DEFAULT_TOL, DEFAULT_T_MAX};
use zeta_cycles::schwartz::MAX_SEED;

use crate::error::{CliError, CliResult};

pub const CACHE_DIR_ENV: &str = "ZETA_CYCLES_CACHE_DIR";
pub const CACHE_FILE: &str = "zeros.csv";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub t_max: f64,
    pub tol: f64,
    pub family_ks: Vec<usize>,
    #[serde(rename = "L_window")]
    pub l_window: (f64, f64),
    pub scan_step: f64,
    pub cache_path: PathBuf,
    pub output_dir: PathBuf,
    /// 0 lets the pool pick.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t_max: DEFAULT_T_MAX,
            tol: DEFAULT_TOL,
            family_ks: vec![0, 1, 2],
            l_window: (0.3, 1.5),
            scan_step: 1e-3,
            cache_path: PathBuf::from("cache").join(CACHE_FILE),
            output_dir: PathBuf::from("out"),
            threads: 0,
        }
    }
}

/// Values given on the command line; each one wins over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub t_max: Option<f64>,
    pub tol: Option<f64>,
    pub family_ks: Option<Vec<usize>>,
    pub l_min: Option<f64>,
    pub l_max: Option<f64>,
    pub scan_step: Option<f64>,
    pub cache_path: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Defaults, then the file, then the cache-dir variable, then flags.
    pub fn resolve(
        file: Option<&Path>,
        cache_dir_env: Option<PathBuf>,
        flags: &Overrides,
    ) -> CliResult<Self> {
        let mut cfg = match file {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Self::parse(&text, path)?
            }
            None => Self::default(),
        };
        if let Some(dir) = cache_dir_env.filter(|d| !d.as_os_str().is_empty()) {
            cfg.cache_path = dir.join(CACHE_FILE);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses a config file over the defaults; `path` only labels errors.
    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| CliError::Config {
                path: path.to_path_buf(),
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "t_max" => cfg.t_max = parse_real(value).map_err(err)?,
                "tol" => cfg.tol = parse_real(value).map_err(err)?,
                "family_ks" => cfg.family_ks = parse_list(value).map_err(err)?,
                "L_window" => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(err(format!("L_window needs two reals, found `{value}`")));
                    }
                    cfg.l_window = (
                        parse_real(parts[0]).map_err(err)?,
                        parse_real(parts[1]).map_err(err)?,
                    );
                }
                "scan_step" => cfg.scan_step = parse_real(value).map_err(err)?,
                "cache_path" => cfg.cache_path = PathBuf::from(value),
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "threads" => {
                    cfg.threads = value
                        .parse()
                        .map_err(|e| err(format!("threads: {e}")))?
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.t_max {
            self.t_max = v;
        }
        if let Some(v) = o.tol {
            self.tol = v;
        }
        if let Some(v) = &o.family_ks {
            self.family_ks = v.clone();
        }
        if let Some(v) = o.l_min {
            self.l_window.0 = v;
        }
        if let Some(v) = o.l_max {
            self.l_window.1 = v;
        }
        if let Some(v) = o.scan_step {
            self.scan_step = v;
        }
        if let Some(v) = &o.cache_path {
            self.cache_path = v.clone();
        }
        if let Some(v) = &o.output_dir {
            self.output_dir = v.clone();
        }
        if let Some(v) = o.threads {
            self.threads = v;
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::InvalidConfig(m));
        for (name, v) in [("t_max", self.t_max), ("tol", self.tol), ("scan_step", self.scan_step)] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let (a, b) = self.l_window;
        if !(a > 0.0 && a < b && b.is_finite()) {
            return bad(format!("L_window needs 0 < L_min < L_max, got ({a}, {b})"));
        }
        if self.family_ks.is_empty() {
            return bad("family_ks is empty".into());
        }
        if let Some(k) = self.family_ks.iter().find(|&&k| k > MAX_SEED) {
            return bad(format!("family index {k} exceeds {MAX_SEED}"));
        }
        Ok(())
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect()
}

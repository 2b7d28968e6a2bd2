//! On-disk cache of zeta zeros.
//!
//! The cache is a CSV file with header `ordinate,multiplicity,abs_error`,
//! ordinates strictly increasing, reals written with 15 significant digits.
//! A sidecar `<name>.meta.json` records the ordinate range already searched
//! so that repeated runs reuse the file and only extend it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig15;
use crate::specfun::{find_zeros, EvalConfig, ZetaZero};

pub const HEADER: &str = "ordinate,multiplicity,abs_error";

/// Range of ordinates already searched.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub t_max: f64,
}

pub fn meta_path(cache: &Path) -> PathBuf {
    let mut name = cache
        .file_stem()
        .map(|s| s.to_os_string())
        .unwrap_or_default();
    name.push(".meta.json");
    cache.with_file_name(name)
}

pub fn to_csv(zeros: &[ZetaZero]) -> String {
    let mut out = String::with_capacity(48 * (zeros.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for z in zeros {
        out.push_str(&format!(
            "{},{},{}\n",
            sig15(z.ordinate),
            z.multiplicity,
            sig15(z.abs_error)
        ));
    }
    out
}

/// Parses cache text; `path` only labels errors.
pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<ZetaZero>> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        Some((_, h)) => return Err(err(1, format!("expected header `{HEADER}`, found `{h}`"))),
        None => return Err(err(1, "empty file".into())),
    }
    let mut zeros: Vec<ZetaZero> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        let ordinate: f64 = fields[0]
            .parse()
            .map_err(|e| err(line_no, format!("ordinate: {e}")))?;
        let multiplicity: u32 = fields[1]
            .parse()
            .map_err(|e| err(line_no, format!("multiplicity: {e}")))?;
        let abs_error: f64 = fields[2]
            .parse()
            .map_err(|e| err(line_no, format!("abs_error: {e}")))?;
        if !(ordinate > 0.0) || multiplicity == 0 || !(abs_error >= 0.0) {
            return Err(err(line_no, "values out of range".into()));
        }
        if zeros.last().is_some_and(|z| z.ordinate >= ordinate) {
            return Err(err(line_no, "ordinates must increase strictly".into()));
        }
        zeros.push(ZetaZero {
            ordinate,
            multiplicity,
            abs_error,
        });
    }
    Ok(zeros)
}

pub fn load(path: &Path) -> Result<Vec<ZetaZero>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}

/// Writes through a temporary file and a rename.
pub fn save(path: &Path, zeros: &[ZetaZero]) -> Result<()> {
    write_atomic(path, to_csv(zeros).as_bytes())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn load_meta(cache: &Path) -> Option<CacheMeta> {
    let text = fs::read_to_string(meta_path(cache)).ok()?;
    serde_json::from_str(&text).ok()
}

/// What [`ensure`] did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheAction {
    Reused,
    Extended,
    Created,
}

/// Makes the cache cover `(0, t_max]`, reusing and extending what is on
/// disk. Returns the cached zeros up to `t_max` as read back from disk.
pub fn ensure(path: &Path, t_max: f64, cfg: &EvalConfig) -> Result<(Vec<ZetaZero>, CacheAction)> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let existing = match (load_meta(path), path.exists()) {
        (Some(meta), true) => Some((meta, load(path)?)),
        _ => None,
    };
    let (zeros, action) = match existing {
        Some((meta, zeros)) if meta.t_max >= t_max => (zeros, CacheAction::Reused),
        Some((meta, mut zeros)) => {
            let last = zeros.last().map_or(0.0, |z| z.ordinate);
            for z in find_zeros(meta.t_max, t_max, cfg)? {
                if z.ordinate > last + 1e-6 {
                    zeros.push(z);
                }
            }
            save(path, &zeros)?;
            write_meta(path, t_max)?;
            (load(path)?, CacheAction::Extended)
        }
        None => {
            let zeros = find_zeros(0.0, t_max, cfg)?;
            save(path, &zeros)?;
            write_meta(path, t_max)?;
            (load(path)?, CacheAction::Created)
        }
    };
    let within = zeros.into_iter().filter(|z| z.ordinate <= t_max).collect();
    Ok((within, action))
}

fn write_meta(cache: &Path, t_max: f64) -> Result<()> {
    let json = serde_json::to_string_pretty(&CacheMeta { t_max })?;
    write_atomic(&meta_path(cache), json.as_bytes())
}

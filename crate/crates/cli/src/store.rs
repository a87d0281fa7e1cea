//! Cache directory resolution and table acquisition.

use std::path::{Path, PathBuf};

use goldbach_core::cache::{load_table, peek_n, save_table};
use goldbach_core::table::{build_table_convolution_with, build_table_direct_with};
use goldbach_core::{Error, GoldbachCountTable, PrimeTable};

use crate::args::{BuildMethod, TableArgs};
use crate::Failure;

pub const CACHE_ENV: &str = "GOLDBACH_CACHE_DIR";

/// `$GOLDBACH_CACHE_DIR`, else `$HOME/.cache/goldbach`.
pub fn cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(dir));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("goldbach"))
}

pub fn cache_path(n: u64) -> Option<PathBuf> {
    cache_dir().map(|d| d.join(format!("q2-{n}.gbq2")))
}

pub fn build(
    primes: &PrimeTable,
    n: u64,
    method: BuildMethod,
) -> Result<GoldbachCountTable, Error> {
    match method {
        BuildMethod::Direct => build_table_direct_with(primes, n),
        BuildMethod::Convolution => build_table_convolution_with(primes, n),
    }
}

/// Loads `path` if it holds a valid table for exactly `n`.
pub fn load_matching(path: &Path, n: u64) -> Option<GoldbachCountTable> {
    if peek_n(path) != Some(n) {
        return None;
    }
    match load_table(path) {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!("ignoring cache {}: {e}", path.display());
            None
        }
    }
}

pub fn save(table: &GoldbachCountTable, path: &Path) -> Result<(), Error> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    save_table(table, path)
}

/// Resolves the table for a subcommand. An explicit `--table` wins and is
/// truncated to `--n` when both are given; otherwise a cached table for `n`
/// is reused, and failing that one is built by convolution (not saved).
pub fn acquire(args: &TableArgs) -> Result<GoldbachCountTable, Failure> {
    acquire_for(args.n, args.table.as_deref())
}

pub fn acquire_for(n: Option<u64>, table: Option<&Path>) -> Result<GoldbachCountTable, Failure> {
    if let Some(path) = table {
        let t = load_table(path)?;
        return match n {
            Some(n) if n != t.n() => Ok(t.truncated(n)?),
            _ => Ok(t),
        };
    }
    let n = n.ok_or_else(|| Failure::Usage("either --n or --table is required".into()))?;
    if let Some(t) = cache_path(n).and_then(|p| load_matching(&p, n)) {
        return Ok(t);
    }
    let primes = PrimeTable::build(2 * n)?;
    Ok(build_table_convolution_with(&primes, n)?)
}

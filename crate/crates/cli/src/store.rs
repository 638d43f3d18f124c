use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qlattice::lattice::{cache_file_name, load_cache, write_cache};
use qlattice::{build_lattice, LinearLattice};

pub const DEFAULT_CACHE_DIR: &str = ".qlattice-cache";

pub fn cache_dir(flag: Option<&Path>) -> PathBuf {
    flag.map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), Path::to_path_buf)
}

/// Loads L_n(q) from the cache, building and caching it when missing or unreadable.
pub fn lattice(dir: &Path, n: usize, q: u32) -> Result<LinearLattice> {
    let path = dir.join(cache_file_name(n, q));
    if path.exists() {
        match load_cache(&path) {
            Ok(l) if l.n() == n && l.q() == q => return Ok(l),
            Ok(_) => eprintln!("warning: {} holds a different lattice, rebuilding", path.display()),
            Err(e) => eprintln!("warning: ignoring cache {}: {e}", path.display()),
        }
    }
    let l = build_lattice(n, q)?;
    if let Err(e) = write_cache(&l, dir) {
        eprintln!("warning: could not write cache in {}: {e}", dir.display());
    }
    Ok(l)
}

/// Builds L_n(q) afresh and (re)writes its cache file.
pub fn build(dir: &Path, n: usize, q: u32) -> Result<(LinearLattice, PathBuf)> {
    let l = build_lattice(n, q)?;
    let path = write_cache(&l, dir).with_context(|| format!("writing cache in {}", dir.display()))?;
    Ok((l, path))
}

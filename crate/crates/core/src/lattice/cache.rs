//! Versioned text cache of a lattice's canonical representatives.
//!
//! ```text
//! LNQ 1 <n> <q>
//! LEVEL <k> <count>
//! <k*n row-major digits, space separated>   (one line per subspace)
//! ```
//! Covers are recomputed on load.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::{gaussian, LinearLattice};
use crate::error::{Error, Result};
use crate::gfmat::{self, Field, Matrix};

pub const CACHE_VERSION: u32 = 1;

pub fn cache_file_name(n: usize, q: u32) -> String {
    format!("L{n}_{q}.v{CACHE_VERSION}.lnq")
}

pub fn to_cache_string(lat: &LinearLattice) -> String {
    let mut s = String::new();
    writeln!(s, "LNQ {CACHE_VERSION} {} {}", lat.n(), lat.q()).unwrap();
    for k in 0..=lat.n() {
        let ids = lat.level(k);
        writeln!(s, "LEVEL {k} {}", ids.len()).unwrap();
        for &id in ids {
            let e = lat.get(id).matrix().entries();
            let line: Vec<String> = e.iter().map(u8::to_string).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
    }
    s
}

/// Writes the cache file for `lat` into `dir`, returning its path.
pub fn write_cache(lat: &LinearLattice, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(lat.n(), lat.q()));
    std::fs::write(&path, to_cache_string(lat))?;
    Ok(path)
}

pub fn load_cache(path: &Path) -> Result<LinearLattice> {
    parse_cache(&std::fs::read_to_string(path)?)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_cache(text: &str) -> Result<LinearLattice> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty cache"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "LNQ" {
        return Err(parse_err(ln, "expected `LNQ <version> <n> <q>`"));
    }
    let version: u32 = h[1].parse().map_err(|_| parse_err(ln, "bad version"))?;
    if version != CACHE_VERSION {
        return Err(parse_err(ln, format!("unsupported version {version}")));
    }
    let n: usize = h[2].parse().map_err(|_| parse_err(ln, "bad n"))?;
    let q: u32 = h[3].parse().map_err(|_| parse_err(ln, "bad q"))?;
    if n == 0 {
        return Err(parse_err(ln, "n must be positive"));
    }
    let field = Field::new(q)?;
    let mut levels = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(0, format!("missing level {k}")))?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "LEVEL" || parts[1] != k.to_string() {
            return Err(parse_err(ln, format!("expected `LEVEL {k} <count>`")));
        }
        let count: usize = parts[2].parse().map_err(|_| parse_err(ln, "bad count"))?;
        if BigUint::from(count) != gaussian(n as u32, k as u32, q)? {
            return Err(parse_err(ln, format!("level {k} count {count} is not the Gaussian coefficient")));
        }
        let mut lvl: Vec<Matrix> = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, l) = lines.next().ok_or_else(|| parse_err(0, "truncated level"))?;
            let digits: Vec<u8> = l
                .split_whitespace()
                .map(|d| d.parse::<u8>().map_err(|_| parse_err(ln, "bad digit")))
                .collect::<Result<_>>()?;
            if digits.len() != k * n {
                return Err(parse_err(ln, format!("expected {} digits", k * n)));
            }
            let m = Matrix::new(k, n, digits);
            if !m.is_valid_for(&field) || !gfmat::is_rref(&field, &m) || m.rows() != k {
                return Err(parse_err(ln, "row is not a canonical RREF representative"));
            }
            if let Some(prev) = lvl.last() {
                if prev.entries() >= m.entries() {
                    return Err(parse_err(ln, "representatives out of canonical order"));
                }
            }
            lvl.push(m);
        }
        levels.push(lvl);
    }
    if let Some((ln, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(ln, format!("trailing content `{l}`")));
    }
    LinearLattice::from_levels(field, n, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    #[test]
    fn roundtrip_is_byte_identical() {
        let l = build_lattice(3, 3).unwrap();
        let s = to_cache_string(&l);
        let back = parse_cache(&s).unwrap();
        assert_eq!(to_cache_string(&back), s);
        for x in 0..l.size() {
            assert_eq!(l.up_adjacency(x), back.up_adjacency(x));
        }
        assert!(s.starts_with("LNQ 1 3 3\nLEVEL 0 1\n\nLEVEL 1 13\n"));
    }

    #[test]
    fn rejects_corruption() {
        let l = build_lattice(2, 2).unwrap();
        let s = to_cache_string(&l);
        assert!(parse_cache(&s.replace("LNQ 1", "LNQ 2")).is_err());
        assert!(parse_cache(&s.replace("LEVEL 1 3", "LEVEL 1 4")).is_err());
        let swapped = s.replacen("0 1\n1 0", "1 0\n0 1", 1);
        assert!(parse_cache(&swapped).is_err());
    }
}

//! Text format for families of subspaces.
//!
//! ```text
//! FAM <n> <q>
//! <row-major RREF digits, one row per word>   (one line per member)
//! ```
//! The zero subspace is written `-`. Blank lines and `#` comments are ignored.
//! Readers accept any spanning rows and canonicalize them.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::gfmat::Matrix;
use crate::lattice::LinearLattice;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn family_to_string(lat: &LinearLattice, family: &Family) -> Result<String> {
    family.check(lat.poset())?;
    let mut s = String::new();
    writeln!(s, "FAM {} {}", lat.n(), lat.q()).unwrap();
    for id in family.iter() {
        let m = lat.get(id).matrix();
        if m.rows() == 0 {
            s.push_str("-\n");
            continue;
        }
        let rows: Vec<String> = (0..m.rows())
            .map(|r| m.row(r).iter().map(|d| char::from(b'0' + d)).collect())
            .collect();
        writeln!(s, "{}", rows.join(" ")).unwrap();
    }
    Ok(s)
}

/// Reads `(n, q)` from the header line.
pub fn parse_header(text: &str) -> Result<(usize, u32)> {
    let header = text.lines().next().ok_or_else(|| parse_err(1, "empty family file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || h[0] != "FAM" {
        return Err(parse_err(1, "expected `FAM <n> <q>`"));
    }
    let n = h[1].parse().map_err(|_| parse_err(1, "bad n"))?;
    let q = h[2].parse().map_err(|_| parse_err(1, "bad q"))?;
    Ok((n, q))
}

pub fn parse_family(lat: &LinearLattice, text: &str) -> Result<Family> {
    let (n, q) = parse_header(text)?;
    if n != lat.n() || q != lat.q() {
        return Err(parse_err(1, format!("file is for L_{n}({q}), lattice is L_{}({})", lat.n(), lat.q())));
    }
    let mut family = Family::empty(lat.poset());
    for (i, line) in text.lines().enumerate().skip(1) {
        let ln = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "-" {
            family.insert(lat.zero_id());
            continue;
        }
        let mut digits = Vec::new();
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            let d = c.to_digit(10).filter(|&d| d < q).ok_or_else(|| parse_err(ln, format!("bad digit `{c}`")))?;
            digits.push(d as u8);
        }
        if digits.len() % n != 0 {
            return Err(parse_err(ln, format!("digit count {} is not a multiple of {n}", digits.len())));
        }
        let m = Matrix::new(digits.len() / n, n, digits);
        let id = lat.id_of_rows(&m)?;
        if lat.dim_of(id) != m.rows() {
            return Err(parse_err(ln, "rows are linearly dependent"));
        }
        family.insert(id);
    }
    Ok(family)
}

pub fn write_family(lat: &LinearLattice, family: &Family, path: &Path) -> Result<()> {
    std::fs::write(path, family_to_string(lat, family)?)?;
    Ok(())
}

pub fn read_family(lat: &LinearLattice, path: &Path) -> Result<Family> {
    parse_family(lat, &std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    #[test]
    fn roundtrip() {
        let l = build_lattice(3, 3).unwrap();
        let f = Family::from_ids(l.poset(), [l.zero_id(), 3, 17, l.full_id()]).unwrap();
        let s = family_to_string(&l, &f).unwrap();
        assert!(s.starts_with("FAM 3 3\n-\n"));
        assert!(s.ends_with("100 010 001\n"));
        assert_eq!(parse_family(&l, &s).unwrap(), f);
    }

    #[test]
    fn canonicalizes_rows() {
        let l = build_lattice(3, 2).unwrap();
        let a = parse_family(&l, "FAM 3 2\n011 110\n").unwrap();
        let b = parse_family(&l, "FAM 3 2\n# plane\n101 011\n\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1);
        assert_eq!(l.dim_of(a.ids()[0]), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let l = build_lattice(3, 2).unwrap();
        assert!(parse_family(&l, "FAM 3 3\n").is_err());
        assert!(parse_family(&l, "FAM 3\n").is_err());
        assert!(parse_family(&l, "FAM 3 2\n12\n").is_err());
        assert!(parse_family(&l, "FAM 3 2\n0120\n").is_err());
        assert!(parse_family(&l, "FAM 3 2\n110 110\n").is_err());
        assert!(parse_family(&l, "FAM 3 2\n000\n").is_err());
    }
}

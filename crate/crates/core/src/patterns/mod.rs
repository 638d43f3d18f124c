//! Forbidden patterns and weak-subposet containment.
//!
//! A family contains a pattern when some injective map from the pattern's
//! elements into the family preserves every strict relation of the pattern.
//! Extra relations among the images are allowed.

pub mod matcher;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::poset::GradedPoset;
use matcher::Host;

/// A finite strict order on `0..size`, stored transitively closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenericPattern {
    size: usize,
    relations: Vec<(usize, usize)>,
}

impl GenericPattern {
    /// Builds the transitive closure of `relations`; each `(a, b)` reads `a < b`.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Self> {
        let mut rel = vec![vec![false; size]; size];
        for &(a, b) in relations {
            if a >= size || b >= size {
                return Err(Error::InvalidPattern(format!("relation ({a}, {b}) out of range")));
            }
            rel[a][b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if rel[i][k] {
                    for j in 0..size {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        if (0..size).any(|i| rel[i][i]) {
            return Err(Error::InvalidPattern("relations contain a cycle".into()));
        }
        let relations = (0..size)
            .flat_map(|a| (0..size).map(move |b| (a, b)))
            .filter(|&(a, b)| rel[a][b])
            .collect();
        Ok(GenericPattern { size, relations })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Closed strict relations, sorted.
    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.relations.binary_search(&(a, b)).is_ok()
    }

    /// Count of elements above and below each element.
    pub fn up_down_counts(&self) -> (Vec<usize>, Vec<usize>) {
        let mut ups = vec![0; self.size];
        let mut downs = vec![0; self.size];
        for &(a, b) in &self.relations {
            ups[a] += 1;
            downs[b] += 1;
        }
        (ups, downs)
    }

    pub fn minimal(&self) -> Vec<usize> {
        let (_, downs) = self.up_down_counts();
        (0..self.size).filter(|&i| downs[i] == 0).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        let (ups, _) = self.up_down_counts();
        (0..self.size).filter(|&i| ups[i] == 0).collect()
    }

    pub fn dual(&self) -> GenericPattern {
        let mut relations: Vec<(usize, usize)> = self.relations.iter().map(|&(a, b)| (b, a)).collect();
        relations.sort_unstable();
        GenericPattern {
            size: self.size,
            relations,
        }
    }

    /// The induced pattern on the elements not listed in `drop`.
    pub fn without(&self, drop: &[usize]) -> GenericPattern {
        let keep: Vec<usize> = (0..self.size).filter(|i| !drop.contains(i)).collect();
        let mut new_id = vec![usize::MAX; self.size];
        for (j, &i) in keep.iter().enumerate() {
            new_id[i] = j;
        }
        let relations = self
            .relations
            .iter()
            .filter(|(a, b)| new_id[*a] != usize::MAX && new_id[*b] != usize::MAX)
            .map(|&(a, b)| (new_id[a], new_id[b]))
            .collect();
        GenericPattern {
            size: keep.len(),
            relations,
        }
    }

    pub fn is_antichain(&self) -> bool {
        self.relations.is_empty()
    }
}

/// A forbidden pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternSpec {
    /// A handle above `u` elements.
    Broom(usize),
    /// A handle below `v` elements.
    Fork(usize),
    Wedge,
    Vee,
    Butterfly,
    Y,
    Yprime,
    /// `c_k < ... < c_0 < a` together with `c_0 < b`.
    Yk(usize),
    Ykprime(usize),
    /// A chain with `len` elements.
    Chain(usize),
    Generic(GenericPattern),
}

impl PatternSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PatternSpec::Broom(0) | PatternSpec::Fork(0) => {
                Err(Error::InvalidPattern("broom and fork sizes must be at least 1".into()))
            }
            PatternSpec::Chain(0) => Err(Error::InvalidPattern("chain length must be at least 1".into())),
            _ => Ok(()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PatternSpec::Broom(u) | PatternSpec::Fork(u) => u + 1,
            PatternSpec::Wedge | PatternSpec::Vee => 3,
            PatternSpec::Butterfly | PatternSpec::Y | PatternSpec::Yprime => 4,
            PatternSpec::Yk(k) | PatternSpec::Ykprime(k) => k + 3,
            PatternSpec::Chain(l) => *l,
            PatternSpec::Generic(g) => g.size(),
        }
    }

    /// The pattern as an explicit strict order.
    pub fn to_generic(&self) -> GenericPattern {
        let mk = |size: usize, rel: Vec<(usize, usize)>| GenericPattern::new(size, &rel).expect("named patterns are acyclic");
        match self {
            PatternSpec::Broom(u) => mk(u + 1, (1..=*u).map(|i| (i, 0)).collect()),
            PatternSpec::Fork(v) => mk(v + 1, (1..=*v).map(|i| (0, i)).collect()),
            PatternSpec::Wedge => PatternSpec::Broom(2).to_generic(),
            PatternSpec::Vee => PatternSpec::Fork(2).to_generic(),
            PatternSpec::Butterfly => mk(4, vec![(0, 2), (0, 3), (1, 2), (1, 3)]),
            PatternSpec::Y => mk(4, vec![(0, 1), (1, 2), (1, 3)]),
            PatternSpec::Yprime => mk(4, vec![(0, 2), (1, 2), (2, 3)]),
            // c_k = 0, ..., c_0 = k, a = k + 1, b = k + 2
            PatternSpec::Yk(k) => {
                let mut rel: Vec<(usize, usize)> = (0..*k).map(|i| (i, i + 1)).collect();
                rel.push((*k, k + 1));
                rel.push((*k, k + 2));
                mk(k + 3, rel)
            }
            PatternSpec::Ykprime(k) => PatternSpec::Yk(*k).to_generic().dual(),
            PatternSpec::Chain(l) => mk(*l, (1..*l).map(|i| (i - 1, i)).collect()),
            PatternSpec::Generic(g) => g.clone(),
        }
    }

    pub fn dual(&self) -> PatternSpec {
        match self {
            PatternSpec::Broom(u) => PatternSpec::Fork(*u),
            PatternSpec::Fork(v) => PatternSpec::Broom(*v),
            PatternSpec::Wedge => PatternSpec::Vee,
            PatternSpec::Vee => PatternSpec::Wedge,
            PatternSpec::Butterfly => PatternSpec::Butterfly,
            PatternSpec::Y => PatternSpec::Yprime,
            PatternSpec::Yprime => PatternSpec::Y,
            PatternSpec::Yk(k) => PatternSpec::Ykprime(*k),
            PatternSpec::Ykprime(k) => PatternSpec::Yk(*k),
            PatternSpec::Chain(l) => PatternSpec::Chain(*l),
            PatternSpec::Generic(g) => PatternSpec::Generic(g.dual()),
        }
    }

    /// The named kinds, one per shape.
    pub fn named_catalog(max_size: usize) -> Vec<PatternSpec> {
        let mut v = vec![
            PatternSpec::Wedge,
            PatternSpec::Vee,
            PatternSpec::Butterfly,
            PatternSpec::Y,
            PatternSpec::Yprime,
        ];
        for s in 1..=max_size {
            v.push(PatternSpec::Chain(s));
        }
        for u in 3..max_size {
            v.push(PatternSpec::Broom(u));
            v.push(PatternSpec::Fork(u));
        }
        for k in 2..max_size.saturating_sub(2) {
            v.push(PatternSpec::Yk(k));
            v.push(PatternSpec::Ykprime(k));
        }
        v
    }

    /// A named kind isomorphic to `g`, when there is one.
    pub fn canonical(g: &GenericPattern) -> PatternSpec {
        for named in PatternSpec::named_catalog(g.size()) {
            if named.size() == g.size() && matcher::isomorphic(g, &named.to_generic()) {
                return named;
            }
        }
        PatternSpec::Generic(g.clone())
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::Broom(u) => write!(f, "broom:{u}"),
            PatternSpec::Fork(v) => write!(f, "fork:{v}"),
            PatternSpec::Wedge => write!(f, "wedge"),
            PatternSpec::Vee => write!(f, "vee"),
            PatternSpec::Butterfly => write!(f, "butterfly"),
            PatternSpec::Y => write!(f, "y"),
            PatternSpec::Yprime => write!(f, "yprime"),
            PatternSpec::Yk(k) => write!(f, "yk:{k}"),
            PatternSpec::Ykprime(k) => write!(f, "ykprime:{k}"),
            PatternSpec::Chain(l) => write!(f, "chain:{l}"),
            PatternSpec::Generic(g) => {
                let rel: Vec<String> = g.relations().iter().map(|(a, b)| format!("{a}<{b}")).collect();
                write!(f, "generic:{}:{}", g.size(), rel.join("/"))
            }
        }
    }
}

impl FromStr for PatternSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.to_string(), Some(a.to_string())),
            None => (s.clone(), None),
        };
        let num = |a: &Option<String>| -> Result<usize> {
            a.as_deref()
                .ok_or_else(|| Error::InvalidPattern(format!("`{name}` needs a size, e.g. `{name}:2`")))?
                .parse()
                .map_err(|_| Error::InvalidPattern(format!("bad size in `{s}`")))
        };
        let p = match name.as_str() {
            "wedge" => PatternSpec::Wedge,
            "vee" => PatternSpec::Vee,
            "butterfly" => PatternSpec::Butterfly,
            "y" => PatternSpec::Y,
            "yprime" => PatternSpec::Yprime,
            "broom" => PatternSpec::Broom(num(&arg)?),
            "fork" => PatternSpec::Fork(num(&arg)?),
            "yk" => PatternSpec::Yk(num(&arg)?),
            "ykprime" => PatternSpec::Ykprime(num(&arg)?),
            "chain" => PatternSpec::Chain(num(&arg)?),
            "generic" => {
                let arg = arg.ok_or_else(|| Error::InvalidPattern("generic needs `generic:<size>:<a<b/...>`".into()))?;
                let (size, rels) = arg.split_once(':').unwrap_or((arg.as_str(), ""));
                let size: usize = size.parse().map_err(|_| Error::InvalidPattern(format!("bad size in `{s}`")))?;
                let mut pairs = Vec::new();
                for r in rels.split('/').filter(|r| !r.is_empty()) {
                    let (a, b) = r
                        .split_once('<')
                        .ok_or_else(|| Error::InvalidPattern(format!("bad relation `{r}`")))?;
                    let a = a.parse().map_err(|_| Error::InvalidPattern(format!("bad relation `{r}`")))?;
                    let b = b.parse().map_err(|_| Error::InvalidPattern(format!("bad relation `{r}`")))?;
                    pairs.push((a, b));
                }
                PatternSpec::Generic(GenericPattern::new(size, &pairs)?)
            }
            _ => return Err(Error::InvalidPattern(format!("unknown pattern `{s}`"))),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Parses a comma-separated pattern list.
pub fn parse_list(s: &str) -> Result<Vec<PatternSpec>> {
    let v: Vec<PatternSpec> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if v.is_empty() {
        return Err(Error::InvalidPattern("empty pattern list".into()));
    }
    Ok(v)
}

fn host(poset: &GradedPoset) -> Host<'_> {
    let (above, below) = poset.closure_sets();
    Host { above, below }
}

/// Longest chain of members ending at each member (indexed by id; 0 outside `f`).
fn heights(poset: &GradedPoset, f: &Bitset) -> Vec<usize> {
    let mut h = vec![0usize; poset.size()];
    for lvl in poset.levels() {
        for &x in lvl {
            if f.contains(x) {
                h[x] = 1 + poset.below(x).iter().filter(|&y| f.contains(y)).map(|y| h[y]).max().unwrap_or(0);
            }
        }
    }
    h
}

/// Longest chain of members starting at each member.
fn depths(poset: &GradedPoset, f: &Bitset) -> Vec<usize> {
    let mut d = vec![0usize; poset.size()];
    for lvl in poset.levels().iter().rev() {
        for &x in lvl {
            if f.contains(x) {
                d[x] = 1 + poset.above(x).iter().filter(|&y| f.contains(y)).map(|y| d[y]).max().unwrap_or(0);
            }
        }
    }
    d
}

/// Containment test on a raw member set using the specialized detectors.
pub fn contains_bits(poset: &GradedPoset, f: &Bitset, p: &PatternSpec) -> bool {
    if f.count() < p.size() {
        return false;
    }
    let below = |x: usize| poset.below(x).and_count(f);
    let above = |x: usize| poset.above(x).and_count(f);
    match p {
        PatternSpec::Broom(u) => f.iter().any(|x| below(x) >= *u),
        PatternSpec::Fork(v) => f.iter().any(|x| above(x) >= *v),
        PatternSpec::Wedge => f.iter().any(|x| below(x) >= 2),
        PatternSpec::Vee => f.iter().any(|x| above(x) >= 2),
        PatternSpec::Butterfly => {
            let m: Vec<usize> = f.iter().collect();
            m.iter().enumerate().any(|(i, &c)| {
                m[i + 1..]
                    .iter()
                    .any(|&d| poset.below(c).and3_count(poset.below(d), f) >= 2)
            })
        }
        PatternSpec::Y => f.iter().any(|x| below(x) >= 1 && above(x) >= 2),
        PatternSpec::Yprime => f.iter().any(|x| above(x) >= 1 && below(x) >= 2),
        PatternSpec::Yk(k) => {
            let h = heights(poset, f);
            f.iter().any(|x| h[x] > *k && above(x) >= 2)
        }
        PatternSpec::Ykprime(k) => {
            let d = depths(poset, f);
            f.iter().any(|x| d[x] > *k && below(x) >= 2)
        }
        PatternSpec::Chain(l) => heights(poset, f).into_iter().max().unwrap_or(0) >= *l,
        PatternSpec::Generic(g) if g.is_antichain() => true,
        PatternSpec::Generic(g) => matcher::generic_contains(host(poset), f, g),
    }
}

/// Containment decided only by the backtracking matcher.
pub fn contains_generic(poset: &GradedPoset, f: &Bitset, p: &PatternSpec) -> bool {
    matcher::generic_contains(host(poset), f, &p.to_generic())
}

/// Whether adding `d` to the pattern-free set `s` creates the pattern.
pub fn creates(poset: &GradedPoset, s: &Bitset, d: usize, p: &PatternSpec) -> bool {
    let below = |x: usize| poset.below(x).and_count(s);
    let above = |x: usize| poset.above(x).and_count(s);
    let bd = poset.below(d);
    let ad = poset.above(d);
    match p {
        PatternSpec::Broom(u) | PatternSpec::Fork(u) if *u == 1 => bd.intersects(s) || ad.intersects(s),
        PatternSpec::Broom(u) => below(d) >= *u || ad.iter().any(|x| s.contains(x) && below(x) + 1 >= *u),
        PatternSpec::Fork(v) => above(d) >= *v || bd.iter().any(|x| s.contains(x) && above(x) + 1 >= *v),
        PatternSpec::Wedge => creates(poset, s, d, &PatternSpec::Broom(2)),
        PatternSpec::Vee => creates(poset, s, d, &PatternSpec::Fork(2)),
        PatternSpec::Butterfly => {
            if s.iter().any(|c| poset.below(c).and3_count(bd, s) >= 2) {
                return true;
            }
            let up = ad.and(s);
            up.iter().any(|c| poset.below(c).iter().any(|y| s.contains(y) && poset.above(y).and_count(&up) >= 2))
        }
        PatternSpec::Y => {
            (below(d) >= 1 && above(d) >= 2)
                || ad.iter().any(|b| s.contains(b) && above(b) >= 2)
                || bd.iter().any(|b| s.contains(b) && below(b) >= 1 && above(b) >= 1)
        }
        PatternSpec::Yprime => {
            (above(d) >= 1 && below(d) >= 2)
                || bd.iter().any(|b| s.contains(b) && below(b) >= 2)
                || ad.iter().any(|b| s.contains(b) && above(b) >= 1 && below(b) >= 1)
        }
        _ => {
            let mut t = s.clone();
            t.insert(d);
            contains_bits(poset, &t, p)
        }
    }
}

pub fn contains_pattern(poset: &GradedPoset, family: &Family, p: &PatternSpec) -> Result<bool> {
    family.check(poset)?;
    p.validate()?;
    Ok(contains_bits(poset, family.bits(), p))
}

/// True iff the family contains none of the patterns.
pub fn free_of(poset: &GradedPoset, family: &Family, patterns: &[PatternSpec]) -> Result<bool> {
    family.check(poset)?;
    for p in patterns {
        p.validate()?;
        if contains_bits(poset, family.bits(), p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// As [`free_of`], decided by the backtracking matcher alone.
pub fn free_of_generic(poset: &GradedPoset, family: &Family, patterns: &[PatternSpec]) -> Result<bool> {
    family.check(poset)?;
    Ok(patterns.iter().all(|p| !contains_generic(poset, family.bits(), p)))
}

/// Number of other members comparable to `x`.
pub fn comparability_degree(poset: &GradedPoset, family: &Family, x: usize) -> Result<usize> {
    family.check(poset)?;
    if !family.contains(x) {
        return Err(Error::NotMember(x));
    }
    Ok(poset.above(x).and_count(family.bits()) + poset.below(x).and_count(family.bits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["wedge", "vee", "broom:3", "fork:2", "butterfly", "y", "yprime", "yk:2", "ykprime:0", "chain:4"] {
            let p: PatternSpec = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let g: PatternSpec = "generic:3:0<1/1<2".parse().unwrap();
        assert_eq!(g.to_string(), "generic:3:0<1/0<2/1<2");
        assert!("broom:0".parse::<PatternSpec>().is_err());
        assert!("chain".parse::<PatternSpec>().is_err());
        assert!("diamond".parse::<PatternSpec>().is_err());
        assert!("generic:2:0<1/1<0".parse::<PatternSpec>().is_err());
        assert_eq!(parse_list("wedge,vee").unwrap().len(), 2);
    }

    #[test]
    fn named_identities() {
        let canon = |p: PatternSpec| PatternSpec::canonical(&p.to_generic());
        assert_eq!(canon(PatternSpec::Yk(0)), PatternSpec::Vee);
        assert_eq!(canon(PatternSpec::Yk(1)), PatternSpec::Y);
        assert_eq!(canon(PatternSpec::Ykprime(0)), PatternSpec::Wedge);
        assert_eq!(canon(PatternSpec::Ykprime(1)), PatternSpec::Yprime);
        assert_eq!(canon(PatternSpec::Broom(1)), PatternSpec::Chain(2));
        assert_eq!(canon(PatternSpec::Broom(2)), PatternSpec::Wedge);
        assert_eq!(canon(PatternSpec::Fork(4)), PatternSpec::Fork(4));
        assert_eq!(canon(PatternSpec::Yk(3)), PatternSpec::Yk(3));
        let butterfly = PatternSpec::Butterfly.to_generic();
        assert_eq!(PatternSpec::canonical(&butterfly.without(&[0])), PatternSpec::Vee);
        assert!(matcher::embeds(&butterfly, &PatternSpec::Y.to_generic()));
        assert!(matcher::embeds(&PatternSpec::Y.to_generic(), &PatternSpec::Chain(4).to_generic()));
        assert!(!matcher::embeds(&PatternSpec::Y.to_generic(), &butterfly));
    }

    #[test]
    fn basic_examples() {
        let l = build_lattice(3, 2).unwrap();
        let p = l.poset();
        let level = Family::levels(p, &[1]);
        assert!(!contains_pattern(p, &level, &PatternSpec::Wedge).unwrap());
        let chain = Family::from_ids(p, [0, p.level(1)[0], {
            let x = p.level(1)[0];
            p.up(x)[0]
        }, l.full_id()])
        .unwrap();
        assert!(contains_pattern(p, &chain, &PatternSpec::Broom(3)).unwrap());
        let two = Family::levels(p, &[1, 2]);
        assert!(!contains_pattern(p, &two, &PatternSpec::Butterfly).unwrap());
        assert!(contains_pattern(p, &two, &PatternSpec::Wedge).unwrap());
        assert!(free_of(p, &Family::empty(p), &[PatternSpec::Chain(1)]).unwrap());
        let single = Family::from_ids(p, [3]).unwrap();
        assert_eq!(comparability_degree(p, &single, 3).unwrap(), 0);
        assert!(matches!(comparability_degree(p, &single, 4), Err(Error::NotMember(4))));
        let mid = chain.ids()[1];
        let three = Family::from_ids(p, chain.ids()[..3].to_vec()).unwrap();
        assert_eq!(comparability_degree(p, &three, mid).unwrap(), 2);
    }

    #[test]
    fn lattice_mismatch() {
        let a = build_lattice(3, 2).unwrap();
        let b = build_lattice(2, 3).unwrap();
        let f = Family::levels(a.poset(), &[1]);
        assert!(matches!(contains_pattern(b.poset(), &f, &PatternSpec::Wedge), Err(Error::LatticeMismatch)));
    }
}

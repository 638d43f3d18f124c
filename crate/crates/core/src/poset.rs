//! Graded posets given by their Hasse diagrams, with lazily computed
//! comparability closures and maximal-chain counts.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// Identity of a poset; families may only be compared within one identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PosetId {
    Linear { n: u32, q: u32 },
    Boolean { n: u32 },
    Custom { name: String },
}

#[derive(Debug)]
struct Closure {
    above: Vec<Bitset>,
    below: Vec<Bitset>,
}

/// A finite graded poset. Covers only join consecutive levels.
#[derive(Debug)]
pub struct GradedPoset {
    id: PosetId,
    level_of: Vec<usize>,
    levels: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    closure: OnceLock<Closure>,
}

impl Clone for GradedPoset {
    fn clone(&self) -> Self {
        GradedPoset {
            id: self.id.clone(),
            level_of: self.level_of.clone(),
            levels: self.levels.clone(),
            up: self.up.clone(),
            down: self.down.clone(),
            closure: OnceLock::new(),
        }
    }
}

impl GradedPoset {
    /// Builds a poset from element levels and upward covers.
    pub fn from_covers(id: PosetId, level_of: Vec<usize>, up: Vec<Vec<usize>>) -> Result<Self> {
        let size = level_of.len();
        if up.len() != size {
            return Err(Error::BadStructure(format!(
                "{} cover lists for {} elements",
                up.len(),
                size
            )));
        }
        let rank = level_of.iter().copied().max().unwrap_or(0);
        let mut levels = vec![Vec::new(); if size == 0 { 0 } else { rank + 1 }];
        for (x, &l) in level_of.iter().enumerate() {
            levels[l].push(x);
        }
        let mut down = vec![Vec::new(); size];
        let mut up_sorted = up;
        for (x, covers) in up_sorted.iter_mut().enumerate() {
            covers.sort_unstable();
            covers.dedup();
            for &y in covers.iter() {
                if y >= size || level_of[y] != level_of[x] + 1 {
                    return Err(Error::BadStructure(format!(
                        "cover {x} -> {y} does not join consecutive levels"
                    )));
                }
                down[y].push(x);
            }
        }
        for d in down.iter_mut() {
            d.sort_unstable();
        }
        Ok(GradedPoset {
            id,
            level_of,
            levels,
            up: up_sorted,
            down,
            closure: OnceLock::new(),
        })
    }

    pub fn id(&self) -> &PosetId {
        &self.id
    }

    pub fn size(&self) -> usize {
        self.level_of.len()
    }

    /// Length of the longest chain (top level index).
    pub fn rank(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn level(&self, k: usize) -> &[usize] {
        self.levels.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level_of(&self, x: usize) -> usize {
        self.level_of[x]
    }

    pub fn rank_numbers(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Upward covers of `x`, ascending.
    pub fn up(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Downward covers of `x`, ascending.
    pub fn down(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    fn closure(&self) -> &Closure {
        self.closure.get_or_init(|| {
            let size = self.size();
            let mut below = vec![Bitset::new(size); size];
            let mut above = vec![Bitset::new(size); size];
            for lvl in &self.levels {
                for &x in lvl {
                    let mut b = Bitset::new(size);
                    for &d in &self.down[x] {
                        b.or_with(&below[d]);
                        b.insert(d);
                    }
                    below[x] = b;
                }
            }
            for lvl in self.levels.iter().rev() {
                for &x in lvl {
                    let mut a = Bitset::new(size);
                    for &u in &self.up[x] {
                        a.or_with(&above[u]);
                        a.insert(u);
                    }
                    above[x] = a;
                }
            }
            Closure { above, below }
        })
    }

    /// Elements strictly above `x`.
    pub fn above(&self, x: usize) -> &Bitset {
        &self.closure().above[x]
    }

    /// Elements strictly below `x`.
    pub fn below(&self, x: usize) -> &Bitset {
        &self.closure().below[x]
    }

    /// Strict up-sets and down-sets of every element.
    pub fn closure_sets(&self) -> (&[Bitset], &[Bitset]) {
        let c = self.closure();
        (&c.above, &c.below)
    }

    /// Whether `x < y`.
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.above(x).contains(y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        x != y && (self.less(x, y) || self.less(y, x))
    }

    /// Elements comparable to `x`, excluding `x`.
    pub fn comparable_set(&self, x: usize) -> Bitset {
        self.above(x).or(self.below(x))
    }

    /// Level-`i-1` elements below some member of `set`, all of which sit on level `i > 0`.
    pub fn shadow(&self, set: &[usize]) -> Result<Bitset> {
        self.neighbours(set, true)
    }

    /// Level-`i+1` elements above some member of `set`, all of which sit on level `i < rank`.
    pub fn shade(&self, set: &[usize]) -> Result<Bitset> {
        self.neighbours(set, false)
    }

    fn neighbours(&self, set: &[usize], downward: bool) -> Result<Bitset> {
        let mut out = Bitset::new(self.size());
        let Some(&first) = set.first() else {
            return Ok(out);
        };
        let lvl = self.level_of[first];
        if set.iter().any(|&x| self.level_of[x] != lvl) {
            return Err(Error::MixedLevels);
        }
        if downward && lvl == 0 {
            return Err(Error::BadLevel("shadow of level 0".into()));
        }
        if !downward && lvl == self.rank() {
            return Err(Error::BadLevel("shade of the top level".into()));
        }
        for &x in set {
            let nb = if downward { &self.down[x] } else { &self.up[x] };
            for &y in nb {
                out.insert(y);
            }
        }
        Ok(out)
    }

    /// Saturated chains from a minimal element up to each element, and from
    /// each element up to a maximal element.
    pub fn chain_counts(&self) -> (Vec<BigUint>, Vec<BigUint>) {
        let size = self.size();
        let mut down = vec![BigUint::zero(); size];
        let mut up = vec![BigUint::zero(); size];
        for lvl in &self.levels {
            for &x in lvl {
                down[x] = if self.down[x].is_empty() {
                    BigUint::one()
                } else {
                    self.down[x].iter().map(|&d| &down[d]).sum()
                };
            }
        }
        for lvl in self.levels.iter().rev() {
            for &x in lvl {
                up[x] = if self.up[x].is_empty() {
                    BigUint::one()
                } else {
                    self.up[x].iter().map(|&u| &up[u]).sum()
                };
            }
        }
        (down, up)
    }

    /// Total number of maximal chains.
    pub fn count_maximal_chains(&self) -> BigUint {
        let (down, _) = self.chain_counts();
        self.up
            .iter()
            .enumerate()
            .filter(|(_, u)| u.is_empty())
            .map(|(x, _)| down[x].clone())
            .sum()
    }

    /// Number of maximal chains through `x`.
    pub fn chains_through(&self, x: usize) -> BigUint {
        let (down, up) = self.chain_counts();
        &down[x] * &up[x]
    }

    /// Saturated chains from `x` to every element (zero where not above `x`).
    pub fn chains_from(&self, x: usize) -> Vec<BigUint> {
        let size = self.size();
        let mut cnt = vec![BigUint::zero(); size];
        cnt[x] = BigUint::one();
        for lvl in self.levels.iter().skip(self.level_of[x] + 1) {
            for &y in lvl {
                let s: BigUint = self.down[y].iter().map(|&d| &cnt[d]).sum();
                cnt[y] = s;
            }
        }
        cnt
    }

    /// The same poset with element `x` renamed `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<GradedPoset> {
        let size = self.size();
        let mut seen = vec![false; size];
        if perm.len() != size || perm.iter().any(|&p| p >= size || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::BadStructure("not a permutation".into()));
        }
        let mut level_of = vec![0; size];
        let mut up = vec![Vec::new(); size];
        for x in 0..size {
            level_of[perm[x]] = self.level_of[x];
            up[perm[x]] = self.up[x].iter().map(|&y| perm[y]).collect();
        }
        GradedPoset::from_covers(
            PosetId::Custom {
                name: format!("{}-permuted", self.name()),
            },
            level_of,
            up,
        )
    }

    /// The order dual; element ids are kept.
    pub fn dual(&self) -> GradedPoset {
        let rank = self.rank();
        let level_of = self.level_of.iter().map(|&l| rank - l).collect();
        GradedPoset::from_covers(
            PosetId::Custom {
                name: format!("{}-dual", self.name()),
            },
            level_of,
            self.down.clone(),
        )
        .expect("dual of a valid poset is valid")
    }

    /// The subposet with exactly two levels `lo < hi`, relations inherited.
    pub fn two_level_subposet(&self, lo: usize, hi: usize) -> Result<(GradedPoset, Vec<usize>)> {
        if lo >= hi || hi > self.rank() {
            return Err(Error::BadLevel(format!("levels {lo} and {hi}")));
        }
        let mut members: Vec<usize> = self.level(lo).to_vec();
        members.extend_from_slice(self.level(hi));
        let index: std::collections::HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut level_of = vec![0; members.len()];
        let mut up = vec![Vec::new(); members.len()];
        for (i, &x) in members.iter().enumerate() {
            if self.level_of[x] == hi {
                level_of[i] = 1;
            } else {
                up[i] = self.above(x).iter().filter(|y| self.level_of[*y] == hi).map(|y| index[&y]).collect();
            }
        }
        let p = GradedPoset::from_covers(
            PosetId::Custom {
                name: format!("{}-levels-{lo}-{hi}", self.name()),
            },
            level_of,
            up,
        )?;
        Ok((p, members))
    }

    pub fn name(&self) -> String {
        match &self.id {
            PosetId::Linear { n, q } => format!("L_{n}({q})"),
            PosetId::Boolean { n } => format!("B_{n}"),
            PosetId::Custom { name } => name.clone(),
        }
    }
}

/// The Boolean lattice of subsets of an `n`-set, elements ordered by size then mask.
#[derive(Clone, Debug)]
pub struct BooleanLattice {
    n: u32,
    masks: Vec<u32>,
    poset: GradedPoset,
}

impl BooleanLattice {
    pub fn new(n: u32) -> Result<Self> {
        if n > 20 {
            return Err(Error::TooLarge {
                elements: format!("2^{n}"),
                cap: 1 << 20,
            });
        }
        let mut masks: Vec<u32> = (0..1u32 << n).collect();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        let mut index = vec![0usize; masks.len()];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i;
        }
        let level_of = masks.iter().map(|m| m.count_ones() as usize).collect();
        let up = masks
            .iter()
            .map(|&m| {
                (0..n)
                    .filter(|b| m & (1 << b) == 0)
                    .map(|b| index[(m | 1 << b) as usize])
                    .collect()
            })
            .collect();
        let poset = GradedPoset::from_covers(PosetId::Boolean { n }, level_of, up)?;
        Ok(BooleanLattice { n, masks, poset })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn mask(&self, id: usize) -> u32 {
        self.masks[id]
    }

    pub fn id_of_mask(&self, mask: u32) -> usize {
        self.masks.iter().position(|&m| m == mask).expect("mask within range")
    }
}

/// A two-level poset on `bottom + top` elements; bottom ids come first.
/// `edges` lists `(b, t)` with `b < bottom`, `t < top`, meaning `b < t`.
pub fn two_level(name: &str, bottom: usize, top: usize, edges: &[(usize, usize)]) -> Result<GradedPoset> {
    let mut level_of = vec![0; bottom];
    level_of.extend(std::iter::repeat_n(1, top));
    let mut up = vec![Vec::new(); bottom + top];
    for &(b, t) in edges {
        if b >= bottom || t >= top {
            return Err(Error::BadStructure(format!("edge ({b}, {t}) out of range")));
        }
        up[b].push(bottom + t);
    }
    GradedPoset::from_covers(PosetId::Custom { name: name.into() }, level_of, up)
}

/// A 2-regular bipartite graph on 5 + 5 vertices whose largest family with
/// every member comparable to at most one other has 6 elements.
pub fn two_regular_fixture() -> GradedPoset {
    let edges = [
        (0, 0),
        (0, 1),
        (1, 0),
        (1, 2),
        (2, 1),
        (2, 3),
        (3, 2),
        (3, 4),
        (4, 3),
        (4, 4),
    ];
    two_level("two-regular-5x5", 5, 5, &edges).expect("fixture is well formed")
}

//! Normalized matching, pushes between levels and LYM-type inequalities.

mod matching;
mod push;

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::lattice::LinearLattice;
use crate::patterns::{free_of, PatternSpec};
use crate::poset::GradedPoset;
use crate::rational::{self, Rational};

pub use matching::max_bipartite_matching;
pub use push::{
    middle_bounds, normalize_to_middle, push_top_to_shadow, pushdown_matched, pushup_matched, Direction, PushReport,
};

/// Tests `|shadow(A)| / r_{i-1} >= |A| / r_i` for a subset `A` of level `i`.
pub fn check_normalized_matching(poset: &GradedPoset, i: usize, a: &[usize]) -> Result<bool> {
    if i == 0 || i > poset.rank() {
        return Err(Error::BadLevel(format!("level {i} out of range 1..={}", poset.rank())));
    }
    if let Some(&x) = a.iter().find(|&&x| x >= poset.size() || poset.level_of(x) != i) {
        return Err(Error::BadLevel(format!("element {x} is not on level {i}")));
    }
    if a.is_empty() {
        return Ok(true);
    }
    let sh = poset.shadow(a)?.count() as u128;
    let r = poset.rank_numbers();
    let mut set = a.to_vec();
    set.sort_unstable();
    set.dedup();
    Ok(sh * r[i] as u128 >= set.len() as u128 * r[i - 1] as u128)
}

/// `sum over members x of 1 / r_{level(x)}`.
pub fn lym_sum(poset: &GradedPoset, family: &Family) -> Rational {
    let r = poset.rank_numbers();
    let mut per_level = vec![0usize; r.len()];
    for x in family.iter() {
        per_level[poset.level_of(x)] += 1;
    }
    per_level
        .iter()
        .zip(&r)
        .filter(|(&c, _)| c > 0)
        .fold(rational::zero(), |acc, (&c, &rk)| acc + rational::ratio(BigInt::from(c), BigInt::from(rk)))
}

/// Largest `k` such that the `k` smallest values sum to at most `delta`.
pub fn k_delta(values: &[Rational], delta: &Rational) -> usize {
    let mut v = values.to_vec();
    v.sort();
    let mut acc = rational::zero();
    let mut k = 0;
    for x in &v {
        acc += x;
        if &acc > delta {
            break;
        }
        k += 1;
    }
    k
}

/// Result of [`lym_type_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LymCheck {
    pub sum: Rational,
    pub holds: bool,
    pub equality_structure: bool,
}

/// LYM-type bound of 2 for a family free of Y and Y' that avoids the
/// least and greatest levels.
pub fn lym_type_check(poset: &GradedPoset, f: &Family) -> Result<LymCheck> {
    f.check(poset)?;
    let rank = poset.rank();
    if let Some(x) = f.iter().find(|&x| poset.level_of(x) == 0 || poset.level_of(x) == rank) {
        return Err(Error::LevelViolation(format!("element {x} is the bottom or top")));
    }
    if !free_of(poset, f, &[PatternSpec::Y, PatternSpec::Yprime])? {
        return Err(Error::NotYFree);
    }
    let sum = lym_sum(poset, f);
    let two = rational::ratio(2, 1);
    let holds = sum <= two;
    let equality_structure = sum != two
        || f.iter().all(|x| {
            let (above, below) = (poset.above(x), poset.below(x));
            !above.intersects(f.bits()) || !below.intersects(f.bits())
        });
    Ok(LymCheck {
        sum,
        holds,
        equality_structure,
    })
}

fn is_antichain(poset: &GradedPoset, f: &Family) -> bool {
    f.iter().all(|x| !poset.comparable_set(x).intersects(f.bits()))
}

/// Weighted sum for two disjoint antichains `M` and `A` where each `a` in `A`
/// is comparable to exactly one member `f(a)` of `M`, all on the same side.
///
/// Returns `(lhs, lhs <= 1)`.
pub fn two_antichain_inequality(
    lat: &LinearLattice,
    m: &Family,
    a: &Family,
    f: &HashMap<usize, usize>,
) -> Result<(Rational, bool)> {
    let poset = lat.poset();
    m.check(poset)?;
    a.check(poset)?;
    let bad = |s: &str| Err(Error::BadStructure(s.into()));
    if m.iter().any(|x| a.contains(x)) {
        return bad("M and A intersect");
    }
    let (zero, full) = (lat.zero_id(), lat.full_id());
    if [zero, full].iter().any(|&e| m.contains(e) || a.contains(e)) {
        return bad("zero or full space present");
    }
    if !is_antichain(poset, m) || !is_antichain(poset, a) {
        return bad("M and A must both be antichains");
    }
    let mut side = None;
    for x in a.iter() {
        let Some(&y) = f.get(&x) else {
            return bad("f is not defined on all of A");
        };
        if !m.contains(y) || !poset.comparable(x, y) {
            return bad("f(a) must be a comparable member of M");
        }
        if poset.comparable_set(x).and_count(m.bits()) != 1 {
            return bad("a member of A is comparable to several members of M");
        }
        let below = poset.less(x, y);
        if *side.get_or_insert(below) != below {
            return bad("A lies on both sides of M");
        }
    }
    if f.keys().any(|&x| !a.contains(x)) {
        return bad("f is defined outside A");
    }
    let q = lat.q() as i64;
    let lhs = lym_sum(poset, m) + rational::ratio(q, q + 1) * lym_sum(poset, a);
    let holds = lhs <= rational::ratio(1, 1);
    Ok((lhs, holds))
}

/// Partition of a poset with at most two levels into as few chains as possible.
///
/// Chains are `[x]` or `[bottom, top]`. A `pinned` comparable pair is forced
/// into the partition; it is an error if that needs more chains.
pub fn dilworth_two_level_partition(p: &GradedPoset, pinned: Option<(usize, usize)>) -> Result<Vec<Vec<usize>>> {
    if p.rank() > 1 {
        return Err(Error::NotTwoLevel);
    }
    let bottom: Vec<usize> = p.level(0).to_vec();
    let top: Vec<usize> = if p.rank() == 1 { p.level(1).to_vec() } else { Vec::new() };
    let all_edges: Vec<(usize, usize)> = bottom.iter().flat_map(|&x| p.up(x).iter().map(move |&y| (x, y))).collect();
    let best = max_bipartite_matching(&bottom, &top, &all_edges);
    let matching = match pinned {
        None => best,
        Some((a, b)) => {
            let (a, b) = if a < p.size() && b < p.size() && p.less(b, a) { (b, a) } else { (a, b) };
            if a >= p.size() || b >= p.size() || !p.less(a, b) {
                return Err(Error::NotComparable);
            }
            let edges: Vec<(usize, usize)> = all_edges.iter().copied().filter(|&(x, y)| x != a && y != b).collect();
            let mut m = max_bipartite_matching(&bottom, &top, &edges);
            m.push((a, b));
            if m.len() < best.len() {
                return Err(Error::BadStructure(format!("pinning ({a}, {b}) needs an extra chain")));
            }
            m.sort_unstable();
            m
        }
    };
    let mut used = vec![false; p.size()];
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(p.size() - matching.len());
    for &(x, y) in &matching {
        used[x] = true;
        used[y] = true;
        chains.push(vec![x, y]);
    }
    chains.extend((0..p.size()).filter(|&x| !used[x]).map(|x| vec![x]));
    chains.sort_unstable();
    Ok(chains)
}

/// Connectivity of the Hasse diagram, treated as an undirected graph.
pub fn hasse_connected(p: &GradedPoset) -> bool {
    if p.size() == 0 {
        return true;
    }
    let mut seen = vec![false; p.size()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for &y in p.up(x).iter().chain(p.down(x)) {
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    reached == p.size()
}

//! Moving a family's extreme level into the neighbouring level.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::matching::max_bipartite_matching;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::lattice::LinearLattice;
use crate::patterns::{free_of, PatternSpec};
use crate::poset::GradedPoset;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Shadow,
    Down,
    Up,
}

/// Outcome of one push. `alpha` is the rank ratio minus `u` (or `v`).
#[derive(Clone, Debug, Serialize)]
pub struct PushReport {
    pub direction: Direction,
    pub input: Vec<usize>,
    pub output: Vec<usize>,
    pub level: usize,
    pub replaced: usize,
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    pub matching: Vec<(usize, usize)>,
}

fn ratio(num: usize, den: usize) -> Rational {
    rational::ratio(BigInt::from(num), BigInt::from(den))
}

fn check_confined(poset: &GradedPoset, q: &Family, ok: impl Fn(usize) -> bool, what: &str) -> Result<()> {
    if let Some(x) = q.iter().find(|&x| !ok(poset.level_of(x))) {
        return Err(Error::LevelViolation(format!("element {x} on level {} {what}", poset.level_of(x))));
    }
    Ok(())
}

/// Replaces the members on level `i` by their whole shadow.
pub fn push_top_to_shadow(poset: &GradedPoset, q: &Family, i: usize, u: usize) -> Result<PushReport> {
    q.check(poset)?;
    if i == 0 || i > poset.rank() {
        return Err(Error::BadLevel(format!("level {i} has no level below it")));
    }
    check_confined(poset, q, |l| l <= i, &format!("above level {i}"))?;
    let b = q.on_level(poset, i);
    let shadow = poset.shadow(&b)?;
    let mut out = q.clone();
    for &x in &b {
        out.remove(x);
    }
    for x in shadow.iter() {
        out.insert(x);
    }
    let r = poset.rank_numbers();
    let alpha = ratio(r[i - 1], r[i]) - rational::ratio(BigInt::from(u), 1);
    let broom = [PatternSpec::Broom(u)];
    if u >= 1 && free_of(poset, q, &broom)? {
        if !free_of(poset, &out, &broom)? {
            return Err(Error::PostconditionViolated("shadow push created a broom".into()));
        }
        if alpha >= rational::zero() {
            let lhs = ratio(out.len(), 1);
            let rhs = ratio(q.len(), 1) + &alpha * ratio(b.len(), 1);
            if lhs < rhs {
                return Err(Error::PostconditionViolated(format!(
                    "|Q'| = {} below |Q| + alpha |B| = {}",
                    out.len(),
                    rational::to_string(&rhs)
                )));
            }
        }
    }
    Ok(PushReport {
        direction: Direction::Shadow,
        input: q.ids(),
        output: out.ids(),
        level: i,
        replaced: b.len(),
        alpha,
        matching: Vec::new(),
    })
}

fn matched_push(poset: &GradedPoset, q: &Family, i: usize, u: usize, v: usize, down: bool) -> Result<PushReport> {
    q.check(poset)?;
    let rank = poset.rank();
    if (down && (i == 0 || i > rank)) || (!down && i >= rank) {
        return Err(Error::BadLevel(format!("cannot push level {i} {}", if down { "down" } else { "up" })));
    }
    if down {
        check_confined(poset, q, |l| l <= i, &format!("above level {i}"))?;
    } else {
        check_confined(poset, q, |l| l >= i, &format!("below level {i}"))?;
    }
    let pats = [PatternSpec::Broom(u), PatternSpec::Fork(v)];
    if !free_of(poset, q, &pats)? {
        return Err(Error::PreconditionFree(format!("family contains broom:{u} or fork:{v}")));
    }
    let r = poset.rank_numbers();
    let (target, bound) = if down { (i - 1, u) } else { (i + 1, v) };
    if r[target] < bound * r[i] {
        return Err(Error::PreconditionRatio(format!(
            "r_{target}/r_{i} = {}/{} is below {bound}",
            r[target], r[i]
        )));
    }
    let alpha = ratio(r[target], r[i]) - rational::ratio(BigInt::from(bound), 1);
    let b = q.on_level(poset, i);
    let mut edges = Vec::new();
    let mut right = Vec::new();
    for &x in &b {
        let nb = if down { poset.down(x) } else { poset.up(x) };
        for &y in nb {
            if !q.contains(y) {
                edges.push((x, y));
                right.push(y);
            }
        }
    }
    let matching = max_bipartite_matching(&b, &right, &edges);
    if matching.len() < b.len() {
        return Err(Error::MatchingFailure(format!(
            "matched {} of {} elements on level {i}",
            matching.len(),
            b.len()
        )));
    }
    let mut out = q.clone();
    for &(x, y) in &matching {
        out.remove(x);
        out.insert(y);
    }
    if out.len() != q.len() {
        return Err(Error::PostconditionViolated("size changed".into()));
    }
    if !free_of(poset, &out, &pats)? {
        return Err(Error::PostconditionViolated("push created a broom or fork".into()));
    }
    if !out.on_level(poset, i).is_empty() {
        return Err(Error::PostconditionViolated(format!("level {i} still occupied")));
    }
    Ok(PushReport {
        direction: if down { Direction::Down } else { Direction::Up },
        input: q.ids(),
        output: out.ids(),
        level: i,
        replaced: b.len(),
        alpha,
        matching,
    })
}

/// Replaces each member on level `i` by a distinct non-member it covers.
pub fn pushdown_matched(poset: &GradedPoset, q: &Family, i: usize, u: usize, v: usize) -> Result<PushReport> {
    matched_push(poset, q, i, u, v, true)
}

/// Replaces each member on level `i` by a distinct non-member covering it.
pub fn pushup_matched(poset: &GradedPoset, q: &Family, i: usize, u: usize, v: usize) -> Result<PushReport> {
    matched_push(poset, q, i, u, v, false)
}

fn pow_at_least(q: u32, e: usize, bound: usize) -> bool {
    BigUint::from(q).pow(e as u32) >= BigUint::from(bound)
}

/// Dimension window `(lo, hi)` reached by [`normalize_to_middle`].
///
/// `hi + 1` is the least level `i` with `q^(2i-n-1) >= u` and `lo - 1` the
/// largest level `i` with `q^(n-2i-1) >= v`, both as exact integer tests.
pub fn middle_bounds(n: usize, q: u32, u: usize, v: usize) -> (usize, usize) {
    let hi = (1..=n)
        .find(|&i| 2 * i > n && pow_at_least(q, 2 * i - n - 1, u))
        .map(|i| i - 1)
        .unwrap_or(n);
    let top_up = (0..n).rev().find(|&i| n > 2 * i && pow_at_least(q, n - 2 * i - 1, v));
    let lo = match top_up {
        // pushing up past `hi` would undo the pushdowns (only when u = v = 1, n odd)
        Some(i) => (i + 1).min(hi),
        None => 0,
    };
    (lo, hi)
}

/// Pushes a broom/fork-free family into the middle dimensions, keeping its size.
pub fn normalize_to_middle(lat: &LinearLattice, q: &Family, u: usize, v: usize) -> Result<Family> {
    let poset = lat.poset();
    let n = lat.n();
    let (lo, hi) = middle_bounds(n, lat.q(), u, v);
    let mut cur = q.clone();
    for i in (hi + 1..=n).rev() {
        let rep = pushdown_matched(poset, &cur, i, u, v)?;
        cur = Family::from_ids(poset, rep.output)?;
    }
    for i in 0..lo {
        let rep = pushup_matched(poset, &cur, i, u, v)?;
        cur = Family::from_ids(poset, rep.output)?;
    }
    if cur.len() != q.len() {
        return Err(Error::PostconditionViolated("normalization changed the size".into()));
    }
    if let Some(x) = cur.iter().find(|&x| !(lo..=hi).contains(&lat.dim_of(x))) {
        return Err(Error::PostconditionViolated(format!("element {x} outside dims {lo}..={hi}")));
    }
    Ok(cur)
}

//! Chain-counting upper bounds on the size of a pattern-free family.
//!
//! Every model is a linear constraint `sum of cost(x) over F <= capacity`
//! obtained by double counting maximal chains; costs may depend on the
//! current partial family and are always lower bounds of the true cost.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::bitset::Bitset;
use crate::patterns::{matcher, PatternSpec};
use crate::poset::GradedPoset;

/// Chain counts restricted to a universe of elements.
#[derive(Clone, Debug)]
pub(crate) struct Weights {
    pub total: u128,
    pub ch: Vec<u128>,
    /// `(y, ch(x, y))` for universe elements `y > x`, largest count first.
    pub above: Vec<Vec<(usize, u128)>>,
    /// `(y, ch(y, x))` for universe elements `y < x`, largest count first.
    pub below: Vec<Vec<(usize, u128)>>,
}

fn small(n: &BigUint) -> Option<u128> {
    u128::try_from(n).ok()
}

impl Weights {
    /// `None` when some count does not fit in 128 bits.
    pub fn new(poset: &GradedPoset, universe: &Bitset) -> Option<Weights> {
        let size = poset.size();
        let (down, up) = poset.chain_counts();
        let total = small(&poset.count_maximal_chains())?;
        let mut ch = vec![0u128; size];
        for x in universe.iter() {
            ch[x] = small(&(&down[x] * &up[x]))?;
        }
        let mut above = vec![Vec::new(); size];
        let mut below = vec![Vec::new(); size];
        for x in universe.iter() {
            let between = poset.chains_from(x);
            for y in poset.above(x).iter().filter(|&y| universe.contains(y)) {
                let c = small(&(&down[x] * &between[y] * &up[y]))?;
                above[x].push((y, c));
                below[y].push((x, c));
            }
        }
        for v in above.iter_mut().chain(below.iter_mut()) {
            v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        }
        Some(Weights {
            total,
            ch,
            above,
            below,
        })
    }

    /// Largest `ch(x, y) / min(ch x, ch y)` over comparable universe pairs, reduced.
    fn max_pair_ratio(&self, universe: &Bitset) -> Option<(u128, u128)> {
        let (mut a, mut b) = (0u128, 1u128);
        for x in universe.iter() {
            for &(y, c) in &self.above[x] {
                let m = self.ch[x].min(self.ch[y]);
                if m == 0 {
                    continue;
                }
                if c.checked_mul(b)? > a.checked_mul(m)? {
                    let g = c.gcd(&m);
                    (a, b) = (c / g, m / g);
                }
            }
        }
        Some((a, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Model {
    /// `|F| <= m` outright.
    Size(usize),
    /// Every maximal chain meets F at most `cap` times.
    ChainCap { cap: u128 },
    /// Comparability graph of F is a matching.
    PairWeight,
    /// Every member has at most one member above it.
    ForkWeight,
    /// Every member has at most one member below it.
    WedgeWeight,
    /// Free of Y and Y'; `rho = a / b <= 1/2` bounds the pair ratio.
    YType { a: u128, b: u128 },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Size(_) => "size-cap",
            Model::ChainCap { .. } => "chain-cap",
            Model::PairWeight => "pair-weight",
            Model::ForkWeight => "fork-weight",
            Model::WedgeWeight => "wedge-weight",
            Model::YType { .. } => "y-type",
        }
    }

    pub fn capacity(&self, w: &Weights) -> Option<u128> {
        match self {
            Model::Size(_) => None,
            Model::ChainCap { cap } => cap.checked_mul(w.total),
            Model::PairWeight => w.total.checked_mul(2),
            Model::ForkWeight | Model::WedgeWeight => Some(w.total),
            Model::YType { b, .. } => w.total.checked_mul(2)?.checked_mul(*b),
        }
    }

    /// Cost of `x` given the included set `s` and the still-possible set `t ⊇ s`.
    pub fn cost(&self, w: &Weights, poset: &GradedPoset, x: usize, s: &Bitset, t: &Bitset) -> u128 {
        let ch = w.ch[x];
        match self {
            Model::Size(_) => 0,
            Model::ChainCap { .. } => ch,
            Model::PairWeight => {
                let mut best = 2 * ch;
                for &(y, c) in w.above[x].iter().chain(&w.below[x]) {
                    if y != x && t.contains(y) {
                        best = best.min(ch + w.ch[y] - c);
                    }
                }
                best
            }
            Model::ForkWeight => ch - w.above[x].iter().find(|(y, _)| t.contains(*y)).map_or(0, |p| p.1),
            Model::WedgeWeight => ch - w.below[x].iter().find(|(y, _)| t.contains(*y)).map_or(0, |p| p.1),
            Model::YType { a, b } => {
                let mid = poset.below(x).intersects(s) && poset.above(x).intersects(s);
                ch * b + if mid { ch * (b - 2 * a) } else { 0 }
            }
        }
    }
}

fn implied(patterns: &[PatternSpec], named: &PatternSpec) -> bool {
    let g = named.to_generic();
    patterns.iter().any(|p| matcher::embeds(&p.to_generic(), &g))
}

/// Models valid for families avoiding `patterns` inside `universe`.
pub(crate) fn applicable(patterns: &[PatternSpec], universe: &Bitset, w: Option<&Weights>) -> Vec<Model> {
    let mut out = Vec::new();
    let anti = patterns.iter().filter(|p| p.to_generic().is_antichain()).map(|p| p.size()).min();
    if let Some(m) = anti {
        out.push(Model::Size(m.saturating_sub(1)));
    }
    let Some(w) = w else {
        return out;
    };
    let min_size = patterns.iter().map(PatternSpec::size).min().unwrap_or(1);
    out.push(Model::ChainCap {
        cap: min_size.saturating_sub(1) as u128,
    });
    let wedge = implied(patterns, &PatternSpec::Wedge);
    let vee = implied(patterns, &PatternSpec::Vee);
    if wedge && vee {
        out.push(Model::PairWeight);
    }
    if vee {
        out.push(Model::ForkWeight);
    }
    if wedge {
        out.push(Model::WedgeWeight);
    }
    if implied(patterns, &PatternSpec::Y) && implied(patterns, &PatternSpec::Yprime) {
        if let Some((a, b)) = w.max_pair_ratio(universe) {
            if 2 * a <= b {
                out.push(Model::YType { a, b });
            }
        }
    }
    out.retain(|m| matches!(m, Model::Size(_)) || m.capacity(w).is_some());
    out
}

/// Largest `k` with `prefix[k] <= budget`.
pub(crate) fn k_of(prefix: &[u128], budget: u128) -> usize {
    prefix.partition_point(|&p| p <= budget) - 1
}

/// As [`k_of`] with the sorted element at position `j` left out.
pub(crate) fn k_without(prefix: &[u128], j: usize, budget: u128) -> usize {
    let k = k_of(prefix, budget);
    if k <= j {
        return k;
    }
    let cj = prefix[j + 1] - prefix[j];
    k_of(prefix, budget.saturating_add(cj)) - 1
}

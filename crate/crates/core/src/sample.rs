//! Seeded random families for property runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::Bitset;
use crate::family::Family;
use crate::patterns::{creates, PatternSpec};
use crate::poset::GradedPoset;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Universe without the least and greatest element.
pub fn proper_universe(poset: &GradedPoset) -> Bitset {
    let mut u = Bitset::full(poset.size());
    for &x in poset.level(0).iter().chain(poset.level(poset.rank())) {
        u.remove(x);
    }
    u
}

/// Universe of the elements on levels `lo..=hi`.
pub fn level_universe(poset: &GradedPoset, lo: usize, hi: usize) -> Bitset {
    let ids = (lo..=hi.min(poset.rank())).flat_map(|k| poset.level(k).iter().copied());
    Bitset::from_ids(poset.size(), ids)
}

/// Each element of `universe` independently with probability `p`.
pub fn random_subset<R: Rng>(poset: &GradedPoset, universe: &Bitset, p: f64, rng: &mut R) -> Family {
    let members = Bitset::from_ids(poset.size(), universe.iter().filter(|_| rng.gen_bool(p)));
    Family::from_bitset(poset, members).expect("capacity matches")
}

/// Scans `universe` in random order and keeps every element that creates
/// none of `patterns`, stopping after `cap` members (uniform in `1..=|universe|`
/// when `None`).
pub fn random_free_family<R: Rng>(
    poset: &GradedPoset,
    universe: &Bitset,
    patterns: &[PatternSpec],
    cap: Option<usize>,
    rng: &mut R,
) -> Family {
    let mut order = universe.to_vec();
    order.shuffle(rng);
    let cap = cap.unwrap_or_else(|| rng.gen_range(1..=order.len().max(1)));
    let mut s = Bitset::new(poset.size());
    for x in order {
        if s.count() >= cap {
            break;
        }
        if !patterns.iter().any(|p| creates(poset, &s, x, p)) {
            s.insert(x);
        }
    }
    Family::from_bitset(poset, s).expect("capacity matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::patterns::free_of_generic;

    #[test]
    fn seeded_runs_repeat_and_stay_free() {
        let l = build_lattice(4, 2).unwrap();
        let u = proper_universe(l.poset());
        let ps = [PatternSpec::Wedge, PatternSpec::Vee];
        let a: Vec<Family> = (0..20).map(|i| random_free_family(l.poset(), &u, &ps, None, &mut rng(i))).collect();
        let b: Vec<Family> = (0..20).map(|i| random_free_family(l.poset(), &u, &ps, None, &mut rng(i))).collect();
        assert_eq!(a, b);
        for f in &a {
            assert!(free_of_generic(l.poset(), f, &ps).unwrap());
            assert!(f.bits().is_subset(&u));
        }
        assert!(a.iter().map(Family::len).collect::<std::collections::BTreeSet<_>>().len() > 3);
    }

    #[test]
    fn universes() {
        let l = build_lattice(3, 2).unwrap();
        assert_eq!(proper_universe(l.poset()).count(), 14);
        assert_eq!(level_universe(l.poset(), 1, 1).count(), 7);
        assert_eq!(level_universe(l.poset(), 0, 9).count(), 16);
        let f = random_subset(l.poset(), &Bitset::full(16), 1.0, &mut rng(1));
        assert_eq!(f.len(), 16);
    }
}

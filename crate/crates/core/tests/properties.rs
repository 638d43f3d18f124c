use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;
use qlattice::gfmat::{self, Field, Matrix};
use qlattice::normalize::{
    dilworth_two_level_partition, k_delta, lym_sum, max_bipartite_matching, push_top_to_shadow, pushdown_matched,
    pushup_matched,
};
use qlattice::patterns::{contains_bits, contains_generic, free_of};
use qlattice::poset::two_level;
use qlattice::rational::{self, Rational};
use qlattice::{build_lattice, Bitset, Family, LinearLattice, PatternSpec};

fn l42() -> &'static LinearLattice {
    static L: OnceLock<LinearLattice> = OnceLock::new();
    L.get_or_init(|| build_lattice(4, 2).unwrap())
}

fn l32() -> &'static LinearLattice {
    static L: OnceLock<LinearLattice> = OnceLock::new();
    L.get_or_init(|| build_lattice(3, 2).unwrap())
}

fn family(l: &LinearLattice, bits: &[bool]) -> Family {
    Family::from_ids(l.poset(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap()
}

fn rationals() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..40, 1i64..40), 0..30)
        .prop_map(|v| v.into_iter().map(|(a, b)| rational::ratio(a, b)).collect())
}

fn named() -> impl Strategy<Value = PatternSpec> {
    prop_oneof![
        Just(PatternSpec::Wedge),
        Just(PatternSpec::Vee),
        Just(PatternSpec::Butterfly),
        Just(PatternSpec::Y),
        Just(PatternSpec::Yprime),
        (1usize..5).prop_map(PatternSpec::Broom),
        (1usize..5).prop_map(PatternSpec::Fork),
        (0usize..3).prop_map(PatternSpec::Yk),
        (0usize..3).prop_map(PatternSpec::Ykprime),
        (1usize..6).prop_map(PatternSpec::Chain),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn k_delta_is_monotone_and_order_free(vals in rationals(), a in 0i64..60, b in 0i64..60, seed in any::<u64>()) {
        let (lo, hi) = (a.min(b), a.max(b));
        let d1 = rational::ratio(lo, 4);
        let d2 = rational::ratio(hi, 4);
        prop_assert!(k_delta(&vals, &d1) <= k_delta(&vals, &d2));
        let mut shuffled = vals.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        prop_assert_eq!(k_delta(&vals, &d2), k_delta(&shuffled, &d2));
    }

    #[test]
    fn rref_idempotent_and_rank_nullity(q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]), rows in 1usize..5, cols in 1usize..6, seed in prop::collection::vec(any::<u8>(), 30)) {
        let f = Field::new(q).unwrap();
        let entries: Vec<u8> = (0..rows * cols).map(|i| seed[i] % q as u8).collect();
        let m = Matrix::new(rows, cols, entries);
        let r = gfmat::rref(&f, &m);
        prop_assert_eq!(gfmat::rref(&f, &r.matrix).matrix, r.matrix.clone());
        let ns = gfmat::nullspace_basis(&f, &m);
        prop_assert_eq!(r.rank + ns.rows(), cols);
    }

    #[test]
    fn containment_is_monotone(bits in prop::collection::vec(any::<bool>(), 67), extra in prop::collection::vec(any::<bool>(), 67), p in named()) {
        let l = l42();
        let f = family(l, &bits);
        let both: Vec<bool> = bits.iter().zip(&extra).map(|(a, b)| *a || *b).collect();
        let g = family(l, &both);
        if contains_bits(l.poset(), f.bits(), &p) {
            prop_assert!(contains_bits(l.poset(), g.bits(), &p));
        }
        prop_assert_eq!(contains_bits(l.poset(), g.bits(), &p), contains_generic(l.poset(), g.bits(), &p));
    }

    #[test]
    fn chain_contains_y_types(k in 0usize..2, start in 0usize..15) {
        let l = l42();
        let p = l.poset();
        let mut chain = vec![p.level(0)[0]];
        let mut x = chain[0];
        while let Some(&y) = p.up(x).get(start % p.up(x).len().max(1)) {
            chain.push(y);
            x = y;
        }
        let f = Family::from_ids(p, chain.iter().copied().take(k + 3)).unwrap();
        prop_assert!(contains_bits(p, f.bits(), &PatternSpec::Yk(k)));
        prop_assert!(contains_bits(p, f.bits(), &PatternSpec::Ykprime(k)));
    }

    #[test]
    fn shadow_push_size_bound(mask in any::<u16>(), below in prop::collection::vec(any::<bool>(), 15)) {
        let l = l42();
        let p = l.poset();
        let top: Vec<usize> = l.level(3).iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        let low: Vec<usize> = l.level(1).iter().zip(&below).filter(|(_, &b)| b).map(|(&x, _)| x).collect();
        let f = Family::from_ids(p, top.iter().chain(&low).copied()).unwrap();
        let rep = push_top_to_shadow(p, &f, 3, 2).unwrap();
        prop_assert!(rep.output.iter().all(|&x| p.level_of(x) < 3));
        let out = Family::from_ids(p, rep.output.iter().copied()).unwrap();
        if free_of(p, &f, &[PatternSpec::Broom(2)]).unwrap() {
            let lhs = rational::ratio(out.len() as i64, 1);
            let rhs = rational::ratio(f.len() as i64, 1) + &rep.alpha * rational::ratio(top.len() as i64, 1);
            prop_assert!(lhs >= rhs);
        }
    }

    #[test]
    fn matched_pushes_keep_size_and_freeness(seed in any::<u64>()) {
        let l = l42();
        let p = l.poset();
        let pats = [PatternSpec::Broom(2), PatternSpec::Fork(2)];
        let low = qlattice::sample::level_universe(p, 0, 3);
        let f = qlattice::sample::random_free_family(p, &low, &pats, None, &mut qlattice::sample::rng(seed));
        let rep = pushdown_matched(p, &f, 3, 2, 2).unwrap();
        let g = Family::from_ids(p, rep.output.iter().copied()).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert!(free_of(p, &g, &pats).unwrap());
        prop_assert!(g.iter().all(|x| p.level_of(x) < 3));
        let high = qlattice::sample::level_universe(p, 1, 4);
        let f = qlattice::sample::random_free_family(p, &high, &pats, None, &mut qlattice::sample::rng(seed ^ 1));
        let rep = pushup_matched(p, &f, 1, 2, 2).unwrap();
        let g = Family::from_ids(p, rep.output.iter().copied()).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert!(free_of(p, &g, &pats).unwrap());
        prop_assert!(g.iter().all(|x| p.level_of(x) > 1));
    }

    #[test]
    fn dilworth_count_is_konig(edges in prop::collection::btree_set((0usize..6, 0usize..6), 0..20)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let p = two_level("random", 6, 6, &edges).unwrap();
        let chains = dilworth_two_level_partition(&p, None).unwrap();
        let left: Vec<usize> = p.level(0).to_vec();
        let right: Vec<usize> = p.level(1).to_vec();
        let pairs: Vec<(usize, usize)> = left.iter().flat_map(|&a| p.up(a).iter().map(move |&b| (a, b))).collect();
        let m = max_bipartite_matching(&left, &right, &pairs).len();
        prop_assert_eq!(chains.len(), p.size() - m);
        let mut seen = Bitset::new(p.size());
        for c in &chains {
            prop_assert!(c.len() <= 2);
            for &x in c {
                prop_assert!(!seen.contains(x));
                seen.insert(x);
            }
        }
        prop_assert_eq!(seen.count(), p.size());
    }

    #[test]
    fn antichains_have_lym_sum_at_most_one(seed in any::<u64>()) {
        let l = l42();
        let p = l.poset();
        let f = qlattice::sample::random_free_family(p, &Bitset::full(p.size()), &[PatternSpec::Chain(2)], None, &mut qlattice::sample::rng(seed));
        prop_assert!(lym_sum(p, &f) <= rational::ratio(1, 1));
    }
}

#[test]
fn broom_fork_duality_on_small_families() {
    let l = l32();
    let p = l.poset();
    let mut checked = 0;
    for mask in 0u32..1 << 16 {
        if mask.count_ones() > 6 {
            continue;
        }
        let f = Family::from_ids(p, (0..16).filter(|i| mask >> i & 1 == 1)).unwrap();
        let d = Bitset::from_ids(p.size(), f.iter().map(|x| l.dual(x)));
        for u in 1..=4 {
            assert_eq!(
                contains_bits(p, f.bits(), &PatternSpec::Broom(u)),
                contains_bits(p, &d, &PatternSpec::Fork(u)),
                "mask {mask:#x} u {u}"
            );
        }
        checked += 1;
    }
    assert_eq!(checked, 14893);
}

#[test]
fn chains_through_a_level_sum_to_the_total() {
    for (n, q) in [(3, 2), (3, 3), (4, 2)] {
        let l = build_lattice(n, q).unwrap();
        let total = l.count_maximal_chains();
        for k in 0..=n {
            let s: BigUint = l.level(k).iter().map(|&x| l.chains_through(x)).sum();
            assert_eq!(s, total);
        }
    }
}

use std::collections::BTreeSet;

use qlattice::extremal::{enumerate_optima, exact_max, Filter, SearchOptions, SearchProblem};
use qlattice::patterns::free_of_generic;
use qlattice::sample::rng;
use qlattice::{build_lattice, Family, GradedPoset, PatternSpec};
use rand::seq::SliceRandom;

fn wedge_vee() -> Vec<PatternSpec> {
    vec![PatternSpec::Wedge, PatternSpec::Vee]
}

fn mid(p: &GradedPoset) -> Vec<usize> {
    (1..p.rank()).flat_map(|k| p.level(k).iter().copied()).collect()
}

/// Largest subset of `vs` whose comparability graph has maximum degree 1, by
/// branching on a vertex: leave it out, take it alone, or take it with one neighbour.
fn matching_oracle(p: &GradedPoset, vs: &[usize]) -> usize {
    fn go(adj: &[Vec<usize>], alive: &mut Vec<bool>, size: usize, best: &mut usize) {
        let left = alive.iter().filter(|&&a| a).count();
        if size + left <= *best {
            return;
        }
        let Some(v) = alive.iter().position(|&a| a) else {
            *best = size;
            return;
        };
        alive[v] = false;
        go(adj, alive, size, best);
        let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| alive[w]).collect();
        let mut off: Vec<usize> = nbrs.clone();
        for &w in &off {
            alive[w] = false;
        }
        go(adj, alive, size + 1, best);
        for &w in &nbrs {
            let extra: Vec<usize> = adj[w].iter().copied().filter(|&z| alive[z]).collect();
            for &z in &extra {
                alive[z] = false;
            }
            go(adj, alive, size + 2, best);
            for &z in &extra {
                alive[z] = true;
            }
        }
        for w in off.drain(..) {
            alive[w] = true;
        }
        alive[v] = true;
    }
    let adj: Vec<Vec<usize>> = vs
        .iter()
        .map(|&x| (0..vs.len()).filter(|&j| p.comparable(x, vs[j])).collect())
        .collect();
    let mut best = 0;
    go(&adj, &mut vec![true; vs.len()], 0, &mut best);
    best
}

#[test]
fn wedge_vee_matches_matching_reduction() {
    for q in [2, 3] {
        let l = build_lattice(3, q).unwrap();
        let p = l.poset();
        let want = matching_oracle(p, &mid(p));
        let full = exact_max(&SearchProblem::new(p, wedge_vee())).unwrap();
        let window = exact_max(&SearchProblem::new(p, wedge_vee()).with_levels(1, 2)).unwrap();
        assert_eq!(full.optimum, want, "q = {q}");
        assert_eq!(window.optimum, want, "q = {q}");
    }
}

#[test]
fn matching_oracle_agrees_with_plain_enumeration() {
    let l = build_lattice(3, 2).unwrap();
    let p = l.poset();
    let vs = mid(p);
    let mut best = 0;
    for mask in 0u32..1 << vs.len() {
        let s: Vec<usize> = (0..vs.len()).filter(|b| mask >> b & 1 == 1).map(|b| vs[b]).collect();
        if s.iter().all(|&x| s.iter().filter(|&&y| p.comparable(x, y)).count() <= 1) {
            best = best.max(s.len());
        }
    }
    assert_eq!(matching_oracle(p, &vs), best);
}

#[test]
fn optimum_is_invariant_under_relabelling() {
    let l = build_lattice(3, 2).unwrap();
    let p = l.poset();
    let cases = [
        (wedge_vee(), Filter::Full),
        (vec![PatternSpec::Butterfly], Filter::Proper),
        (vec![PatternSpec::Chain(3)], Filter::Full),
        (vec![PatternSpec::Broom(3)], Filter::Full),
    ];
    for seed in 0..4 {
        let mut perm: Vec<usize> = (0..p.size()).collect();
        perm.shuffle(&mut rng(seed));
        let shuffled = p.permuted(&perm).unwrap();
        for (pats, filter) in &cases {
            let a = enumerate_optima(&SearchProblem::new(p, pats.clone()).with_filter(*filter)).unwrap();
            let b = enumerate_optima(&SearchProblem::new(&shuffled, pats.clone()).with_filter(*filter)).unwrap();
            assert_eq!(a.optimum, b.optimum, "{pats:?}");
            let mapped: BTreeSet<Vec<usize>> = a
                .witnesses
                .iter()
                .map(|w| {
                    let mut v: Vec<usize> = w.iter().map(|&x| perm[x]).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            assert_eq!(mapped, b.witnesses.iter().cloned().collect(), "{pats:?}");
        }
    }
}

#[test]
fn duality_permutes_optima_of_self_dual_problems() {
    for (n, pats) in [(3, wedge_vee()), (4, vec![PatternSpec::Butterfly]), (4, vec![PatternSpec::Y, PatternSpec::Yprime])] {
        let l = build_lattice(n, 2).unwrap();
        let c = enumerate_optima(&SearchProblem::new(l.poset(), pats.clone())).unwrap();
        let set: BTreeSet<Vec<usize>> = c.witnesses.iter().cloned().collect();
        let dual: BTreeSet<Vec<usize>> = c
            .witnesses
            .iter()
            .map(|w| {
                let mut v: Vec<usize> = w.iter().map(|&x| l.dual(x)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        assert_eq!(set, dual, "n = {n} {pats:?}");
    }
}

#[test]
fn witnesses_pass_the_generic_matcher() {
    let l = build_lattice(4, 2).unwrap();
    let p = l.poset();
    for pats in [
        vec![PatternSpec::Broom(2), PatternSpec::Fork(2)],
        vec![PatternSpec::Chain(2)],
        vec![PatternSpec::Chain(3)],
        vec![PatternSpec::Yk(2), PatternSpec::Ykprime(2)],
    ] {
        let c = exact_max(&SearchProblem::new(p, pats.clone())).unwrap();
        assert!(c.exhaustive);
        for f in c.families(p).unwrap() {
            assert!(free_of_generic(p, &f, &pats).unwrap());
            assert_eq!(f.len(), c.optimum);
        }
    }
    let antichain = exact_max(&SearchProblem::new(p, vec![PatternSpec::Chain(2)])).unwrap();
    assert_eq!(antichain.optimum, 35);
}

#[test]
fn worker_count_gives_identical_certificates() {
    let l = build_lattice(3, 3).unwrap();
    let run = |workers| {
        let opts = SearchOptions { workers, ..SearchOptions::default() };
        let c = enumerate_optima(&SearchProblem::new(l.poset(), wedge_vee()).with_options(opts)).unwrap();
        serde_json::to_string(&c).unwrap()
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(0));
}

#[test]
fn small_budget_reports_partial_result() {
    let l = build_lattice(4, 2).unwrap();
    let pats = vec![PatternSpec::Broom(3), PatternSpec::Fork(3)];
    let opts = SearchOptions { budget: 2000, workers: 1 };
    let err = exact_max(&SearchProblem::new(l.poset(), pats.clone()).with_options(opts)).unwrap_err();
    match err {
        qlattice::Error::BudgetExceeded { best, .. } => {
            assert!(!best.exhaustive);
            let fams: Vec<Family> = best.families(l.poset()).unwrap();
            for f in fams {
                assert!(free_of_generic(l.poset(), &f, &pats).unwrap());
            }
        }
        e => panic!("unexpected {e}"),
    }
}

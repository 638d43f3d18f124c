//! Include/exclude depth-first search with forward checking and probing.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::bounds::{k_of, k_without, Model, Weights};
use crate::bitset::Bitset;
use crate::patterns::{creates, PatternSpec};
use crate::poset::GradedPoset;

const FRONTIER_DEPTH: usize = 6;

/// One search over a fixed universe and pattern set.
pub(crate) struct Instance<'a> {
    pub poset: &'a GradedPoset,
    pub universe: Bitset,
    pub patterns: Vec<PatternSpec>,
    pub models: Vec<Model>,
    pub weights: Option<&'a Weights>,
    order: Vec<usize>,
}

pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
    aborted: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    pub fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    fn tick(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted()
    }
}

#[derive(Clone, Debug)]
enum Mode {
    /// Looking for anything larger than `best`.
    Max { best: usize, witness: Option<Bitset> },
    /// Collecting every free family of size `target`.
    Enumerate { target: usize, found: Vec<Bitset> },
}

impl Mode {
    fn need(&self) -> usize {
        match self {
            Mode::Max { best, .. } => best + 1,
            Mode::Enumerate { target, .. } => *target,
        }
    }
}

pub(crate) struct Outcome {
    pub best: Option<(usize, Bitset)>,
    pub found: Vec<Bitset>,
    pub nodes: u64,
}

struct Search<'a, 'b> {
    inst: &'b Instance<'a>,
    budget: &'b Budget,
    mode: Mode,
    nodes: u64,
}

struct Evaluated {
    rem: u128,
    prefix: Vec<u128>,
    sorted: Vec<(u128, usize)>,
}

impl<'a> Instance<'a> {
    pub fn new(
        poset: &'a GradedPoset,
        universe: Bitset,
        patterns: Vec<PatternSpec>,
        models: Vec<Model>,
        weights: Option<&'a Weights>,
    ) -> Self {
        let mut order: Vec<usize> = universe.iter().collect();
        if let Some(w) = weights {
            order.sort_by_key(|&x| (w.ch[x], x));
        }
        Instance {
            poset,
            universe,
            patterns,
            models,
            weights,
            order,
        }
    }

    fn creates_any(&self, s: &Bitset, d: usize) -> bool {
        self.patterns.iter().any(|p| creates(self.poset, s, d, p))
    }

    /// Candidates of `c` that can join the free set `s`.
    fn forward(&self, s: &Bitset, c: &Bitset) -> Bitset {
        let mut out = c.clone();
        for x in c.iter() {
            if self.creates_any(s, x) {
                out.remove(x);
            }
        }
        out
    }

    pub fn root(&self) -> (Bitset, Bitset) {
        let s = Bitset::new(self.poset.size());
        let c = self.forward(&s, &self.universe);
        (s, c)
    }

    /// Takes elements in branch order whenever they fit.
    pub fn greedy(&self) -> Bitset {
        let (mut s, _) = self.root();
        for &x in &self.order {
            if !self.creates_any(&s, x) {
                s.insert(x);
            }
        }
        s
    }

    pub fn maximize(&self, best: usize, budget: &Budget, workers: usize) -> Outcome {
        self.run(Mode::Max { best, witness: None }, budget, workers)
    }

    pub fn enumerate(&self, target: usize, budget: &Budget, workers: usize) -> Outcome {
        self.run(
            Mode::Enumerate {
                target,
                found: Vec::new(),
            },
            budget,
            workers,
        )
    }

    fn run(&self, mode: Mode, budget: &Budget, workers: usize) -> Outcome {
        let (s, c) = self.root();
        let mut head = Search {
            inst: self,
            budget,
            mode,
            nodes: 0,
        };
        let mut frontier = Vec::new();
        head.collect(s, c, FRONTIER_DEPTH, &mut frontier);
        let start = match &head.mode {
            Mode::Enumerate { target, .. } => Mode::Enumerate {
                target: *target,
                found: Vec::new(),
            },
            m => m.clone(),
        };
        let solve = |(s, c): &(Bitset, Bitset)| {
            let mut sub = Search {
                inst: self,
                budget,
                mode: start.clone(),
                nodes: 0,
            };
            sub.dfs(s.clone(), c.clone());
            (sub.mode, sub.nodes)
        };
        let results: Vec<(Mode, u64)> = if workers == 1 {
            frontier.iter().map(solve).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build();
            match pool {
                Ok(pool) => pool.install(|| frontier.par_iter().map(solve).collect()),
                Err(_) => frontier.iter().map(solve).collect(),
            }
        };
        let mut nodes = head.nodes;
        let mut out = Outcome {
            best: None,
            found: Vec::new(),
            nodes: 0,
        };
        for mode in std::iter::once(head.mode).chain(results.into_iter().map(|(m, n)| {
            nodes += n;
            m
        })) {
            match mode {
                Mode::Max {
                    best,
                    witness: Some(w),
                } => {
                    if out.best.as_ref().is_none_or(|(b, _)| best > *b) {
                        out.best = Some((best, w));
                    }
                }
                Mode::Max { witness: None, .. } => {}
                Mode::Enumerate { found, .. } => out.found.extend(found),
            }
        }
        out.nodes = nodes;
        out
    }
}

impl Search<'_, '_> {
    fn dfs(&mut self, s: Bitset, c: Bitset) {
        if let Some((s, c, x)) = self.expand(s, c) {
            let (a, b) = self.children(s, c, x);
            self.dfs(a.0, a.1);
            self.dfs(b.0, b.1);
        }
    }

    fn collect(&mut self, s: Bitset, c: Bitset, depth: usize, out: &mut Vec<(Bitset, Bitset)>) {
        if depth == 0 {
            out.push((s, c));
            return;
        }
        if let Some((s, c, x)) = self.expand(s, c) {
            let (a, b) = self.children(s, c, x);
            self.collect(a.0, a.1, depth - 1, out);
            self.collect(b.0, b.1, depth - 1, out);
        }
    }

    fn children(&self, s: Bitset, c: Bitset, x: usize) -> ((Bitset, Bitset), (Bitset, Bitset)) {
        let (mut si, mut ci) = (s.clone(), c.clone());
        self.include(&mut si, &mut ci, x);
        let mut ce = c;
        ce.remove(x);
        ((si, ci), (s, ce))
    }

    fn include(&self, s: &mut Bitset, c: &mut Bitset, x: usize) {
        s.insert(x);
        c.remove(x);
        *c = self.inst.forward(s, c);
    }

    /// Records `s`, then shrinks `c` by probing. Returns the branching element
    /// unless the node is closed.
    fn expand(&mut self, mut s: Bitset, mut c: Bitset) -> Option<(Bitset, Bitset, usize)> {
        self.nodes += 1;
        if !self.budget.tick() {
            return None;
        }
        loop {
            let size = s.count();
            match &mut self.mode {
                Mode::Max { best, witness } => {
                    if size > *best {
                        *best = size;
                        *witness = Some(s.clone());
                    }
                }
                Mode::Enumerate { target, found } => {
                    if size >= *target {
                        found.push(s.clone());
                        return None;
                    }
                }
            }
            let need = self.mode.need();
            if size + c.count() < need || c.is_empty() {
                return None;
            }
            let evals = self.evaluate(&s, &c);
            let mut bound = size + c.count();
            for (m, e) in self.inst.models.iter().zip(&evals) {
                let b = match (m, e) {
                    (Model::Size(k), _) => *k,
                    (_, Some(e)) => size + k_of(&e.prefix, e.rem),
                    _ => continue,
                };
                bound = bound.min(b);
            }
            if bound < need {
                return None;
            }
            let (drop, force) = self.probe(&s, &c, &evals, need);
            if !drop.is_empty() {
                c.andnot_with(&drop);
                continue;
            }
            if let Some(x) = force {
                self.include(&mut s, &mut c, x);
                continue;
            }
            let x = *self.inst.order.iter().find(|&&x| c.contains(x))?;
            return Some((s, c, x));
        }
    }

    fn evaluate(&self, s: &Bitset, c: &Bitset) -> Vec<Option<Evaluated>> {
        let Some(w) = self.inst.weights else {
            return self.inst.models.iter().map(|_| None).collect();
        };
        let t = s.or(c);
        self.inst
            .models
            .iter()
            .map(|m| {
                let cap = m.capacity(w)?;
                let spent: u128 = s.iter().map(|x| m.cost(w, self.inst.poset, x, s, &t)).sum();
                let mut sorted: Vec<(u128, usize)> = c.iter().map(|x| (m.cost(w, self.inst.poset, x, s, &t), x)).collect();
                sorted.sort_unstable();
                let mut prefix = Vec::with_capacity(sorted.len() + 1);
                prefix.push(0u128);
                for &(cost, _) in &sorted {
                    prefix.push(prefix.last().unwrap().saturating_add(cost));
                }
                Some(Evaluated {
                    rem: cap.saturating_sub(spent),
                    prefix,
                    sorted,
                })
            })
            .collect()
    }

    /// Candidates that cannot reach `need` when included, and the first
    /// candidate that every completion reaching `need` must contain.
    fn probe(&self, s: &Bitset, c: &Bitset, evals: &[Option<Evaluated>], need: usize) -> (Bitset, Option<usize>) {
        let size = s.count();
        let n = self.inst.poset.size();
        let mut inc = vec![usize::MAX; n];
        let mut exc = vec![usize::MAX; n];
        let free = c.count();
        for x in c.iter() {
            inc[x] = size + free;
            exc[x] = size + free - 1;
        }
        for (m, e) in self.inst.models.iter().zip(evals) {
            match (m, e) {
                (Model::Size(k), _) => {
                    for x in c.iter() {
                        inc[x] = inc[x].min(*k);
                        exc[x] = exc[x].min(*k);
                    }
                }
                (_, Some(e)) => {
                    for (j, &(cost, x)) in e.sorted.iter().enumerate() {
                        let with = if cost > e.rem {
                            0
                        } else {
                            size + 1 + k_without(&e.prefix, j, e.rem - cost)
                        };
                        inc[x] = inc[x].min(with);
                        exc[x] = exc[x].min(size + k_without(&e.prefix, j, e.rem));
                    }
                }
                _ => {}
            }
        }
        let mut drop = Bitset::new(n);
        for x in c.iter() {
            if inc[x] < need {
                drop.insert(x);
            }
        }
        let force = self.inst.order.iter().copied().find(|&x| c.contains(x) && exc[x] < need);
        (drop, force)
    }
}

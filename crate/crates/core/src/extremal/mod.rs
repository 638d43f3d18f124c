//! Exact extremal numbers `ex(P; patterns)` with certificates, plus the
//! structural checks built on them.

mod bounds;
mod engine;
mod verify;

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::patterns::{free_of_generic, matcher, GenericPattern, PatternSpec};
use crate::poset::{GradedPoset, PosetId};
use bounds::{applicable, Weights};
use engine::{Budget, Instance};

pub use verify::{
    classify_interval_type, conjecture_check, double_count_check, fano_configurations, verify_theorem_a,
    verify_theorem_b, verify_theorem_c, Clause, ConjectureReport, DoubleCount, IntervalType, Verdict, VerifyReport,
};

pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Which elements a family may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    Full,
    /// Leaves out the least and the greatest element.
    Proper,
}

impl Filter {
    /// Proper for butterfly and Y-type problems, full otherwise.
    pub fn default_for(patterns: &[PatternSpec]) -> Filter {
        let ytype = patterns
            .iter()
            .any(|p| matches!(p, PatternSpec::Butterfly | PatternSpec::Y | PatternSpec::Yprime));
        if ytype {
            Filter::Proper
        } else {
            Filter::Full
        }
    }
}

/// Node budget and worker count for a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    /// 0 picks the number of available cores.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            workers: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchProblem<'a> {
    pub poset: &'a GradedPoset,
    pub patterns: Vec<PatternSpec>,
    pub filter: Filter,
    /// Inclusive level window.
    pub levels: Option<(usize, usize)>,
    pub options: SearchOptions,
}

impl<'a> SearchProblem<'a> {
    pub fn new(poset: &'a GradedPoset, patterns: Vec<PatternSpec>) -> Self {
        let filter = Filter::default_for(&patterns);
        SearchProblem {
            poset,
            patterns,
            filter,
            levels: None,
            options: SearchOptions::default(),
        }
    }

    pub fn with_filter(mut self, filter: Filter) -> Self {
        self.filter = filter;
        self
    }

    pub fn with_levels(mut self, lo: usize, hi: usize) -> Self {
        self.levels = Some((lo, hi));
        self
    }

    pub fn with_options(mut self, options: SearchOptions) -> Self {
        self.options = options;
        self
    }

    /// Elements allowed by the filter and the level window.
    pub fn universe(&self) -> Bitset {
        let p = self.poset;
        let mut u = Bitset::full(p.size());
        if self.filter == Filter::Proper {
            if p.level(0).len() == 1 {
                u.remove(p.level(0)[0]);
            }
            if p.rank() > 0 && p.level(p.rank()).len() == 1 {
                u.remove(p.level(p.rank())[0]);
            }
        }
        if let Some((lo, hi)) = self.levels {
            for x in 0..p.size() {
                if !(lo..=hi).contains(&p.level_of(x)) {
                    u.remove(x);
                }
            }
        }
        u
    }

    fn validate(&self) -> Result<()> {
        if self.patterns.is_empty() {
            return Err(Error::InvalidPattern("no patterns given".into()));
        }
        for p in &self.patterns {
            p.validate()?;
        }
        if let Some((lo, hi)) = self.levels {
            if lo > hi || hi > self.poset.rank() {
                return Err(Error::BadLevel(format!("window {lo}..{hi}")));
            }
        }
        Ok(())
    }

    pub fn info(&self) -> ProblemInfo {
        let (n, q) = match self.poset.id() {
            PosetId::Linear { n, q } => (Some(*n), Some(*q)),
            PosetId::Boolean { n } => (Some(*n), None),
            PosetId::Custom { .. } => (None, None),
        };
        ProblemInfo {
            poset: self.poset.id().clone(),
            n,
            q,
            patterns: self.patterns.iter().map(ToString::to_string).collect(),
            filter: self.filter,
            levels: self.levels.map(|(a, b)| [a, b]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInfo {
    pub poset: PosetId,
    pub n: Option<u32>,
    pub q: Option<u32>,
    pub patterns: Vec<String>,
    pub filter: Filter,
    pub levels: Option<[usize; 2]>,
}

/// Result of an exact search. Witness ids are ids of the searched poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub v: u32,
    pub problem: ProblemInfo,
    pub optimum: usize,
    pub exhaustive: bool,
    pub witnesses: Vec<Vec<usize>>,
    pub nodes: u64,
    pub bound: String,
}

impl Certificate {
    pub fn families(&self, poset: &GradedPoset) -> Result<Vec<Family>> {
        self.witnesses.iter().map(|w| Family::from_ids(poset, w.iter().copied())).collect()
    }
}

/// Patterns a family `F0` must avoid so that `F0` plus the included global
/// bottom and/or top avoids `patterns`. `None` if that is impossible.
fn derived_patterns(patterns: &[PatternSpec], bottom: bool, top: bool) -> Option<Vec<PatternSpec>> {
    let mut items: Vec<(PatternSpec, GenericPattern)> = Vec::new();
    for p in patterns {
        let g = p.to_generic();
        let mut local = vec![(p.clone(), g.clone())];
        let mins = g.minimal();
        let maxs = g.maximal();
        let mut derived = Vec::new();
        if bottom {
            derived.extend(mins.iter().map(|&a| g.without(&[a])));
        }
        if top {
            derived.extend(maxs.iter().map(|&b| g.without(&[b])));
        }
        if bottom && top {
            for &a in &mins {
                derived.extend(maxs.iter().filter(|&&b| b != a).map(|&b| g.without(&[a, b])));
            }
        }
        for d in derived {
            if d.size() == 0 {
                return None;
            }
            local.push((PatternSpec::canonical(&d), d));
        }
        items.extend(local);
    }
    let mut unique: Vec<(PatternSpec, GenericPattern)> = Vec::new();
    for it in items {
        if !unique.iter().any(|u| matcher::isomorphic(&u.1, &it.1)) {
            unique.push(it);
        }
    }
    let keep: Vec<PatternSpec> = unique
        .iter()
        .enumerate()
        .filter(|(j, (_, gj))| !unique.iter().enumerate().any(|(i, (_, gi))| i != *j && matcher::embeds(gi, gj)))
        .map(|(_, (p, _))| p.clone())
        .collect();
    Some(keep)
}

struct Case {
    fixed: Vec<usize>,
    patterns: Vec<PatternSpec>,
}

/// The search split on whether the global bottom/top of the universe is used.
struct Plan<'p> {
    problem: &'p SearchProblem<'p>,
    core: Bitset,
    weights: Option<Weights>,
    cases: Vec<Case>,
}

impl<'p> Plan<'p> {
    fn new(problem: &'p SearchProblem<'p>) -> Result<Self> {
        problem.validate()?;
        let poset = problem.poset;
        let universe = problem.universe();
        let mut bottom = None;
        let mut top = None;
        if universe.count() >= 2 {
            for x in universe.iter() {
                if universe.andnot(poset.above(x)).count() == 1 {
                    bottom = Some(x);
                }
                if universe.andnot(poset.below(x)).count() == 1 {
                    top = Some(x);
                }
            }
        }
        let mut core = universe.clone();
        for z in bottom.iter().chain(&top) {
            core.remove(*z);
        }
        let mut cases = Vec::new();
        for (use_b, use_t) in [(false, false), (true, false), (false, true), (true, true)] {
            if (use_b && bottom.is_none()) || (use_t && top.is_none()) {
                continue;
            }
            if let Some(patterns) = derived_patterns(&problem.patterns, use_b, use_t) {
                let mut fixed = Vec::new();
                if use_b {
                    fixed.extend(bottom);
                }
                if use_t {
                    fixed.extend(top);
                }
                cases.push(Case { fixed, patterns });
            }
        }
        let weights = Weights::new(poset, &core);
        Ok(Plan {
            problem,
            core,
            weights,
            cases,
        })
    }

    fn instance(&self, case: &Case) -> Instance<'_> {
        let models = applicable(&case.patterns, &self.core, self.weights.as_ref());
        Instance::new(
            self.problem.poset,
            self.core.clone(),
            case.patterns.clone(),
            models,
            self.weights.as_ref(),
        )
    }

    fn bound_names(&self) -> String {
        let Some(case) = self.cases.first() else {
            return "count".into();
        };
        let names: Vec<&str> = self.instance(case).models.iter().map(|m| m.name()).collect();
        if names.is_empty() {
            "count".into()
        } else {
            names.join("+")
        }
    }

    fn with_fixed(&self, s: &Bitset, case: &Case) -> Bitset {
        let mut out = s.clone();
        for &z in &case.fixed {
            out.insert(z);
        }
        out
    }

    fn maximize(&self, budget: &Budget) -> (usize, Bitset, u64) {
        let poset = self.problem.poset;
        let mut best = 0;
        let mut witness = Bitset::new(poset.size());
        let instances: Vec<Instance<'_>> = self.cases.iter().map(|c| self.instance(c)).collect();
        for (case, inst) in self.cases.iter().zip(&instances) {
            let g = inst.greedy();
            if g.count() + case.fixed.len() > best {
                best = g.count() + case.fixed.len();
                witness = self.with_fixed(&g, case);
            }
        }
        let mut nodes = 0;
        for (case, inst) in self.cases.iter().zip(&instances) {
            let off = case.fixed.len();
            if best < off {
                continue;
            }
            let out = inst.maximize(best - off, budget, self.problem.options.workers);
            nodes += out.nodes;
            if let Some((size, s)) = out.best {
                if size + off > best {
                    best = size + off;
                    witness = self.with_fixed(&s, case);
                }
            }
        }
        (best, witness, nodes)
    }

    fn enumerate(&self, target: usize, budget: &Budget) -> (Vec<Bitset>, u64) {
        let mut found = Vec::new();
        let mut nodes = 0;
        for case in &self.cases {
            let off = case.fixed.len();
            if target < off {
                continue;
            }
            let inst = self.instance(case);
            let out = inst.enumerate(target - off, budget, self.problem.options.workers);
            nodes += out.nodes;
            found.extend(out.found.iter().map(|s| self.with_fixed(s, case)));
        }
        (found, nodes)
    }
}

fn certificate(problem: &SearchProblem, plan: &Plan, optimum: usize, exhaustive: bool, sets: &[Bitset], nodes: u64) -> Certificate {
    let mut witnesses: Vec<Vec<usize>> = sets.iter().map(Bitset::to_vec).collect();
    witnesses.sort();
    witnesses.dedup();
    Certificate {
        v: 1,
        problem: problem.info(),
        optimum,
        exhaustive,
        witnesses,
        nodes,
        bound: plan.bound_names(),
    }
}

fn check_witnesses(problem: &SearchProblem, cert: &Certificate) -> Result<()> {
    for w in &cert.witnesses {
        let fam = Family::from_ids(problem.poset, w.iter().copied())?;
        if fam.len() != cert.optimum || !free_of_generic(problem.poset, &fam, &problem.patterns)? {
            return Err(Error::PostconditionViolated(format!("witness {w:?} is not a free family of size {}", cert.optimum)));
        }
    }
    Ok(())
}

fn budget_error(problem: &SearchProblem, mut cert: Certificate) -> Error {
    cert.exhaustive = false;
    Error::BudgetExceeded {
        budget: problem.options.budget,
        best: Box::new(cert),
    }
}

/// Exact `ex(P; patterns)` over the problem's universe with one witness.
pub fn exact_max(problem: &SearchProblem) -> Result<Certificate> {
    let plan = Plan::new(problem)?;
    let budget = Budget::new(problem.options.budget);
    let (best, witness, nodes) = plan.maximize(&budget);
    let cert = certificate(problem, &plan, best, !budget.aborted(), &[witness], nodes);
    check_witnesses(problem, &cert)?;
    if budget.aborted() {
        return Err(budget_error(problem, cert));
    }
    Ok(cert)
}

/// All free families of maximum size, sorted.
pub fn enumerate_optima(problem: &SearchProblem) -> Result<Certificate> {
    let first = exact_max(problem)?;
    let plan = Plan::new(problem)?;
    let budget = Budget::new(problem.options.budget.saturating_sub(first.nodes));
    let (found, nodes) = plan.enumerate(first.optimum, &budget);
    let cert = certificate(problem, &plan, first.optimum, !budget.aborted(), &found, first.nodes + nodes);
    check_witnesses(problem, &cert)?;
    if budget.aborted() {
        return Err(budget_error(problem, cert));
    }
    Ok(cert)
}

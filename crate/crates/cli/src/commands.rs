use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use qlattice::extremal::{
    conjecture_check, enumerate_optima, exact_max, verify_theorem_a, verify_theorem_b, verify_theorem_c, Filter,
    SearchOptions, SearchProblem, DEFAULT_BUDGET,
};
use qlattice::normalize::{lym_sum, lym_type_check, push_top_to_shadow, pushdown_matched, pushup_matched};
use qlattice::patterns::{contains_bits, contains_generic, parse_list};
use qlattice::{io, lattice, rational, sample, Bitset, Family, LinearLattice, PatternSpec};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::{store, Cli, Command, LymMode, PushDirection, Status, Theorem};

/// Settings shared by every command, validated once.
struct RunConfig<'a> {
    cache: std::path::PathBuf,
    out: Option<&'a Path>,
    options: SearchOptions,
    seed: u64,
}

impl<'a> RunConfig<'a> {
    fn new(cli: &'a Cli) -> Result<Self> {
        let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
        if budget == 0 {
            bail!(qlattice::Error::Domain("--budget must be positive".into()));
        }
        Ok(RunConfig {
            cache: store::cache_dir(cli.cache.as_deref()),
            out: cli.out.as_deref(),
            options: SearchOptions {
                budget,
                workers: cli.workers,
            },
            seed: cli.seed,
        })
    }

    fn lattice(&self, n: usize, q: u32) -> Result<LinearLattice> {
        store::lattice(&self.cache, n, q)
    }

    fn emit<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        match self.out {
            Some(path) => std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{s}"),
        }
        Ok(())
    }
}

fn domain(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(qlattice::Error::Domain(msg.into()))
}

fn parse_levels(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| domain(format!("levels `{s}` must look like a..b")))?;
    let lo = a.trim().parse().map_err(|_| domain(format!("bad level `{a}`")))?;
    let hi = b.trim().parse().map_err(|_| domain(format!("bad level `{b}`")))?;
    if lo > hi {
        return Err(domain(format!("empty level range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn read_family(cfg: &RunConfig, path: &Path) -> Result<(LinearLattice, Family)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (n, q) = io::parse_header(&text)?;
    let l = cfg.lattice(n, q)?;
    let f = io::parse_family(&l, &text)?;
    Ok((l, f))
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let cfg = RunConfig::new(cli)?;
    match &cli.command {
        Command::Gaussian { n, k, q } => {
            println!("{}", lattice::gaussian(*n, *k, *q)?);
            Ok(Status::Ok)
        }
        Command::Build { n, q } => {
            let (l, path) = store::build(&cfg.cache, *n, *q)?;
            let r: Vec<String> = l.rank_numbers().iter().map(usize::to_string).collect();
            println!("{}", r.join(" "));
            eprintln!("wrote {}", path.display());
            Ok(Status::Ok)
        }
        Command::Search {
            n,
            q,
            patterns,
            proper,
            full,
            levels,
            enumerate,
        } => {
            let pats = parse_list(patterns)?;
            let l = cfg.lattice(*n, *q)?;
            let mut problem = SearchProblem::new(l.poset(), pats).with_options(cfg.options);
            if *proper {
                problem = problem.with_filter(Filter::Proper);
            } else if *full {
                problem = problem.with_filter(Filter::Full);
            }
            if let Some(s) = levels {
                let (lo, hi) = parse_levels(s)?;
                problem = problem.with_levels(lo, hi);
            }
            let res = if *enumerate {
                enumerate_optima(&problem)
            } else {
                exact_max(&problem)
            };
            match res {
                Ok(cert) => {
                    cfg.emit(&cert)?;
                    Ok(Status::Ok)
                }
                Err(qlattice::Error::BudgetExceeded { budget, best }) => {
                    cfg.emit(&best)?;
                    Err(qlattice::Error::BudgetExceeded { budget, best }.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { theorem, n, q, u, v } => {
            let l = cfg.lattice(*n, *q)?;
            let rep = match theorem {
                Theorem::A => verify_theorem_a(&l, &cfg.options)?,
                Theorem::B => verify_theorem_b(&l, *u, *v, &cfg.options)?,
                Theorem::C => verify_theorem_c(&l, &cfg.options)?,
            };
            cfg.emit(&rep)?;
            Ok(verdict(rep.passed()))
        }
        Command::Conjecture { n, q, k } => {
            let l = cfg.lattice(*n, *q)?;
            let rep = conjecture_check(&l, *k, &cfg.options)?;
            cfg.emit(&rep)?;
            Ok(Status::Ok)
        }
        Command::Push {
            file,
            direction,
            i,
            u,
            v,
            family_out,
        } => {
            let (l, f) = read_family(&cfg, file)?;
            let p = l.poset();
            let rep = match direction {
                PushDirection::Shadow => push_top_to_shadow(p, &f, *i, *u)?,
                PushDirection::Down => pushdown_matched(p, &f, *i, *u, *v)?,
                PushDirection::Up => pushup_matched(p, &f, *i, *u, *v)?,
            };
            if let Some(path) = family_out {
                io::write_family(&l, &Family::from_ids(p, rep.output.iter().copied())?, path)?;
            }
            cfg.emit(&rep)?;
            Ok(Status::Ok)
        }
        Command::Lym { file, mode } => {
            let (l, f) = read_family(&cfg, file)?;
            let p = l.poset();
            match mode {
                LymMode::Antichain => {
                    if f.iter().any(|x| f.iter().any(|y| p.less(x, y))) {
                        return Err(domain("family is not an antichain"));
                    }
                    let sum = lym_sum(p, &f);
                    let holds = sum <= rational::ratio(1, 1);
                    cfg.emit(&json!({
                        "mode": "antichain",
                        "size": f.len(),
                        "sum": rational::to_string(&sum),
                        "holds": holds,
                    }))?;
                    Ok(verdict(holds))
                }
                LymMode::Ytype => {
                    let c = lym_type_check(p, &f)?;
                    cfg.emit(&json!({
                        "mode": "ytype",
                        "size": f.len(),
                        "sum": rational::to_string(&c.sum),
                        "holds": c.holds,
                        "equality_structure": c.equality_structure,
                    }))?;
                    Ok(verdict(c.holds))
                }
            }
        }
        Command::PatternsCheck {
            file,
            n,
            q,
            patterns,
            trials,
        } => {
            let pats = match patterns {
                Some(s) => parse_list(s)?,
                None => PatternSpec::named_catalog(5),
            };
            match file {
                Some(path) => patterns_on_file(&cfg, path, &pats),
                None => {
                    let (Some(n), Some(q)) = (n, q) else {
                        return Err(domain("random mode needs --n and --q"));
                    };
                    patterns_random(&cfg, *n, *q, &pats, *trials)
                }
            }
        }
    }
}

fn patterns_on_file(cfg: &RunConfig, path: &Path, pats: &[PatternSpec]) -> Result<Status> {
    let (l, f) = read_family(cfg, path)?;
    let p = l.poset();
    let mut ok = true;
    let rows: Vec<serde_json::Value> = pats
        .iter()
        .map(|pat| {
            let a = contains_bits(p, f.bits(), pat);
            let b = contains_generic(p, f.bits(), pat);
            ok &= a == b;
            json!({ "pattern": pat.to_string(), "contains": a, "generic": b })
        })
        .collect();
    cfg.emit(&json!({ "n": l.n(), "q": l.q(), "size": f.len(), "results": rows, "agree": ok }))?;
    Ok(verdict(ok))
}

fn patterns_random(cfg: &RunConfig, n: usize, q: u32, pats: &[PatternSpec], trials: usize) -> Result<Status> {
    let l = cfg.lattice(n, q)?;
    let p = l.poset();
    let all = Bitset::full(p.size());
    let mut rng = sample::rng(cfg.seed);
    let mut disagreements = Vec::new();
    let mut count = 0usize;
    for t in 0..trials {
        let dens = rng.gen_range(0.02..0.5);
        let f = sample::random_subset(p, &all, dens, &mut rng);
        for pat in pats {
            let a = contains_bits(p, f.bits(), pat);
            if a != contains_generic(p, f.bits(), pat) {
                count += 1;
                if disagreements.len() < 20 {
                    disagreements.push(json!({ "trial": t, "pattern": pat.to_string(), "members": f.ids(), "specialized": a }));
                }
            }
        }
    }
    let names: Vec<String> = pats.iter().map(PatternSpec::to_string).collect();
    cfg.emit(&json!({
        "n": n,
        "q": q,
        "seed": cfg.seed,
        "trials": trials,
        "patterns": names,
        "comparisons": trials * pats.len(),
        "disagreement_count": count,
        "disagreements": disagreements,
    }))?;
    Ok(verdict(count == 0))
}

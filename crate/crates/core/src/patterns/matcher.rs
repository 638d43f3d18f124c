//! Backtracking search for weak embeddings of a pattern into a host order.

use super::GenericPattern;
use crate::bitset::Bitset;

/// A host order given by strict up-sets and down-sets over `0..n`.
#[derive(Clone, Copy)]
pub struct Host<'a> {
    pub above: &'a [Bitset],
    pub below: &'a [Bitset],
}

struct Plan {
    order: Vec<usize>,
    /// For each position, earlier positions whose image must be above it.
    must_below: Vec<Vec<usize>>,
    /// For each position, earlier positions whose image must be below it.
    must_above: Vec<Vec<usize>>,
}

fn plan(p: &GenericPattern) -> Plan {
    let s = p.size();
    let mut adj = vec![vec![false; s]; s];
    for &(a, b) in p.relations() {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let degree: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    let mut order = Vec::with_capacity(s);
    let mut placed = vec![false; s];
    for _ in 0..s {
        let next = (0..s)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let links = order.iter().filter(|&&j: &&usize| adj[i][j]).count();
                (links, degree[i], std::cmp::Reverse(i))
            })
            .expect("an unplaced element remains");
        placed[next] = true;
        order.push(next);
    }
    let pos: Vec<usize> = {
        let mut v = vec![0; s];
        for (i, &e) in order.iter().enumerate() {
            v[e] = i;
        }
        v
    };
    let mut must_below = vec![Vec::new(); s];
    let mut must_above = vec![Vec::new(); s];
    for &(a, b) in p.relations() {
        let (pa, pb) = (pos[a], pos[b]);
        // a < b
        if pa < pb {
            must_above[pb].push(pa);
        } else {
            must_below[pa].push(pb);
        }
    }
    Plan {
        order,
        must_below,
        must_above,
    }
}

/// Finds an injective order-preserving map from the pattern into `family`,
/// returned as the image of each pattern element.
pub fn find_embedding(host: Host<'_>, family: &Bitset, p: &GenericPattern) -> Option<Vec<usize>> {
    let s = p.size();
    if s == 0 {
        return Some(Vec::new());
    }
    if family.count() < s {
        return None;
    }
    let pl = plan(p);
    let (ups, downs) = p.up_down_counts();
    // an image needs at least as many family members above/below as the element has in the pattern
    let base: Vec<Bitset> = pl
        .order
        .iter()
        .map(|&e| {
            let mut b = family.clone();
            for x in family.iter() {
                if host.above[x].and_count(family) < ups[e] || host.below[x].and_count(family) < downs[e] {
                    b.remove(x);
                }
            }
            b
        })
        .collect();
    if base.iter().any(Bitset::is_empty) {
        return None;
    }
    let mut img = vec![usize::MAX; s];
    let mut used = Bitset::new(family.capacity());
    if rec(host, &pl, &base, 0, &mut img, &mut used) {
        let mut out = vec![0; s];
        for (i, &e) in pl.order.iter().enumerate() {
            out[e] = img[i];
        }
        Some(out)
    } else {
        None
    }
}

fn rec(host: Host<'_>, pl: &Plan, base: &[Bitset], i: usize, img: &mut [usize], used: &mut Bitset) -> bool {
    if i == pl.order.len() {
        return true;
    }
    let mut cand = base[i].andnot(used);
    for &j in &pl.must_below[i] {
        cand.and_with(&host.below[img[j]]);
    }
    for &j in &pl.must_above[i] {
        cand.and_with(&host.above[img[j]]);
    }
    for x in cand.iter() {
        img[i] = x;
        used.insert(x);
        if rec(host, pl, base, i + 1, img, used) {
            return true;
        }
        used.remove(x);
    }
    img[i] = usize::MAX;
    false
}

pub fn generic_contains(host: Host<'_>, family: &Bitset, p: &GenericPattern) -> bool {
    find_embedding(host, family, p).is_some()
}

/// Closure sets of a pattern viewed as a host order.
pub fn pattern_host(p: &GenericPattern) -> (Vec<Bitset>, Vec<Bitset>) {
    let s = p.size();
    let mut above = vec![Bitset::new(s); s];
    let mut below = vec![Bitset::new(s); s];
    for &(a, b) in p.relations() {
        above[a].insert(b);
        below[b].insert(a);
    }
    (above, below)
}

/// Whether `q` weakly contains `p`.
pub fn embeds(p: &GenericPattern, q: &GenericPattern) -> bool {
    let (above, below) = pattern_host(q);
    let host = Host {
        above: &above,
        below: &below,
    };
    generic_contains(host, &Bitset::full(q.size()), p)
}

/// Whether the two patterns are isomorphic.
pub fn isomorphic(p: &GenericPattern, q: &GenericPattern) -> bool {
    p.size() == q.size() && p.relations().len() == q.relations().len() && embeds(p, q)
}

use std::collections::HashMap;

/// Maximum-cardinality bipartite matching by augmenting paths.
///
/// Left vertices are tried in ascending id order and their neighbours in
/// ascending id order, so the result is a function of the input alone.
/// Returns `(left, right)` pairs sorted by left id.
pub fn max_bipartite_matching(left: &[usize], right: &[usize], edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut l: Vec<usize> = left.to_vec();
    l.sort_unstable();
    l.dedup();
    let mut r: Vec<usize> = right.to_vec();
    r.sort_unstable();
    r.dedup();
    let li: HashMap<usize, usize> = l.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let ri: HashMap<usize, usize> = r.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut adj = vec![Vec::new(); l.len()];
    for &(a, b) in edges {
        if let (Some(&i), Some(&j)) = (li.get(&a), ri.get(&b)) {
            adj[i].push(j);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let mut match_r: Vec<Option<usize>> = vec![None; r.len()];
    for i in 0..l.len() {
        let mut seen = vec![false; r.len()];
        augment(i, &adj, &mut seen, &mut match_r);
    }
    let mut out: Vec<(usize, usize)> = match_r
        .iter()
        .enumerate()
        .filter_map(|(j, m)| m.map(|i| (l[i], r[j])))
        .collect();
    out.sort_unstable();
    out
}

fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], match_r: &mut [Option<usize>]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if match_r[j].is_none_or(|k| augment(k, adj, seen, match_r)) {
            match_r[j] = Some(i);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bipartite() {
        let left: Vec<usize> = (0..4).collect();
        let right: Vec<usize> = (10..14).collect();
        let edges: Vec<(usize, usize)> = left.iter().flat_map(|&a| right.iter().map(move |&b| (a, b))).collect();
        assert_eq!(max_bipartite_matching(&left, &right, &edges).len(), 4);
    }

    #[test]
    fn hall_violation() {
        let m = max_bipartite_matching(&[0, 1], &[5], &[(0, 5), (1, 5)]);
        assert_eq!(m, vec![(0, 5)]);
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy would match 0-10 and strand 1
        let m = max_bipartite_matching(&[0, 1], &[10, 11], &[(0, 10), (0, 11), (1, 10)]);
        assert_eq!(m, vec![(0, 11), (1, 10)]);
    }
}

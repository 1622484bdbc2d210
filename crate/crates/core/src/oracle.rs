//! Brute-force ground truth for edge deletion, sharing no code with the
//! decomposition-based solver beyond the copy search.

use crate::dp::SolveOutcome;
use crate::graph::{find_family_copy, is_family_free, EdgeSet, Graph, PatternFamily};

/// Bounded search tree: find any copy, branch on deleting each of its edges.
/// Budgets are tried in increasing order, so the first success is minimum.
pub fn oracle_solve(g: &Graph, fam: &PatternFamily, k: usize) -> SolveOutcome {
    fn branch(g: &Graph, fam: &PatternFamily, deleted: &mut EdgeSet, budget: usize) -> bool {
        let Some((i, copy)) = find_family_copy(g, fam, Some(deleted)) else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        let edges = copy.image_edges(&fam.patterns()[i]);
        for e in edges {
            deleted.insert(e);
            if branch(g, fam, deleted, budget - 1) {
                return true;
            }
            deleted.remove(&e);
        }
        false
    }

    // A copy with no edges survives every deletion.
    if find_family_copy(g, fam, Some(&g.edge_set())).is_some() {
        return SolveOutcome::no();
    }
    for budget in 0..=k.min(g.edge_count()) {
        let mut deleted = EdgeSet::new();
        if branch(g, fam, &mut deleted, budget) {
            return SolveOutcome::yes(deleted);
        }
    }
    SolveOutcome::no()
}

/// Second oracle: every edge subset of size `0..=k`, smallest first, in
/// lexicographic order of edge indices.
pub fn subset_enumeration_solve(g: &Graph, fam: &PatternFamily, k: usize) -> SolveOutcome {
    let edges = g.edges();
    let m = edges.len();
    for size in 0..=k.min(m) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let deleted: EdgeSet = idx.iter().map(|&i| edges[i]).collect();
            if is_family_free(g, fam, &deleted).expect("subset of host edges") {
                return SolveOutcome::yes(deleted);
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    SolveOutcome::no()
}

/// Treewidth as the minimum elimination width over all vertex orders.
/// Only for tiny graphs: `n!` orders are tried.
pub fn treewidth_by_permutations(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 12, "permutation search is limited to 12 vertices");
    if n == 0 {
        return 0;
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
        .collect();
    let width = |order: &[usize]| {
        let mut adj = masks.clone();
        let mut gone = 0u32;
        let mut width = 0;
        for &v in order {
            let later = adj[v] & !gone;
            width = width.max(later.count_ones() as usize);
            let mut rest = later;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                adj[a] |= later & !(1 << a);
            }
            gone |= 1 << v;
        }
        width
    };
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = width(&order);
    while next_permutation(&mut order) {
        best = best.min(width(&order));
    }
    best
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("a[i] qualifies");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Advances `idx` to the next increasing `idx.len()`-subset of `0..m`.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let size = idx.len();
    let Some(i) = (0..size).rev().find(|&i| idx[i] != i + m - size) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..size {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fam(p: Graph) -> PatternFamily {
        PatternFamily::single(p).unwrap()
    }

    #[test]
    fn examples() {
        let k3 = Graph::complete(3);
        assert_eq!(oracle_solve(&k3, &fam(k3.clone()), 1).cost(), Some(1));
        assert!(!oracle_solve(&Graph::complete(4), &fam(k3.clone()), 1).is_yes());
        assert!(!subset_enumeration_solve(&Graph::complete(4), &fam(k3.clone()), 1).is_yes());
        assert!(!oracle_solve(&Graph::complete(3), &fam(Graph::empty(2)), 5).is_yes());
        assert_eq!(oracle_solve(&Graph::empty(1), &fam(Graph::empty(2)), 0).cost(), Some(0));
    }

    #[test]
    fn permutation_treewidth() {
        assert_eq!(treewidth_by_permutations(&Graph::complete(5)), 4);
        assert_eq!(treewidth_by_permutations(&Graph::cycle(6)), 2);
        assert_eq!(treewidth_by_permutations(&Graph::path(5)), 1);
        assert_eq!(treewidth_by_permutations(&Graph::empty(3)), 0);
        let mut count = 0;
        let mut a = [0, 1, 2, 3];
        while next_permutation(&mut a) {
            count += 1;
        }
        assert_eq!(count, 23);
    }

    #[test]
    fn subset_enumeration_visits_every_combination() {
        let g = Graph::complete(5);
        let f = fam(Graph::complete(3));
        for k in 0..=5 {
            assert_eq!(
                oracle_solve(&g, &f, k).cost(),
                subset_enumeration_solve(&g, &f, k).cost()
            );
        }
    }

    #[test]
    fn oracles_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let mut es = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.45) {
                        es.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &es).unwrap();
            if g.edge_count() > 16 {
                continue;
            }
            let pats = [
                Graph::complete(3),
                Graph::path(3),
                Graph::path(4),
                Graph::new(4, &[(0, 1), (2, 3)]).unwrap(),
                Graph::new(3, &[(0, 1)]).unwrap(),
            ];
            let f = fam(pats[rng.gen_range(0..pats.len())].clone());
            let k = rng.gen_range(0..=3);
            let a = oracle_solve(&g, &f, k);
            let b = subset_enumeration_solve(&g, &f, k);
            assert_eq!(a.cost(), b.cost(), "{g:?} {f:?} k={k}");
        }
    }
}

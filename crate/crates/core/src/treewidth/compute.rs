use std::collections::BTreeSet;

use super::td::TreeDecomposition;
use crate::graph::{connected_components, Graph};

/// Components with at most this many vertices get an optimal decomposition.
pub const DEFAULT_EXACT_THRESHOLD: usize = 12;

/// Hard cap for the subset search; beyond this the heuristic is always used.
const EXACT_LIMIT: usize = 20;

/// Width reached by eliminating vertices in `order` (max back-degree in the
/// filled graph).
pub fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    eliminate(g, order).1
}

/// Runs the elimination game; returns the bag of each eliminated vertex
/// (the vertex plus its later neighbours) and the resulting width.
fn eliminate(g: &Graph, order: &[usize]) -> (Vec<Vec<usize>>, usize) {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut gone = vec![false; n];
    let mut bags = Vec::with_capacity(n);
    let mut width = 0;
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| !gone[w]).collect();
        width = width.max(later.len());
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        gone[v] = true;
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    (bags, width)
}

/// Greedy min-fill ordering; ties go to the lowest vertex index.
pub fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let fill = |v: usize| {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a].contains(&b) {
                        missing += 1;
                    }
                }
            }
            missing
        };
        let v = *alive.iter().min_by_key(|&&v| (fill(v), v)).unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Optimal elimination order by dynamic programming over the set of
/// already-eliminated vertices. Returns `None` above the size cap.
///
/// Eliminating `v` after the set `S` gives `v` degree equal to the number of
/// vertices outside `S + v` reachable from `v` through `S`.
pub fn exact_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n > EXACT_LIMIT {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    // Vertices outside `set + v` reachable from `v` through `set`.
    let q_size = |set: u32, v: usize| -> usize {
        let mut inside = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut outside = 0u32;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = nbr[u] & !inside;
            outside |= nb & !set;
            let grow = nb & set;
            inside |= grow;
            frontier |= grow;
        }
        (outside & !(1u32 << v)).count_ones() as usize
    };

    let size = 1usize << n;
    let mut best = vec![usize::MAX; size];
    let mut choice = vec![u8::MAX; size];
    best[0] = 0;
    for set in 1..size as u32 {
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = set & !(1 << v);
            let cand = best[rest as usize].max(q_size(rest, v));
            if cand < best[set as usize] {
                best[set as usize] = cand;
                choice[set as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = choice[set as usize] as usize;
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    Some(order)
}

/// Tree decomposition of `g` induced by an elimination order. Each
/// elimination bag hangs below the bag of its earliest-eliminated later
/// neighbour; separate trees are chained through empty bags.
pub fn td_from_elimination(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::chain(Vec::new());
    }
    let (bags, _) = eliminate(g, order);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let v = order[i];
        match bag.iter().filter(|&&w| w != v).map(|&w| pos[w]).min() {
            Some(j) => edges.push((i, j)),
            None => roots.push(i),
        }
    }
    let mut bags = bags;
    for pair in roots.windows(2) {
        let link = bags.len();
        bags.push(Vec::new());
        edges.push((pair[0], link));
        edges.push((link, pair[1]));
    }
    TreeDecomposition::new(bags, edges)
}

/// A valid decomposition of `g`. Components with at most `exact_threshold`
/// vertices are decomposed optimally, larger ones by min-fill. Components
/// are chained through fresh empty bags.
pub fn compute_td(g: &Graph, exact_threshold: usize) -> TreeDecomposition {
    let parts = connected_components(g)
        .into_iter()
        .map(|comp| {
            let sub = g.induced_subgraph(&comp);
            let order = if comp.len() <= exact_threshold {
                exact_elimination_order(&sub).unwrap_or_else(|| min_fill_order(&sub))
            } else {
                min_fill_order(&sub)
            };
            td_from_elimination(&sub, &order).relabel(&comp)
        })
        .collect();
    TreeDecomposition::chain(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treewidth::validate_td;

    #[test]
    fn known_widths() {
        let k4 = compute_td(&Graph::complete(4), 12);
        assert_eq!(k4.width(), 3);
        assert!(validate_td(&Graph::complete(4), &k4).is_empty());

        let c5 = Graph::cycle(5);
        let td = compute_td(&c5, 12);
        assert_eq!(td.width(), 2);
        assert!(validate_td(&c5, &td).is_empty());

        let tree = Graph::new(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        assert_eq!(compute_td(&tree, 12).width(), 1);
        assert_eq!(compute_td(&tree, 0).width(), 1);
    }

    #[test]
    fn degenerate_inputs() {
        let empty = compute_td(&Graph::empty(0), 12);
        assert_eq!(empty.bags, vec![Vec::<usize>::new()]);
        let isolated = compute_td(&Graph::empty(3), 12);
        assert!(validate_td(&Graph::empty(3), &isolated).is_empty());
        assert!(isolated.bags.contains(&vec![1]));
    }

    #[test]
    fn grid_heuristic_is_valid() {
        // 4x4 grid, treewidth 4
        let mut es = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                let v = r * 4 + c;
                if c + 1 < 4 {
                    es.push((v, v + 1));
                }
                if r + 1 < 4 {
                    es.push((v, v + 4));
                }
            }
        }
        let g = Graph::new(16, &es).unwrap();
        let exact = compute_td(&g, 16);
        assert_eq!(exact.width(), 4);
        let heur = compute_td(&g, 0);
        assert!(validate_td(&g, &heur).is_empty());
        assert!(heur.width() >= 4);
    }
}

use std::collections::BTreeSet;

use subfree::graph::{connected_components, find_copy, Graph};
use subfree::hardness::{
    build_clause_gadget, build_splitter, build_variable_gadget, clause_port_set, enumerate_tilings,
    is_maximal_tiling, reduce_formula, solve_1in3, triangle_factor, Cnf13Instance,
};

fn covered(tiling: &[[usize; 3]]) -> BTreeSet<usize> {
    tiling.iter().flatten().copied().collect()
}

#[test]
fn splitter_tilings_split_ports() {
    let sp = build_splitter();
    let names = ["g", "h", "h1", "h2", "h3"];
    let ports: Vec<usize> = names.iter().map(|n| sp.port(n)).collect();
    let required: Vec<bool> = (0..sp.graph.vertex_count()).map(|v| !ports.contains(&v)).collect();
    let mut traces = BTreeSet::new();
    for t in enumerate_tilings(&sp.graph, &required) {
        let cov = covered(&t);
        if cov.contains(&sp.port("g")) == cov.contains(&sp.port("h")) {
            continue;
        }
        let trace: Vec<&str> = names.iter().copied().filter(|n| cov.contains(&sp.port(n))).collect();
        traces.insert(trace);
    }
    let want: BTreeSet<Vec<&str>> = [vec!["g"], vec!["h", "h1", "h2", "h3"]].into_iter().collect();
    assert_eq!(traces, want);
}

fn check_variable_gadget(polarity: &[bool]) {
    let x = build_variable_gadget(polarity).unwrap();
    let h_ports: Vec<(usize, bool)> = (1..=polarity.len())
        .flat_map(|j| (1..=3).map(move |k| (j, k)))
        .map(|(j, k)| (x.port(&format!("h{k}^{j}")), polarity[j - 1]))
        .collect();
    let required: Vec<bool> = (0..x.graph.vertex_count())
        .map(|v| !h_ports.iter().any(|&(p, _)| p == v))
        .collect();
    let maximal: Vec<_> = enumerate_tilings(&x.graph, &required)
        .into_iter()
        .filter(|t| is_maximal_tiling(&x.graph, t))
        .collect();
    assert_eq!(maximal.len(), 2, "polarity {polarity:?}");
    let mut sides = BTreeSet::new();
    for t in &maximal {
        let cov = covered(t);
        let hit: BTreeSet<bool> = h_ports.iter().filter(|(p, _)| cov.contains(p)).map(|&(_, s)| s).collect();
        let all_of_side = |side: bool| h_ports.iter().filter(|&&(_, s)| s == side).all(|(p, _)| cov.contains(p));
        assert!(hit.len() <= 1, "tiling mixes polarities");
        if let Some(&side) = hit.iter().next() {
            assert!(all_of_side(side));
        }
        sides.insert(hit.into_iter().next());
    }
    assert_eq!(sides.len(), 2);
}

#[test]
fn variable_gadget_has_two_maximal_tilings() {
    for polarity in [vec![true], vec![false], vec![true, false], vec![true, true], vec![false, true, true]] {
        check_variable_gadget(&polarity);
    }
}

#[test]
fn clause_gadget_needs_exactly_two_port_sets_removed() {
    let d = build_clause_gadget();
    for mask in 0u32..8 {
        let removed: BTreeSet<usize> = (1..=3)
            .filter(|j| mask & (1 << (j - 1)) != 0)
            .flat_map(|j| clause_port_set(&d, j))
            .collect();
        let keep: Vec<usize> = (0..15).filter(|v| !removed.contains(v)).collect();
        let has = triangle_factor(&d.graph.induced_subgraph(&keep)).is_some();
        assert_eq!(has, mask.count_ones() == 2, "I = {mask:03b}");
    }
    let a = |k: usize, j: usize| d.port(&format!("a{k}^{j}"));
    let tiling = [[a(1, 1), a(5, 1), a(6, 1)], [a(2, 1), a(3, 1), a(4, 1)], [a(2, 2), a(1, 2), a(2, 3)]];
    for t in tiling {
        for (i, &u) in t.iter().enumerate() {
            for &v in &t[i + 1..] {
                assert!(d.graph.has_edge(u, v));
            }
        }
    }
    let mut cov: Vec<usize> = tiling.iter().flatten().copied().collect();
    cov.sort_unstable();
    let mut want: Vec<usize> = (0..15).filter(|v| ![2, 3].iter().any(|&j| clause_port_set(&d, j).contains(v))).collect();
    want.sort_unstable();
    assert_eq!(cov, want);
}

#[test]
fn p4_free_graphs_have_few_edges() {
    let p4 = Graph::path(4);
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let es: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let g = Graph::new(n, &es).unwrap();
            if find_copy(&g, &p4, None).is_some() {
                continue;
            }
            assert!(g.edge_count() <= n);
            if g.edge_count() == n {
                assert!(connected_components(&g).iter().all(|c| c.len() == 3));
            }
        }
    }
}

#[test]
fn small_formulas_reduce_faithfully() {
    let formulas: Vec<(usize, Vec<Vec<i32>>)> = vec![
        (3, vec![vec![1, 2, 3]]),
        (3, vec![vec![-1, 2, 3]]),
        (3, vec![vec![-1, -2, -3]]),
        (3, vec![vec![1, 2, 3], vec![-1, -2, -3]]),
        (3, vec![vec![1, 2, 3], vec![1, 2, -3]]),
        (4, vec![vec![1, 2, 3], vec![1, 2, 4]]),
        (4, vec![vec![1, 2, 3], vec![-1, 2, 4], vec![1, -3, -4]]),
        (3, vec![vec![1, 2, 3], vec![1, -2, 3], vec![-1, 2, 3]]),
    ];
    for (n, clauses) in formulas {
        let f = Cnf13Instance::new(n, clauses.clone()).unwrap();
        let g = reduce_formula(&f).unwrap();
        assert_eq!(
            triangle_factor(&g.graph).is_some(),
            solve_1in3(&f).unwrap().is_some(),
            "{clauses:?}"
        );
    }
}

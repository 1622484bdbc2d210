use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{connected_components, Edge, Graph};

/// A tree decomposition: a tree on `0..bags.len()` plus one sorted bag per node.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Normalises bags (sorted, deduplicated).
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    /// A single bag holding every vertex of `g`.
    pub fn trivial(g: &Graph) -> Self {
        TreeDecomposition {
            bags: vec![(0..g.vertex_count()).collect()],
            tree_edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 when every bag is empty).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Renames every bag vertex `v` to `map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        TreeDecomposition::new(
            self.bags
                .iter()
                .map(|b| b.iter().map(|&v| map[v]).collect())
                .collect(),
            self.tree_edges.clone(),
        )
    }

    /// Joins decompositions of vertex-disjoint pieces into one tree, linking
    /// consecutive parts through fresh empty bags. An empty list yields a
    /// single empty bag.
    pub fn chain(parts: Vec<TreeDecomposition>) -> Self {
        let mut out = TreeDecomposition::default();
        let mut prev_anchor: Option<usize> = None;
        for part in parts {
            let base = out.bags.len();
            if part.bags.is_empty() {
                continue;
            }
            out.bags.extend(part.bags);
            out.tree_edges
                .extend(part.tree_edges.iter().map(|&(a, b)| (a + base, b + base)));
            if let Some(anchor) = prev_anchor {
                let link = out.bags.len();
                out.bags.push(Vec::new());
                out.tree_edges.push((anchor, link));
                out.tree_edges.push((link, base));
            }
            prev_anchor = Some(base);
        }
        if out.bags.is_empty() {
            out.bags.push(Vec::new());
        }
        out
    }
}

/// A reason a decomposition fails to be valid for a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The tree is not connected, has a cycle, or references a missing node.
    NotATree(String),
    /// A bag mentions a vertex outside the graph.
    UnknownVertex { node: usize, vertex: usize },
    /// (T1) the vertex lies in no bag.
    VertexUncovered(usize),
    /// (T2) no bag contains both endpoints.
    EdgeUncovered(Edge),
    /// (T3) the nodes containing the vertex do not form a subtree.
    DisconnectedOccurrence(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree(why) => write!(f, "tree: {why}"),
            Violation::UnknownVertex { node, vertex } => {
                write!(f, "bag {node} contains unknown vertex {vertex}")
            }
            Violation::VertexUncovered(v) => write!(f, "T1: vertex {v} is in no bag"),
            Violation::EdgeUncovered((u, v)) => write!(f, "T2: edge ({u}, {v}) is in no bag"),
            Violation::DisconnectedOccurrence(v) => {
                write!(f, "T3: bags containing vertex {v} are not connected")
            }
        }
    }
}

/// Checks the tree shape and conditions T1-T3. An empty list means valid.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Vec<Violation> {
    let mut out = Vec::new();
    let nodes = td.node_count();
    if nodes == 0 {
        if g.vertex_count() > 0 {
            out.push(Violation::NotATree("no nodes".into()));
        }
        return out;
    }
    if let Some(&(a, b)) = td.tree_edges.iter().find(|&&(a, b)| a >= nodes || b >= nodes) {
        out.push(Violation::NotATree(format!("edge ({a}, {b}) references a missing node")));
        return out;
    }
    let tree = Graph::new(nodes, &td.tree_edges);
    match tree {
        Err(e) => {
            out.push(Violation::NotATree(e.to_string()));
            return out;
        }
        Ok(tree) => {
            if tree.edge_count() != td.tree_edges.len() || tree.edge_count() + 1 != nodes {
                out.push(Violation::NotATree(format!(
                    "{} nodes but {} distinct edges",
                    nodes,
                    tree.edge_count()
                )));
            }
            if connected_components(&tree).len() != 1 {
                out.push(Violation::NotATree("disconnected".into()));
            }
            if !out.is_empty() {
                return out;
            }
        }
    }

    let n = g.vertex_count();
    let mut holders = vec![Vec::new(); n];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                out.push(Violation::UnknownVertex { node: t, vertex: v });
            } else {
                holders[v].push(t);
            }
        }
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            out.push(Violation::VertexUncovered(v));
        }
    }
    for &(u, v) in g.edges() {
        let together = holders[u]
            .iter()
            .any(|&t| td.bags[t].binary_search(&v).is_ok());
        if !together {
            out.push(Violation::EdgeUncovered((u, v)));
        }
    }
    let adj = td.tree_adjacency();
    let mut mark = vec![usize::MAX; nodes];
    for (v, h) in holders.iter().enumerate() {
        if h.len() <= 1 {
            continue;
        }
        for &t in h {
            mark[t] = v;
        }
        let mut stack = vec![h[0]];
        let mut reached = 1;
        let mut seen = vec![h[0]];
        mark[h[0]] = usize::MAX - 1;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if mark[s] == v {
                    mark[s] = usize::MAX - 1;
                    reached += 1;
                    stack.push(s);
                    seen.push(s);
                }
            }
        }
        for &t in h {
            mark[t] = usize::MAX;
        }
        if reached != h.len() {
            out.push(Violation::DisconnectedOccurrence(v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_k3() {
        let td = TreeDecomposition::trivial(&Graph::complete(3));
        assert!(validate_td(&Graph::complete(3), &td).is_empty());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn path_examples() {
        let p3 = Graph::path(3);
        let good = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(validate_td(&p3, &good).is_empty());
        assert_eq!(good.width(), 1);
        let bad = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert_eq!(validate_td(&p3, &bad), vec![Violation::EdgeUncovered((1, 2))]);
    }

    #[test]
    fn detects_t1_t3_and_shape() {
        let p3 = Graph::path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert!(validate_td(&p3, &td).contains(&Violation::VertexUncovered(2)));

        let split = TreeDecomposition::new(
            vec![vec![0, 1], vec![2], vec![1, 2]],
            vec![(0, 1), (1, 2)],
        );
        assert_eq!(
            validate_td(&p3, &split),
            vec![Violation::DisconnectedOccurrence(1)]
        );

        let cyc = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![1]],
            vec![(0, 1), (1, 2), (0, 2)],
        );
        assert!(matches!(validate_td(&p3, &cyc)[0], Violation::NotATree(_)));
    }

    #[test]
    fn chain_links_parts() {
        let a = TreeDecomposition::new(vec![vec![0]], vec![]);
        let b = TreeDecomposition::new(vec![vec![1], vec![1, 2]], vec![(0, 1)]);
        let td = TreeDecomposition::chain(vec![a, b]);
        let g = Graph::new(3, &[(1, 2)]).unwrap();
        assert!(validate_td(&g, &td).is_empty());
        assert_eq!(TreeDecomposition::chain(vec![]).bags, vec![Vec::<usize>::new()]);
    }
}

use std::collections::BTreeSet;

use super::td::{validate_td, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(usize),
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Nodes are stored children-first, so a forward
/// pass visits every child before its parent; the root is the last node and
/// has an empty bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Forgets the node kinds.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition::new(bags, edges)
    }

    pub fn count(&self, pred: impl Fn(&NiceKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }
}

struct Builder<'a> {
    g: &'a Graph,
    nodes: Vec<NiceNode>,
    introduced: BTreeSet<Edge>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, mut cur: usize, v: usize) -> usize {
        let mut bag = self.nodes[cur].bag.clone();
        let at = bag.binary_search(&v).unwrap_err();
        bag.insert(at, v);
        cur = self.push(NiceKind::IntroduceVertex(v), bag, vec![cur]);
        cur
    }

    /// Introduces every pending edge between `v` and the rest of the bag,
    /// then forgets `v`.
    fn forget(&mut self, mut cur: usize, v: usize) -> usize {
        let bag = self.nodes[cur].bag.clone();
        for &w in &bag {
            let e = edge(v, w);
            if w != v && self.g.has_edge(v, w) && self.introduced.insert(e) {
                cur = self.push(NiceKind::IntroduceEdge(e.0, e.1), bag.clone(), vec![cur]);
            }
        }
        let smaller: Vec<usize> = bag.into_iter().filter(|&w| w != v).collect();
        self.push(NiceKind::Forget(v), smaller, vec![cur])
    }

    /// Builds the nice subtree for `t` and returns its top node, whose bag
    /// equals `bags[t]`.
    fn build(&mut self, td: &TreeDecomposition, adj: &[Vec<usize>], t: usize, parent: Option<usize>) -> usize {
        let target = &td.bags[t];
        let mut branches = Vec::new();
        for &c in &adj[t] {
            if Some(c) == parent {
                continue;
            }
            let mut cur = self.build(td, adj, c, Some(t));
            let child_bag = td.bags[c].clone();
            for &v in child_bag.iter().filter(|v| target.binary_search(v).is_err()) {
                cur = self.forget(cur, v);
            }
            for &v in target.iter().filter(|v| child_bag.binary_search(v).is_err()) {
                cur = self.introduce(cur, v);
            }
            branches.push(cur);
        }
        if branches.is_empty() {
            let mut cur = self.push(NiceKind::Leaf, Vec::new(), Vec::new());
            for &v in target {
                cur = self.introduce(cur, v);
            }
            return cur;
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = self.push(NiceKind::Join, target.clone(), vec![acc, b]);
        }
        acc
    }
}

/// Converts a valid decomposition of `g` into nice form rooted at node 0.
/// Every edge of `g` is introduced exactly once, just before the first of
/// its endpoints is forgotten.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    let violations = validate_td(g, td);
    if let Some(v) = violations.first() {
        return Err(Error::InvalidInput(format!("decomposition is invalid: {v}")));
    }
    let adj = td.tree_adjacency();
    let mut b = Builder {
        g,
        nodes: Vec::new(),
        introduced: BTreeSet::new(),
    };
    let mut cur = b.build(td, &adj, 0, None);
    for v in td.bags[0].clone() {
        cur = b.forget(cur, v);
    }
    debug_assert_eq!(b.introduced.len(), g.edge_count());
    Ok(NiceTreeDecomposition { nodes: b.nodes })
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph with named vertices. Several names may point at one vertex when
/// gluing identified them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGadget {
    pub graph: Graph,
    pub ports: BTreeMap<String, usize>,
}

impl LabeledGadget {
    pub fn port(&self, name: &str) -> usize {
        *self
            .ports
            .get(name)
            .unwrap_or_else(|| panic!("gadget has no port {name:?}"))
    }
}

/// Accumulates glued copies of gadgets into one graph.
#[derive(Default)]
pub(crate) struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    pub fn fresh(&mut self, count: usize) -> Vec<usize> {
        let out = (self.n..self.n + count).collect();
        self.n += count;
        out
    }

    pub fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    /// Adds a copy of `g`; vertex `v` of `g` becomes `glue[v]` if present,
    /// otherwise a fresh vertex. Returns the vertex map.
    pub fn add(&mut self, g: &Graph, glue: &BTreeMap<usize, usize>) -> Vec<usize> {
        let map: Vec<usize> = (0..g.vertex_count())
            .map(|v| glue.get(&v).copied().unwrap_or_else(|| self.fresh(1)[0]))
            .collect();
        self.edges.extend(g.edges().iter().map(|&(u, v)| (map[u], map[v])));
        map
    }

    pub fn finish(self) -> Graph {
        Graph::new(self.n, &self.edges).expect("builder edges are in range")
    }
}

fn named(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// `L(g, g1, g2)`: vertices `g, g1, g2, h1_1, h1_2, h2_1..h2_4` in that order.
pub fn build_l() -> LabeledGadget {
    let (g, g1, g2, p1, p2, q1, q2, q3, q4) = (0, 1, 2, 3, 4, 5, 6, 7, 8);
    let edges = [
        (g, p1),
        (g, p2),
        (p1, p2),
        (p1, q1),
        (p1, q2),
        (p2, q3),
        (p2, q4),
        (q1, q2),
        (q2, q3),
        (q3, q4),
        (q1, g1),
        (q2, g1),
        (q3, g2),
        (q4, g2),
    ];
    LabeledGadget {
        graph: Graph::new(9, &edges).expect("fixed gadget"),
        ports: named(&[("g", g), ("g1", g1), ("g2", g2)]),
    }
}

/// Splitter `H(g, h, h1, h2, h3)`: `L(g, g1, g2)`, `L(g1, h1, h2)` and
/// `L(g2, h3, g22)` glued at `g1` and `g2`, plus a triangle-pair `w1, w2`
/// joining `g22` to `h`.
pub fn build_splitter() -> LabeledGadget {
    let l = build_l();
    let (lg, lg1, lg2) = (l.port("g"), l.port("g1"), l.port("g2"));
    let mut b = Builder::default();
    let first = b.add(&l.graph, &BTreeMap::new());
    let second = b.add(&l.graph, &BTreeMap::from([(lg, first[lg1])]));
    let third = b.add(&l.graph, &BTreeMap::from([(lg, first[lg2])]));
    let g22 = third[lg2];
    let [w1, w2, h] = b.fresh(3)[..] else { unreachable!() };
    for (u, v) in [(g22, w1), (g22, w2), (w1, w2), (w1, h), (w2, h)] {
        b.edge(u, v);
    }
    LabeledGadget {
        graph: b.finish(),
        ports: named(&[
            ("g", first[lg]),
            ("h", h),
            ("h1", second[lg1]),
            ("h2", second[lg2]),
            ("h3", third[lg1]),
        ]),
    }
}

/// `W`: 6-cycle `a1..a6` with chords `a1a5`, `a2a4`, `a2a5` (vertex `k-1` is `a_k`).
pub fn build_w() -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    edges.extend([(0, 4), (1, 3), (1, 4)]);
    Graph::new(6, &edges).expect("fixed gadget")
}

/// Clause gadget `D`: three copies `W^1..W^3` with `a_1^j = a_3^{j+1}` and
/// edges `a_2^j a_2^{j+1}` (indices cyclic). Ports are named `a{k}^{j}`.
pub fn build_clause_gadget() -> LabeledGadget {
    let index = |k: usize, j: usize| -> usize {
        // a_1^j is stored as a_3^{j+1}.
        let (k, j) = if k == 1 { (3, j % 3 + 1) } else { (k, j) };
        (j - 1) * 5 + (k - 2)
    };
    let w = build_w();
    let mut edges = Vec::new();
    for j in 1..=3 {
        edges.extend(w.edges().iter().map(|&(a, b)| (index(a + 1, j), index(b + 1, j))));
        edges.push((index(2, j), index(2, j % 3 + 1)));
    }
    let mut ports = BTreeMap::new();
    for j in 1..=3 {
        for k in 1..=6 {
            ports.insert(format!("a{k}^{j}"), index(k, j));
        }
    }
    LabeledGadget {
        graph: Graph::new(15, &edges).expect("fixed gadget"),
        ports,
    }
}

/// Vertices `a_4^j, a_5^j, a_6^j` of the clause gadget.
pub fn clause_port_set(d: &LabeledGadget, j: usize) -> [usize; 3] {
    [4, 5, 6].map(|k| d.port(&format!("a{k}^{j}")))
}

/// Variable gadget for occurrences with the given polarities (`true` for a
/// positive literal). Ports: `v{t}` on the central cycle, and `g^{j}`,
/// `h^{j}`, `h{k}^{j}` of the splitter of occurrence `j` (1-based).
pub fn build_variable_gadget(occurrences: &[bool]) -> Result<LabeledGadget> {
    let l = occurrences.len();
    if l == 0 {
        return Err(Error::InvalidInput("a variable gadget needs at least one occurrence".into()));
    }
    let mut b = Builder::default();
    let cycle = b.fresh(4 * l);
    let v = |t: usize| cycle[(t - 1) % (4 * l)];
    for t in 1..=4 * l {
        b.edge(v(t), v(t + 1));
        if t % 2 == 1 {
            b.edge(v(t), v(t + 2));
        }
    }
    let mut ports = BTreeMap::new();
    for t in 1..=4 * l {
        ports.insert(format!("v{t}"), v(t));
    }
    let sp = build_splitter();
    for (idx, &positive) in occurrences.iter().enumerate() {
        let j = idx + 1;
        let (g_at, h_at) = if positive { (v(4 * j), v(4 * j - 2)) } else { (v(4 * j - 2), v(4 * j)) };
        let glue = BTreeMap::from([(sp.port("g"), g_at), (sp.port("h"), h_at)]);
        let map = b.add(&sp.graph, &glue);
        for name in ["g", "h", "h1", "h2", "h3"] {
            ports.insert(format!("{name}^{j}"), map[sp.port(name)]);
        }
    }
    Ok(LabeledGadget {
        graph: b.finish(),
        ports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_gadget() {
        let l = build_l();
        assert_eq!(l.graph.vertex_count(), 9);
        assert_eq!(l.graph.edge_count(), 14);
        assert_eq!(l.graph.degree(l.port("g")), 2);
    }

    #[test]
    fn splitter_counts() {
        let s = build_splitter();
        assert_eq!(s.graph.vertex_count(), 28);
        assert_eq!(s.graph.edge_count(), 47);
        assert_eq!(s.ports.len(), 5);
    }

    #[test]
    fn clause_gadget_counts() {
        let d = build_clause_gadget();
        assert_eq!(d.graph.vertex_count(), 15);
        assert_eq!(d.graph.edge_count(), 30);
        assert_eq!(d.port("a1^3"), d.port("a3^1"));
        assert!(d.graph.has_edge(d.port("a2^3"), d.port("a2^1")));
    }

    #[test]
    fn variable_gadget_counts() {
        let x = build_variable_gadget(&[true]).unwrap();
        assert_eq!(x.graph.vertex_count(), 30);
        let x = build_variable_gadget(&[true, false, true]).unwrap();
        assert_eq!(x.graph.vertex_count(), 12 + 3 * 26);
        assert_eq!(x.port("g^2"), x.port("v6"));
        assert_eq!(x.port("h^2"), x.port("v8"));
        assert!(build_variable_gadget(&[]).is_err());
    }
}

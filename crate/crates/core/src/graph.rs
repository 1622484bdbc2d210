//! Simple undirected graphs, pattern families and subgraph-copy search.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::error::{Error, Result};

/// An undirected edge, always stored with the smaller endpoint first.
pub type Edge = (usize, usize);

/// A set of edges in canonical orientation.
pub type EdgeSet = BTreeSet<Edge>;

/// Canonical orientation of the pair `{u, v}`.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are kept sorted and deduplicated; adjacency lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting out-of-range endpoints and self-loops.
    /// Duplicate edges (in either orientation) collapse into one.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edge_list {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        Ok(Self::from_canonical(
            n,
            edge_list.iter().map(|&(u, v)| edge(u, v)).collect(),
        ))
    }

    fn from_canonical(n: usize, edges: BTreeSet<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            n,
            edges: edges.into_iter().collect(),
            adj,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, BTreeSet::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_canonical(n, edges)
    }

    /// Path on `n` vertices `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_canonical(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut edges: BTreeSet<Edge> = (1..n).map(|v| (v - 1, v)).collect();
        edges.insert((0, n - 1));
        Self::from_canonical(n, edges)
    }

    /// `copies` vertex-disjoint copies of `self`.
    pub fn repeat(&self, copies: usize) -> Self {
        let mut out = Graph::empty(0);
        for _ in 0..copies {
            out = out.disjoint_union(self);
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is
    /// `vertices[i]` of `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| edge(index[u], index[v]))
            .collect();
        Self::from_canonical(vertices.len(), edges)
    }

    /// The graph with the given edges removed. Non-edges are ignored.
    pub fn without_edges(&self, removed: &EdgeSet) -> Graph {
        if removed.is_empty() {
            return self.clone();
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| !removed.contains(e))
            .copied()
            .collect();
        Self::from_canonical(self.n, edges)
    }

    /// Vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        Self::from_canonical(self.n + other.n, edges)
    }

    /// Strong product; vertex `(a, b)` is numbered `a * other.n + b`.
    pub fn strong_product(&self, other: &Graph) -> Graph {
        let m = other.n;
        let mut edges = BTreeSet::new();
        let close = |g: &Graph, x: usize, y: usize| x == y || g.has_edge(x, y);
        for a in 0..self.n {
            for b in 0..m {
                for c in 0..self.n {
                    for d in 0..m {
                        let (p, q) = (a * m + b, c * m + d);
                        if p < q && close(self, a, c) && close(other, b, d) {
                            edges.insert((p, q));
                        }
                    }
                }
            }
        }
        Self::from_canonical(self.n * m, edges)
    }

    /// Replaces every vertex by a clique of size `t`, joining cliques of
    /// adjacent vertices completely. Copy `i` of `v` is numbered `v * t + i`.
    pub fn blow_up(&self, t: usize) -> Graph {
        let mut edges = BTreeSet::new();
        for v in 0..self.n {
            for i in 0..t {
                for j in i + 1..t {
                    edges.insert((v * t + i, v * t + j));
                }
            }
        }
        for &(u, v) in &self.edges {
            for i in 0..t {
                for j in 0..t {
                    edges.insert(edge(u * t + i, v * t + j));
                }
            }
        }
        Self::from_canonical(self.n * t, edges)
    }

    pub fn isolated_vertices(&self) -> usize {
        self.adj.iter().filter(|a| a.is_empty()).count()
    }
}

/// Connected components, each sorted, ordered by their minimum vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut block = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    block.push(w);
                    stack.push(w);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

/// BFS distances from `sources`; `None` for unreachable vertices.
pub fn bfs_distances(g: &Graph, sources: &[usize]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Radius of the subgraph induced on `vertices`, or `None` when that
/// subgraph is disconnected. An empty set has radius 0.
pub fn induced_radius(g: &Graph, vertices: &[usize]) -> Option<usize> {
    if vertices.is_empty() {
        return Some(0);
    }
    let sub = g.induced_subgraph(vertices);
    let mut best: Option<usize> = None;
    for s in 0..sub.vertex_count() {
        let dist = bfs_distances(&sub, &[s]);
        let ecc = dist.iter().try_fold(0usize, |acc, d| d.map(|d| acc.max(d)))?;
        best = Some(best.map_or(ecc, |b| b.min(ecc)));
    }
    best
}

/// A family of forbidden patterns with their connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternFamily {
    patterns: Vec<Graph>,
    components: Vec<Vec<Vec<usize>>>,
    r: usize,
}

impl PatternFamily {
    pub fn new(patterns: Vec<Graph>) -> Result<Self> {
        if let Some(i) = patterns.iter().position(|p| p.vertex_count() == 0) {
            return Err(Error::EmptyPattern(i));
        }
        let r = patterns.iter().map(Graph::vertex_count).max().unwrap_or(0);
        Ok(Self::with_order(patterns, r))
    }

    /// Keeps `r` fixed; used when a family shrinks but the window plan built
    /// from the original order must stay put.
    pub(crate) fn with_order(patterns: Vec<Graph>, r: usize) -> Self {
        let components = patterns.iter().map(connected_components).collect();
        PatternFamily {
            patterns,
            components,
            r,
        }
    }

    pub fn single(pattern: Graph) -> Result<Self> {
        Self::new(vec![pattern])
    }

    pub fn patterns(&self) -> &[Graph] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Maximum pattern order.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Vertex partition of pattern `i` into connected components.
    pub fn components(&self, i: usize) -> &[Vec<usize>] {
        &self.components[i]
    }

    pub fn all_connected(&self) -> bool {
        self.components.iter().all(|c| c.len() <= 1)
    }

    /// Component `c` of pattern `i` as a standalone graph.
    pub fn component_graph(&self, i: usize, c: usize) -> Graph {
        self.patterns[i].induced_subgraph(&self.components[i][c])
    }

    /// Pattern `i` with the vertices of its component `c` removed.
    pub fn pattern_without_component(&self, i: usize, c: usize) -> Graph {
        let keep: Vec<usize> = (0..self.components[i].len())
            .filter(|&d| d != c)
            .flat_map(|d| self.components[i][d].iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.patterns[i].induced_subgraph(&keep)
    }
}

/// Injective map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub mapping: Vec<usize>,
}

impl Embedding {
    /// Host edges used by the copy, in canonical orientation.
    pub fn image_edges(&self, pattern: &Graph) -> Vec<Edge> {
        pattern
            .edges()
            .iter()
            .map(|&(a, b)| edge(self.mapping[a], self.mapping[b]))
            .collect()
    }

    pub fn is_valid(&self, host: &Graph, pattern: &Graph) -> bool {
        let m = &self.mapping;
        m.len() == pattern.vertex_count()
            && m.iter().all(|&x| x < host.vertex_count())
            && m.iter().collect::<BTreeSet<_>>().len() == m.len()
            && pattern.edges().iter().all(|&(a, b)| host.has_edge(m[a], m[b]))
    }
}

/// Search order over pattern vertices: larger components first; inside a
/// component start at a maximum-degree vertex and keep growing along edges,
/// preferring vertices with more already-ordered neighbours, then higher
/// degree, then lower index.
fn search_order(pattern: &Graph) -> Vec<usize> {
    let mut comps = connected_components(pattern);
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut order = Vec::with_capacity(pattern.vertex_count());
    let mut placed = vec![false; pattern.vertex_count()];
    for comp in comps {
        let start = *comp
            .iter()
            .max_by(|&&a, &&b| pattern.degree(a).cmp(&pattern.degree(b)).then(b.cmp(&a)))
            .unwrap();
        placed[start] = true;
        order.push(start);
        for _ in 1..comp.len() {
            let next = *comp
                .iter()
                .filter(|&&v| !placed[v])
                .max_by_key(|&&v| {
                    let back = pattern.neighbors(v).iter().filter(|&&w| placed[w]).count();
                    (back, pattern.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            placed[next] = true;
            order.push(next);
        }
    }
    order
}

struct CopySearch<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    order: Vec<usize>,
    /// For each position, pattern neighbours appearing earlier in `order`.
    back: Vec<Vec<usize>>,
    mapping: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> CopySearch<'a> {
    fn new(host: &'a Graph, pattern: &'a Graph) -> Self {
        let order = search_order(pattern);
        let mut pos = vec![0; pattern.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                pattern
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| pos[w] < i)
                    .collect()
            })
            .collect();
        CopySearch {
            host,
            pattern,
            order,
            back,
            mapping: vec![usize::MAX; pattern.vertex_count()],
            used: vec![false; host.vertex_count()],
        }
    }

    fn run<F>(&mut self, depth: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return visit(&self.mapping);
        }
        let v = self.order[depth];
        let need = self.pattern.degree(v);
        let candidates: Vec<usize> = match self.back[depth].first() {
            Some(&w) => self.host.neighbors(self.mapping[w]).to_vec(),
            None => (0..self.host.vertex_count()).collect(),
        };
        for x in candidates {
            if self.used[x] || self.host.degree(x) < need {
                continue;
            }
            if !self.back[depth]
                .iter()
                .all(|&w| self.host.has_edge(self.mapping[w], x))
            {
                continue;
            }
            self.used[x] = true;
            self.mapping[v] = x;
            let flow = self.run(depth + 1, visit);
            self.used[x] = false;
            self.mapping[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every injective embedding of `pattern` into `host - forbidden`.
/// The callback receives the mapping indexed by pattern vertex.
pub fn for_each_copy<F>(host: &Graph, pattern: &Graph, forbidden: Option<&EdgeSet>, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if pattern.vertex_count() > host.vertex_count() || pattern.edge_count() > host.edge_count() {
        return;
    }
    let reduced;
    let host = match forbidden {
        Some(f) if !f.is_empty() => {
            reduced = host.without_edges(f);
            &reduced
        }
        _ => host,
    };
    let _ = CopySearch::new(host, pattern).run(0, &mut visit);
}

/// First copy of `pattern` in `host - forbidden`, in the deterministic
/// search order (host candidates tried in increasing index).
pub fn find_copy(host: &Graph, pattern: &Graph, forbidden: Option<&EdgeSet>) -> Option<Embedding> {
    let mut found = None;
    for_each_copy(host, pattern, forbidden, |m| {
        found = Some(Embedding { mapping: m.to_vec() });
        ControlFlow::Break(())
    });
    found
}

/// True iff `host - deleted` contains no copy of any member of `fam`.
pub fn is_family_free(host: &Graph, fam: &PatternFamily, deleted: &EdgeSet) -> Result<bool> {
    if let Some(&e) = deleted.iter().find(|&&(u, v)| !host.has_edge(u, v)) {
        return Err(Error::UnknownEdge(e));
    }
    Ok(fam
        .patterns()
        .iter()
        .all(|p| find_copy(host, p, Some(deleted)).is_none()))
}

/// First copy of any pattern, as `(pattern index, embedding)`.
pub fn find_family_copy(
    host: &Graph,
    fam: &PatternFamily,
    forbidden: Option<&EdgeSet>,
) -> Option<(usize, Embedding)> {
    fam.patterns()
        .iter()
        .enumerate()
        .find_map(|(i, p)| find_copy(host, p, forbidden).map(|e| (i, e)))
}

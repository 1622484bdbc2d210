//! Dynamic program over a nice tree decomposition deciding whether at most
//! `k` edge deletions make a graph free of every pattern in a family.
//!
//! The state at a node is the *trace*: the set of partial pattern copies that
//! are realisable in the processed part of the graph after deletions. A
//! partial copy records which pattern vertices are embedded, where the ones
//! still visible in the bag sit, and which pattern edges among those bag
//! vertices are already realised. Pattern vertices whose host image has been
//! forgotten must have all their pattern edges realised (closure). A trace
//! that contains a finished copy is discarded; partial solutions with equal
//! traces behave identically from then on, so only the cheapest is kept.
//!
//! Isolated pattern vertices are not tracked: a pattern with `i` isolated
//! vertices is complete once its remaining core is realised and the host has
//! `i` spare vertices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{edge, is_family_free, Edge, EdgeSet, Graph, PatternFamily};
use crate::treewidth::{make_nice, validate_td, NiceKind, TreeDecomposition};

/// Result of an edge-deletion query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    /// Sorted deletion set when the answer is yes.
    pub witness: Option<Vec<Edge>>,
    pub warnings: Vec<String>,
}

impl SolveOutcome {
    pub fn yes(witness: EdgeSet) -> Self {
        SolveOutcome {
            witness: Some(witness.into_iter().collect()),
            warnings: Vec::new(),
        }
    }

    pub fn no() -> Self {
        SolveOutcome {
            witness: None,
            warnings: Vec::new(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.witness.is_some()
    }

    pub fn cost(&self) -> Option<usize> {
        self.witness.as_ref().map(Vec::len)
    }

    pub fn witness_set(&self) -> Option<EdgeSet> {
        self.witness.as_ref().map(|w| w.iter().copied().collect())
    }
}

const MAX_PATTERN_VERTICES: usize = 32;
const MAX_PATTERN_EDGES: usize = 64;

/// Pattern stripped of isolated vertices, with edge numbering.
struct Core {
    n: usize,
    neighbors: Vec<Vec<u8>>,
    /// `edge_id[a][b]` is the bit of pattern edge `ab`.
    edge_id: Vec<Vec<Option<u8>>>,
    edge_mask_of: Vec<u64>,
    full_vertices: u32,
}

impl Core {
    fn new(core: &Graph) -> Self {
        let n = core.vertex_count();
        let mut edge_id = vec![vec![None; n]; n];
        let mut edge_mask_of = vec![0u64; n];
        for (i, &(a, b)) in core.edges().iter().enumerate() {
            edge_id[a][b] = Some(i as u8);
            edge_id[b][a] = Some(i as u8);
            edge_mask_of[a] |= 1 << i;
            edge_mask_of[b] |= 1 << i;
        }
        Core {
            n,
            neighbors: (0..n)
                .map(|v| core.neighbors(v).iter().map(|&w| w as u8).collect())
                .collect(),
            edge_id,
            edge_mask_of,
            full_vertices: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        }
    }
}

/// A partial copy of one pattern core.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Placement {
    pattern: u16,
    used: u32,
    /// Realised pattern edges whose endpoints are both still in the bag.
    realized: u64,
    /// `(pattern vertex, host vertex)` for bag-visible vertices, sorted.
    map: Vec<(u8, u32)>,
}

impl Placement {
    fn image(&self, a: u8) -> Option<u32> {
        self.map.iter().find(|&&(p, _)| p == a).map(|&(_, x)| x)
    }

    fn preimage(&self, x: u32) -> Option<u8> {
        self.map.iter().find(|&&(_, h)| h == x).map(|&(p, _)| p)
    }
}

type Trace = Vec<Placement>;

#[derive(Clone, Copy, Debug)]
enum Back {
    Start,
    From(u32),
    Deleted(u32, Edge),
    Join(u32, u32),
}

struct Table {
    traces: Vec<Trace>,
    cost: Vec<usize>,
    back: Vec<Back>,
    index: HashMap<Trace, u32>,
}

impl Table {
    fn new() -> Self {
        Table {
            traces: Vec::new(),
            cost: Vec::new(),
            back: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn offer(&mut self, mut trace: Trace, cost: usize, back: Back) {
        trace.sort_unstable();
        trace.dedup();
        match self.index.get(&trace) {
            Some(&i) => {
                if cost < self.cost[i as usize] {
                    self.cost[i as usize] = cost;
                    self.back[i as usize] = back;
                }
            }
            None => {
                let i = self.traces.len() as u32;
                self.index.insert(trace.clone(), i);
                self.traces.push(trace);
                self.cost.push(cost);
                self.back.push(back);
            }
        }
    }

    /// Keeps cost and backpointers, drops the traces.
    fn finish(self) -> Finished {
        Finished {
            back: self.back,
        }
    }
}

struct Finished {
    back: Vec<Back>,
}

struct Solver<'a> {
    g: &'a Graph,
    cores: Vec<Core>,
    /// Per core: whether a complete core copy makes the pattern present.
    live: Vec<bool>,
}

impl Solver<'_> {
    fn complete(&self, p: &Placement) -> bool {
        let core = &self.cores[p.pattern as usize];
        if p.used != core.full_vertices {
            return false;
        }
        // Edges with a forgotten endpoint are realised by closure.
        let mut needed = 0u64;
        for &(a, _) in &p.map {
            for &(b, _) in &p.map {
                if let Some(e) = core.edge_id[a as usize][b as usize] {
                    needed |= 1 << e;
                }
            }
        }
        p.realized & needed == needed
    }

    fn introduce_vertex(&self, trace: &Trace, v: usize) -> Trace {
        let mut out = trace.clone();
        let empties = (0..self.cores.len()).filter(|&i| self.live[i]).map(|i| Placement {
            pattern: i as u16,
            used: 0,
            realized: 0,
            map: Vec::new(),
        });
        for p in trace.iter().cloned().chain(empties) {
            let core = &self.cores[p.pattern as usize];
            for a in 0..core.n as u8 {
                if p.used >> a & 1 == 1 {
                    continue;
                }
                // Bag neighbours must be host-adjacent or the edge can never appear.
                let ok = core.neighbors[a as usize].iter().all(|&b| match p.image(b) {
                    Some(x) => self.g.has_edge(x as usize, v),
                    None => p.used >> b & 1 == 0,
                });
                if !ok {
                    continue;
                }
                let mut q = p.clone();
                q.used |= 1 << a;
                let at = q.map.partition_point(|&(c, _)| c < a);
                q.map.insert(at, (a, v as u32));
                out.push(q);
            }
        }
        out
    }

    /// `None` if keeping the edge completes a copy.
    fn keep_edge(&self, trace: &Trace, u: usize, v: usize) -> Option<Trace> {
        let mut out = Vec::with_capacity(trace.len());
        for p in trace {
            let mut q = p.clone();
            if let (Some(a), Some(b)) = (p.preimage(u as u32), p.preimage(v as u32)) {
                if let Some(e) = self.cores[p.pattern as usize].edge_id[a as usize][b as usize] {
                    q.realized |= 1 << e;
                    if self.complete(&q) {
                        return None;
                    }
                }
            }
            out.push(q);
        }
        Some(out)
    }

    fn delete_edge(&self, trace: &Trace, u: usize, v: usize) -> Trace {
        trace
            .iter()
            .filter(|p| match (p.preimage(u as u32), p.preimage(v as u32)) {
                (Some(a), Some(b)) => {
                    self.cores[p.pattern as usize].edge_id[a as usize][b as usize].is_none()
                }
                _ => true,
            })
            .cloned()
            .collect()
    }

    fn forget(&self, trace: &Trace, v: usize) -> Trace {
        let mut out = Vec::with_capacity(trace.len());
        for p in trace {
            let Some(a) = p.preimage(v as u32) else {
                out.push(p.clone());
                continue;
            };
            let core = &self.cores[p.pattern as usize];
            let closed = core.neighbors[a as usize].iter().all(|&b| {
                if p.used >> b & 1 == 0 {
                    return false;
                }
                match p.image(b) {
                    Some(_) => {
                        let e = core.edge_id[a as usize][b as usize].unwrap();
                        p.realized >> e & 1 == 1
                    }
                    None => true,
                }
            });
            if !closed {
                continue;
            }
            let mut q = p.clone();
            q.map.retain(|&(c, _)| c != a);
            q.realized &= !core.edge_mask_of[a as usize];
            out.push(q);
        }
        out
    }

    /// `None` if some combination is a finished copy.
    fn join(&self, left: &Trace, right: &Trace) -> Option<Trace> {
        let key = |p: &Placement| (p.pattern, p.map.clone());
        type Sides<'a> = (Vec<&'a Placement>, Vec<&'a Placement>);
        let mut groups: HashMap<(u16, Vec<(u8, u32)>), Sides> = HashMap::new();
        for p in left {
            groups.entry(key(p)).or_default().0.push(p);
        }
        for p in right {
            groups.entry(key(p)).or_default().1.push(p);
        }
        let mut out = Vec::new();
        for ((pattern, map), (ls, rs)) in groups {
            let bag_mask = map.iter().fold(0u32, |m, &(a, _)| m | 1 << a);
            let empty = Placement {
                pattern,
                used: 0,
                realized: 0,
                map: Vec::new(),
            };
            let with_empty = |side: Vec<&Placement>| -> Vec<Placement> {
                let mut v: Vec<Placement> = side.into_iter().cloned().collect();
                if map.is_empty() {
                    v.push(empty.clone());
                }
                v
            };
            let ls = with_empty(ls);
            let rs = with_empty(rs);
            for l in &ls {
                for r in &rs {
                    if (l.used & !bag_mask) & (r.used & !bag_mask) != 0 {
                        continue;
                    }
                    let q = Placement {
                        pattern,
                        used: l.used | r.used,
                        realized: l.realized | r.realized,
                        map: map.clone(),
                    };
                    if q.used == 0 {
                        continue;
                    }
                    if self.complete(&q) {
                        return None;
                    }
                    out.push(q);
                }
            }
        }
        Some(out)
    }
}

/// Exact minimum deletion set of size at most `k`, computed over the given
/// decomposition of `g`.
pub fn dp_solve(
    g: &Graph,
    td: &TreeDecomposition,
    fam: &PatternFamily,
    k: usize,
) -> Result<SolveOutcome> {
    if let Some(v) = validate_td(g, td).first() {
        return Err(Error::InvalidDecomposition(v.to_string()));
    }
    let n = g.vertex_count();
    let mut warnings = Vec::new();
    if k >= g.edge_count() {
        warnings.push(format!(
            "budget {k} is at least the number of edges ({})",
            g.edge_count()
        ));
    }

    let mut cores = Vec::new();
    let mut live = Vec::new();
    for (i, pat) in fam.patterns().iter().enumerate() {
        let kept: Vec<usize> = (0..pat.vertex_count())
            .filter(|&v| pat.degree(v) > 0)
            .collect();
        let core = pat.induced_subgraph(&kept);
        if core.vertex_count() > MAX_PATTERN_VERTICES || core.edge_count() > MAX_PATTERN_EDGES {
            return Err(Error::TooLarge(format!(
                "pattern {i} has {} non-isolated vertices and {} edges",
                core.vertex_count(),
                core.edge_count()
            )));
        }
        let fits = n >= pat.vertex_count();
        if core.vertex_count() == 0 && fits {
            // Edgeless pattern that fits: no deletion can remove it.
            return Ok(SolveOutcome {
                witness: None,
                warnings,
            });
        }
        live.push(fits && core.vertex_count() > 0);
        cores.push(Core::new(&core));
    }

    let solver = Solver { g, cores, live };
    let nice = make_nice(g, td)?;

    let mut finished: Vec<Option<Finished>> = Vec::with_capacity(nice.nodes.len());
    let mut pending: Vec<Option<Table>> = Vec::with_capacity(nice.nodes.len());
    for node in &nice.nodes {
        let mut table = Table::new();
        match node.kind {
            NiceKind::Leaf => table.offer(Vec::new(), 0, Back::Start),
            NiceKind::IntroduceVertex(v) => {
                let child = pending[node.children[0]].as_ref().unwrap();
                for (i, t) in child.traces.iter().enumerate() {
                    table.offer(solver.introduce_vertex(t, v), child.cost[i], Back::From(i as u32));
                }
            }
            NiceKind::IntroduceEdge(u, v) => {
                let child = pending[node.children[0]].as_ref().unwrap();
                for (i, t) in child.traces.iter().enumerate() {
                    let c = child.cost[i];
                    if let Some(kept) = solver.keep_edge(t, u, v) {
                        table.offer(kept, c, Back::From(i as u32));
                    }
                    if c < k {
                        table.offer(solver.delete_edge(t, u, v), c + 1, Back::Deleted(i as u32, edge(u, v)));
                    }
                }
            }
            NiceKind::Forget(v) => {
                let child = pending[node.children[0]].as_ref().unwrap();
                for (i, t) in child.traces.iter().enumerate() {
                    table.offer(solver.forget(t, v), child.cost[i], Back::From(i as u32));
                }
            }
            NiceKind::Join => {
                let l = pending[node.children[0]].as_ref().unwrap();
                let r = pending[node.children[1]].as_ref().unwrap();
                for (i, lt) in l.traces.iter().enumerate() {
                    for (j, rt) in r.traces.iter().enumerate() {
                        let c = l.cost[i] + r.cost[j];
                        if c > k {
                            continue;
                        }
                        if let Some(t) = solver.join(lt, rt) {
                            table.offer(t, c, Back::Join(i as u32, j as u32));
                        }
                    }
                }
            }
        }
        for &c in &node.children {
            let done = pending[c].take().unwrap();
            finished[c] = Some(done.finish());
        }
        pending.push(Some(table));
        finished.push(None);
    }

    let root = nice.root();
    let table = pending[root].take().unwrap();
    let best = (0..table.traces.len()).min_by_key(|&i| (table.cost[i], i));
    let Some(best) = best else {
        return Ok(SolveOutcome {
            witness: None,
            warnings,
        });
    };
    finished[root] = Some(table.finish());

    let mut deleted = EdgeSet::new();
    let mut stack = vec![(root, best as u32)];
    while let Some((node, state)) = stack.pop() {
        let children = &nice.nodes[node].children;
        match finished[node].as_ref().unwrap().back[state as usize] {
            Back::Start => {}
            Back::From(s) => stack.push((children[0], s)),
            Back::Deleted(s, e) => {
                deleted.insert(e);
                stack.push((children[0], s));
            }
            Back::Join(a, b) => {
                stack.push((children[0], a));
                stack.push((children[1], b));
            }
        }
    }

    if !is_family_free(g, fam, &deleted)? {
        return Err(Error::Internal(format!(
            "deletion set {deleted:?} leaves a forbidden copy"
        )));
    }
    let mut out = SolveOutcome::yes(deleted);
    out.warnings = warnings;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treewidth::compute_td;

    fn solve(g: &Graph, fam: &[Graph], k: usize) -> SolveOutcome {
        let fam = PatternFamily::new(fam.to_vec()).unwrap();
        dp_solve(g, &compute_td(g, 12), &fam, k).unwrap()
    }

    #[test]
    fn triangle_examples() {
        let k3 = Graph::complete(3);
        let out = solve(&k3, std::slice::from_ref(&k3), 1);
        assert_eq!(out.cost(), Some(1));
        assert!(!solve(&Graph::complete(4), std::slice::from_ref(&k3), 1).is_yes());
        assert_eq!(solve(&Graph::complete(4), &[k3], 2).cost(), Some(2));
    }

    #[test]
    fn path_examples() {
        let p4 = Graph::path(4);
        assert!(!solve(&p4, std::slice::from_ref(&p4), 0).is_yes());
        assert_eq!(solve(&p4, std::slice::from_ref(&p4), 1).cost(), Some(1));
    }

    #[test]
    fn disconnected_pattern_across_components() {
        let host = Graph::complete(3).repeat(2);
        let pat = Graph::complete(3).repeat(2);
        assert!(!solve(&host, std::slice::from_ref(&pat), 0).is_yes());
        assert_eq!(solve(&host, &[pat], 1).cost(), Some(1));
    }

    #[test]
    fn isolated_vertices_in_patterns() {
        // K2 + K1 needs a spare vertex.
        let pat = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(solve(&Graph::path(2), std::slice::from_ref(&pat), 0).cost(), Some(0));
        assert!(!solve(&Graph::path(3), std::slice::from_ref(&pat), 0).is_yes());
        assert_eq!(solve(&Graph::path(3), &[pat], 2).cost(), Some(2));
        // Edgeless patterns cannot be destroyed.
        assert!(!solve(&Graph::complete(3), &[Graph::empty(2)], 3).is_yes());
        assert_eq!(solve(&Graph::complete(1), &[Graph::empty(2)], 0).cost(), Some(0));
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = Graph::path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        let fam = PatternFamily::single(Graph::path(2)).unwrap();
        assert!(matches!(dp_solve(&g, &td, &fam, 1), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn budget_warning() {
        let out = solve(&Graph::complete(3), &[Graph::complete(3)], 5);
        assert_eq!(out.cost(), Some(1));
        assert_eq!(out.warnings.len(), 1);
    }
}

use crate::graph::{Graph, PatternFamily};

pub type Triangle = [usize; 3];

/// All triangles of `g` as sorted triples.
pub fn triangles(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        for &w in g.neighbors(v) {
            if w > v && g.has_edge(u, w) {
                out.push([u, v, w]);
            }
        }
    }
    out.sort_unstable();
    out
}

fn triangles_by_vertex(g: &Graph) -> Vec<Vec<Triangle>> {
    let mut by = vec![Vec::new(); g.vertex_count()];
    for t in triangles(g) {
        for &v in &t {
            by[v].push(t);
        }
    }
    by
}

/// A perfect triangle tiling, found by exact backtracking that always
/// branches on the uncovered vertex with the fewest usable triangles.
pub fn triangle_factor(g: &Graph) -> Option<Vec<Triangle>> {
    fn go(by: &[Vec<Triangle>], covered: &mut [bool], chosen: &mut Vec<Triangle>) -> bool {
        let free = |t: &Triangle, covered: &[bool]| t.iter().all(|&x| !covered[x]);
        let mut best: Option<(usize, usize)> = None;
        for v in 0..covered.len() {
            if covered[v] {
                continue;
            }
            let options = by[v].iter().filter(|t| free(t, covered)).count();
            if options == 0 {
                return false;
            }
            if best.is_none_or(|(_, c)| options < c) {
                best = Some((v, options));
                if options == 1 {
                    break;
                }
            }
        }
        let Some((v, _)) = best else {
            return true;
        };
        for t in &by[v] {
            if !free(t, covered) {
                continue;
            }
            for &x in t {
                covered[x] = true;
            }
            chosen.push(*t);
            if go(by, covered, chosen) {
                return true;
            }
            chosen.pop();
            for &x in t {
                covered[x] = false;
            }
        }
        false
    }

    if !g.vertex_count().is_multiple_of(3) {
        return None;
    }
    let by = triangles_by_vertex(g);
    let mut covered = vec![false; g.vertex_count()];
    let mut chosen = Vec::new();
    go(&by, &mut covered, &mut chosen).then(|| {
        chosen.sort_unstable();
        chosen
    })
}

/// Every set of vertex-disjoint triangles covering all vertices with
/// `required[v]`; other vertices may stay uncovered.
pub fn enumerate_tilings(g: &Graph, required: &[bool]) -> Vec<Vec<Triangle>> {
    fn go(
        v: usize,
        by: &[Vec<Triangle>],
        required: &[bool],
        covered: &mut [bool],
        chosen: &mut Vec<Triangle>,
        out: &mut Vec<Vec<Triangle>>,
    ) {
        let n = covered.len();
        let Some(v) = (v..n).find(|&x| !covered[x]) else {
            let mut t = chosen.clone();
            t.sort_unstable();
            out.push(t);
            return;
        };
        if !required[v] {
            go(v + 1, by, required, covered, chosen, out);
        }
        for t in &by[v] {
            // Vertices before v are settled: covered, or skipped for good.
            if t.iter().any(|&x| x != v && (x < v || covered[x])) {
                continue;
            }
            for &x in t {
                covered[x] = true;
            }
            chosen.push(*t);
            go(v + 1, by, required, covered, chosen, out);
            chosen.pop();
            for &x in t {
                covered[x] = false;
            }
        }
    }

    let by = triangles_by_vertex(g);
    let mut out = Vec::new();
    let mut covered = vec![false; g.vertex_count()];
    go(0, &by, required, &mut covered, &mut Vec::new(), &mut out);
    out
}

/// Whether no triangle of `g` avoids every vertex of `tiling`.
pub fn is_maximal_tiling(g: &Graph, tiling: &[Triangle]) -> bool {
    let mut covered = vec![false; g.vertex_count()];
    for t in tiling {
        for &x in t {
            covered[x] = true;
        }
    }
    triangles(g).iter().all(|t| t.iter().any(|&x| covered[x]))
}

/// The P4-deletion instance for a graph: budget `|E| - |V|`, infeasible
/// when negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum P4Instance {
    Budget { family: PatternFamily, k: usize },
    Infeasible,
}

pub fn p4_deletion_instance(g: &Graph) -> P4Instance {
    match g.edge_count().checked_sub(g.vertex_count()) {
        Some(k) => P4Instance::Budget {
            family: PatternFamily::single(Graph::path(4)).expect("P4 is non-empty"),
            k,
        },
        None => P4Instance::Infeasible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        assert_eq!(triangle_factor(&Graph::complete(3)), Some(vec![[0, 1, 2]]));
        assert_eq!(triangle_factor(&Graph::cycle(4)), None);
        assert_eq!(triangle_factor(&Graph::complete(4)), None);
        assert_eq!(triangle_factor(&Graph::complete(3).repeat(2)).map(|t| t.len()), Some(2));
        // Two triangles sharing a vertex plus an isolated edge's worth of vertices.
        let bowtie = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
        assert_eq!(triangle_factor(&bowtie), None);
    }

    #[test]
    fn enumeration_counts() {
        // K4 with every vertex optional: empty tiling plus four single triangles.
        let k4 = Graph::complete(4);
        assert_eq!(enumerate_tilings(&k4, &[false; 4]).len(), 5);
        assert_eq!(enumerate_tilings(&k4, &[true; 4]).len(), 0);
        let k6 = Graph::complete(6);
        // Perfect tilings of K6: 10.
        assert_eq!(enumerate_tilings(&k6, &[true; 6]).len(), 10);
        let maximal: Vec<_> = enumerate_tilings(&k4, &[false; 4])
            .into_iter()
            .filter(|t| is_maximal_tiling(&k4, t))
            .collect();
        assert_eq!(maximal.len(), 4);
    }

    #[test]
    fn p4_instances() {
        assert!(matches!(p4_deletion_instance(&Graph::complete(3)), P4Instance::Budget { k: 0, .. }));
        assert!(matches!(p4_deletion_instance(&Graph::cycle(4)), P4Instance::Budget { k: 0, .. }));
        assert_eq!(p4_deletion_instance(&Graph::path(3)), P4Instance::Infeasible);
    }
}

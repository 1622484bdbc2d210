use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, TAU};

use super::{crossing_points, validate_disks, DiskSet};
use crate::error::{Error, Result};
use crate::graph::{induced_radius, Graph};

/// Directed traversal of one boundary arc. Arc `arc` of disk `disk` runs
/// counter-clockwise between consecutive crossing points on its circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfEdge {
    pub disk: usize,
    pub arc: usize,
    pub ccw: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// Disks containing the face, sorted.
    pub depth: Vec<usize>,
    /// A point strictly inside the face.
    pub sample: (f64, f64),
    /// Half-edges having this face on their left.
    pub boundary: Vec<HalfEdge>,
}

/// Faces of the drawing formed by the boundary circles. Face 0 is the
/// unbounded one.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    pub faces: Vec<Face>,
    /// Pairs `(f, g)`, `f < g`, of faces sharing a boundary arc.
    pub adjacency: Vec<(usize, usize)>,
    pub outer_face: usize,
    /// Faces inside each disk, sorted.
    pub disk_faces: Vec<Vec<usize>>,
    /// Crossing points, plus one marker point on every circle without any.
    pub vertex_count: usize,
    pub arc_count: usize,
    /// Connected components of the union of the circles.
    pub components: usize,
}

impl Arrangement {
    /// The face adjacency graph.
    pub fn graph(&self) -> Graph {
        Graph::new(self.faces.len(), &self.adjacency).expect("faces are in range")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrangementStats {
    pub faces: usize,
    pub ply: usize,
    /// `None` when some disk's faces induce a disconnected subgraph.
    pub local_radius: Option<usize>,
}

pub fn arrangement_stats(arr: &Arrangement) -> ArrangementStats {
    let g = arr.graph();
    let ply = arr.faces.iter().map(|f| f.depth.len()).max().unwrap_or(0);
    let local_radius = arr
        .disk_faces
        .iter()
        .try_fold(0usize, |acc, faces| induced_radius(&g, faces).map(|r| acc.max(r)));
    ArrangementStats {
        faces: arr.faces.len(),
        ply,
        local_radius,
    }
}

struct Arc {
    disk: usize,
    start: f64,
    sweep: f64,
    from: usize,
    to: usize,
}

fn norm_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

struct Tracer<'a> {
    circles: &'a [(f64, f64, f64)],
    points: Vec<(f64, f64)>,
    arcs: Vec<Arc>,
    arc_base: Vec<usize>,
}

impl Tracer<'_> {
    fn origin(&self, h: usize) -> usize {
        let a = &self.arcs[h / 2];
        if h.is_multiple_of(2) {
            a.from
        } else {
            a.to
        }
    }

    fn dest(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    fn departure(&self, h: usize) -> f64 {
        let a = &self.arcs[h / 2];
        if h.is_multiple_of(2) {
            norm_angle(a.start + FRAC_PI_2)
        } else {
            norm_angle(a.start + a.sweep - FRAC_PI_2)
        }
    }

    /// Signed area contribution (Green's theorem) of traversing `h`.
    fn area(&self, h: usize) -> f64 {
        let a = &self.arcs[h / 2];
        let (cx, cy, r) = self.circles[a.disk];
        let (t0, t1) = (a.start, a.start + a.sweep);
        let ccw = 0.5 * (cx * r * (t1.sin() - t0.sin()) - cy * r * (t1.cos() - t0.cos()) + r * r * a.sweep);
        if h.is_multiple_of(2) {
            ccw
        } else {
            -ccw
        }
    }

    fn half_edge(&self, h: usize) -> HalfEdge {
        let a = &self.arcs[h / 2];
        HalfEdge {
            disk: a.disk,
            arc: h / 2 - self.arc_base[a.disk],
            ccw: h.is_multiple_of(2),
        }
    }

    /// Parity of crossings between a fixed generic ray from `q` and the arcs
    /// of `cycle`.
    fn encloses(&self, cycle: &[usize], q: (f64, f64)) -> bool {
        let dir = (1.2345f64.cos(), 1.2345f64.sin());
        let mut crossings = 0;
        for &h in cycle {
            let a = &self.arcs[h / 2];
            let (cx, cy, r) = self.circles[a.disk];
            let (wx, wy) = (q.0 - cx, q.1 - cy);
            let b = dir.0 * wx + dir.1 * wy;
            let c = wx * wx + wy * wy - r * r;
            let disc = b * b - c;
            if disc <= 0.0 {
                continue;
            }
            for t in [-b - disc.sqrt(), -b + disc.sqrt()] {
                if t <= 0.0 {
                    continue;
                }
                let phi = (wy + t * dir.1).atan2(wx + t * dir.0);
                if norm_angle(phi - a.start) < a.sweep {
                    crossings += 1;
                }
            }
        }
        crossings % 2 == 1
    }

    /// A point just left of the middle of `h`, and its clearance.
    fn offset_point(&self, h: usize) -> ((f64, f64), f64) {
        let a = &self.arcs[h / 2];
        let (cx, cy, r) = self.circles[a.disk];
        let phi = a.start + a.sweep / 2.0;
        let m = (cx + r * phi.cos(), cy + r * phi.sin());
        let clearance = self
            .circles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != a.disk)
            .map(|(_, &(x, y, rr))| ((m.0 - x).hypot(m.1 - y) - rr).abs())
            .fold(r, f64::min);
        let delta = 0.5 * clearance;
        let toward = if h.is_multiple_of(2) { -1.0 } else { 1.0 };
        (
            (m.0 + toward * delta * phi.cos(), m.1 + toward * delta * phi.sin()),
            delta,
        )
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let next = parent[y];
        parent[y] = root;
        y = next;
    }
    root
}

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(format!("arrangement: {}", msg.into()))
}

/// Traces the faces of the boundary circles, attaches nested components to
/// the faces containing them, and labels every face with the disks
/// containing it.
pub fn build_arrangement(ds: &DiskSet) -> Result<Arrangement> {
    if let Some(d) = validate_disks(ds).first() {
        return Err(Error::DegenerateInput(d.to_string()));
    }
    let n = ds.len();
    let eps = ds.epsilon;
    let circles = ds.circles();

    let mut points = Vec::new();
    let mut on_circle: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !ds.boundaries_cross(i, j) {
                continue;
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
            for p in crossing_points(circles[i], circles[j]) {
                let v = points.len();
                points.push(p);
                for c in [i, j] {
                    let (cx, cy, _) = circles[c];
                    on_circle[c].push((norm_angle((p.1 - cy).atan2(p.0 - cx)), v));
                }
            }
        }
    }
    let mut arcs = Vec::new();
    let mut arc_base = Vec::with_capacity(n);
    for (c, pts) in on_circle.iter_mut().enumerate() {
        let (cx, cy, r) = circles[c];
        if pts.is_empty() {
            points.push((cx + r, cy));
            pts.push((0.0, points.len() - 1));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        arc_base.push(arcs.len());
        let m = pts.len();
        for t in 0..m {
            let (a, from) = pts[t];
            let (b, to) = pts[(t + 1) % m];
            let sweep = if m == 1 { TAU } else { norm_angle(b - a) };
            if sweep * r <= eps {
                return Err(Error::DegenerateInput(format!(
                    "crossing points on disk {c} closer than epsilon"
                )));
            }
            arcs.push(Arc {
                disk: c,
                start: a,
                sweep,
                from,
                to,
            });
        }
    }
    let tr = Tracer {
        circles: &circles,
        points,
        arcs,
        arc_base,
    };
    let half_count = 2 * tr.arcs.len();

    let mut outgoing: Vec<Vec<(f64, usize)>> = vec![Vec::new(); tr.points.len()];
    for h in 0..half_count {
        outgoing[tr.origin(h)].push((tr.departure(h), h));
    }
    for out in &mut outgoing {
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in 0..out.len() {
            let gap = norm_angle(out[(w + 1) % out.len()].0 - out[w].0);
            if out.len() > 1 && gap <= eps {
                return Err(Error::DegenerateInput("boundary arcs leave a point in the same direction".into()));
            }
        }
    }
    let mut next = vec![0usize; half_count];
    for (h, nx) in next.iter_mut().enumerate() {
        let out = &outgoing[tr.dest(h)];
        let pos = out
            .iter()
            .position(|&(_, e)| e == h ^ 1)
            .expect("twin leaves the destination");
        *nx = out[(pos + out.len() - 1) % out.len()].1;
    }

    let mut cycle_of = vec![usize::MAX; half_count];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for h in 0..half_count {
        if cycle_of[h] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut e = h;
        while cycle_of[e] == usize::MAX {
            cycle_of[e] = id;
            cyc.push(e);
            e = next[e];
        }
        if e != h {
            return Err(internal("half-edge successor map is not a permutation"));
        }
        cycles.push(cyc);
    }
    let area: Vec<f64> = cycles.iter().map(|c| c.iter().map(|&h| tr.area(h)).sum()).collect();
    let comp_of_cycle: Vec<usize> = cycles
        .iter()
        .map(|c| find(&mut parent, tr.arcs[c[0] / 2].disk))
        .collect();
    let mut comp_ids: Vec<usize> = comp_of_cycle.clone();
    comp_ids.sort_unstable();
    comp_ids.dedup();
    let components = comp_ids.len();

    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    let mut face_cycles: Vec<Vec<usize>> = vec![Vec::new()];
    for (c, &a) in area.iter().enumerate() {
        if a > 0.0 {
            face_of_cycle[c] = face_cycles.len();
            face_cycles.push(vec![c]);
        }
    }
    for &comp in &comp_ids {
        let outer: Vec<usize> = (0..cycles.len())
            .filter(|&c| comp_of_cycle[c] == comp && area[c] < 0.0)
            .collect();
        if outer.len() != 1 {
            return Err(internal(format!(
                "component has {} outer boundaries",
                outer.len()
            )));
        }
        let hole = outer[0];
        let q = tr.points[tr.origin(cycles[hole][0])];
        let host = (0..cycles.len())
            .filter(|&c| area[c] > 0.0 && comp_of_cycle[c] != comp && tr.encloses(&cycles[c], q))
            .min_by(|&a, &b| area[a].total_cmp(&area[b]));
        let face = host.map_or(0, |c| face_of_cycle[c]);
        face_of_cycle[hole] = face;
        face_cycles[face].push(hole);
    }
    let face_count = face_cycles.len();
    let face_of = |h: usize| face_of_cycle[cycle_of[h]];

    let mut adj: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for a in 0..tr.arcs.len() {
        let (f, g) = (face_of(2 * a), face_of(2 * a + 1));
        if f == g {
            return Err(internal("an arc has the same face on both sides"));
        }
        adj.insert((f.min(g), f.max(g), tr.arcs[a].disk));
    }

    let v = tr.points.len() as i64;
    let e = tr.arcs.len() as i64;
    if v - e + face_count as i64 != 1 + components as i64 {
        return Err(internal(format!(
            "Euler relation fails: {v} - {e} + {face_count} != 1 + {components}"
        )));
    }
    for &comp in &comp_ids {
        let arcs_k = tr.arcs.iter().filter(|a| find(&mut parent, a.disk) == comp).count() as i64;
        let mut verts = BTreeSet::new();
        for a in tr.arcs.iter().filter(|a| find(&mut parent, a.disk) == comp) {
            verts.insert(a.from);
        }
        let cyc_k = comp_of_cycle.iter().filter(|&&c| c == comp).count() as i64;
        if verts.len() as i64 - arcs_k + cyc_k != 2 {
            return Err(internal("Euler relation fails on a component"));
        }
    }

    // Depth sets by toggling across arcs from the outer face.
    let mut toggled: Vec<Option<Vec<usize>>> = vec![None; face_count];
    let mut nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); face_count];
    for &(f, g, d) in &adj {
        nbrs[f].push((g, d));
        nbrs[g].push((f, d));
    }
    toggled[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let here = toggled[f].clone().expect("queued faces are labelled");
        for &(g, d) in &nbrs[f] {
            let mut set = here.clone();
            match set.binary_search(&d) {
                Ok(p) => {
                    set.remove(p);
                }
                Err(p) => set.insert(p, d),
            }
            match &toggled[g] {
                None => {
                    toggled[g] = Some(set);
                    queue.push_back(g);
                }
                Some(old) if *old != set => return Err(internal("inconsistent depth toggling")),
                Some(_) => {}
            }
        }
    }

    let far_x = circles.iter().map(|&(x, _, r)| x + r).fold(0.0f64, f64::max) + 1.0;
    let mut faces = Vec::with_capacity(face_count);
    for (f, cyc_list) in face_cycles.iter().enumerate() {
        let boundary: Vec<HalfEdge> = cyc_list
            .iter()
            .flat_map(|&c| cycles[c].iter().map(|&h| tr.half_edge(h)))
            .collect();
        let sample = if f == 0 {
            (far_x, 0.0)
        } else {
            cycles[cyc_list[0]]
                .iter()
                .map(|&h| tr.offset_point(h))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("cycles are non-empty")
                .0
        };
        let mut depth = Vec::new();
        for (d, &(cx, cy, r)) in circles.iter().enumerate() {
            let dist = (sample.0 - cx).hypot(sample.1 - cy);
            if (dist - r).abs() <= eps / 2.0 {
                return Err(Error::DegenerateInput(format!(
                    "sample point of face {f} within epsilon of disk {d}"
                )));
            }
            if dist < r {
                depth.push(d);
            }
        }
        let toggled = toggled[f]
            .take()
            .ok_or_else(|| internal(format!("face {f} unreachable from the outer face")))?;
        if toggled != depth {
            return Err(internal(format!(
                "face {f}: toggled depth {toggled:?} but sample lies in {depth:?}"
            )));
        }
        faces.push(Face {
            depth,
            sample,
            boundary,
        });
    }
    let mut disk_faces = vec![Vec::new(); n];
    for (f, face) in faces.iter().enumerate() {
        for &d in &face.depth {
            disk_faces[d].push(f);
        }
    }
    let mut adjacency: Vec<(usize, usize)> = adj.iter().map(|&(f, g, _)| (f, g)).collect();
    adjacency.dedup();
    Ok(Arrangement {
        faces,
        adjacency,
        outer_face: 0,
        disk_faces,
        vertex_count: tr.points.len(),
        arc_count: tr.arcs.len(),
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::disks;
    use super::*;

    fn depths(arr: &Arrangement) -> Vec<Vec<usize>> {
        arr.faces.iter().map(|f| f.depth.clone()).collect()
    }

    #[test]
    fn single_disk() {
        let arr = build_arrangement(&disks(&[("0", "0", "1")])).unwrap();
        assert_eq!(depths(&arr), vec![vec![], vec![0]]);
        assert_eq!(arr.adjacency, vec![(0, 1)]);
        let s = arrangement_stats(&arr);
        assert_eq!((s.faces, s.ply, s.local_radius), (2, 1, Some(0)));
    }

    #[test]
    fn two_disjoint_disks() {
        let arr = build_arrangement(&disks(&[("0", "0", "1"), ("5", "0", "1")])).unwrap();
        assert_eq!(arr.faces.len(), 3);
        let g = arr.graph();
        assert_eq!(g.degree(arr.outer_face), 2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn two_crossing_disks() {
        let arr = build_arrangement(&disks(&[("0", "0", "1"), ("1", "0", "1")])).unwrap();
        assert_eq!(arr.faces.len(), 4);
        let find = |d: &[usize]| arr.faces.iter().position(|f| f.depth == d).unwrap();
        let (outer, a, b, lens) = (find(&[]), find(&[0]), find(&[1]), find(&[0, 1]));
        let g = arr.graph();
        assert_eq!(g.edge_count(), 4);
        assert!(g.has_edge(outer, a) && g.has_edge(a, lens) && g.has_edge(lens, b) && g.has_edge(b, outer));
        assert!(!g.has_edge(a, b) && !g.has_edge(outer, lens));
        let s = arrangement_stats(&arr);
        assert_eq!((s.faces, s.ply, s.local_radius), (4, 2, Some(1)));
    }

    #[test]
    fn nested_components() {
        // Big disk containing two crossing small ones, plus a far disk.
        let arr = build_arrangement(&disks(&[
            ("0", "0", "5"),
            ("0", "0", "1"),
            ("1", "0.1", "1"),
            ("20", "0", "1"),
        ]))
        .unwrap();
        assert_eq!(arr.components, 3);
        assert_eq!(arr.faces.len(), 6);
        let ring = arr.faces.iter().position(|f| f.depth == [0]).unwrap();
        assert_eq!(arr.graph().degree(ring), 3);
        assert_eq!(arrangement_stats(&arr).ply, 3);
    }

    #[test]
    fn face_split_in_two() {
        // Two overlapping disks cut a third into left and right parts.
        let arr = build_arrangement(&disks(&[("0", "0", "2"), ("0", "1.8", "2"), ("0", "-1.8", "2")])).unwrap();
        assert_eq!(arr.faces.iter().filter(|f| f.depth == [0]).count(), 2);
        assert_eq!(arr.components, 1);
    }

    #[test]
    fn degenerate_input_is_refused() {
        let err = build_arrangement(&disks(&[("0", "0", "1"), ("2", "0", "1")])).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }
}

use super::{arrangement_stats, intersection_graph, Arrangement, DiskSet};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, induced_radius, Graph};
use crate::layering::Layering;

/// Face adjacency graph with every face replaced by a clique of size
/// `max(depth, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub graph: Graph,
    /// Clique vertices of each face.
    pub clique_of: Vec<Vec<usize>>,
}

pub fn blow_up(arr: &Arrangement) -> BlowUp {
    let mut clique_of = Vec::with_capacity(arr.faces.len());
    let mut next = 0;
    for f in &arr.faces {
        let size = f.depth.len().max(1);
        clique_of.push((next..next + size).collect::<Vec<_>>());
        next += size;
    }
    let mut edges = Vec::new();
    for clique in &clique_of {
        for (i, &u) in clique.iter().enumerate() {
            edges.extend(clique[i + 1..].iter().map(|&v| (u, v)));
        }
    }
    for &(f, g) in &arr.adjacency {
        for &u in &clique_of[f] {
            edges.extend(clique_of[g].iter().map(|&v| (u, v)));
        }
    }
    BlowUp {
        graph: Graph::new(next, &edges).expect("clique vertices are in range"),
        clique_of,
    }
}

/// Branch sets of a minor model, one per vertex of the modelled graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub branch_sets: Vec<Vec<usize>>,
    pub depth: usize,
}

/// Checks that `model` is a depth-`model.depth` minor model of `g` in
/// `host`: disjoint, connected branch sets of radius at most the depth,
/// with a host edge between the branch sets of every edge of `g`.
pub fn validate_minor_model(host: &Graph, g: &Graph, model: &MinorModel) -> Result<()> {
    let bad = |msg: String| Err(Error::ModelInvalid(msg));
    if model.branch_sets.len() != g.vertex_count() {
        return bad(format!(
            "{} branch sets for {} vertices",
            model.branch_sets.len(),
            g.vertex_count()
        ));
    }
    let mut owner = vec![usize::MAX; host.vertex_count()];
    for (v, set) in model.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return bad(format!("branch set of {v} is empty"));
        }
        for &x in set {
            if x >= host.vertex_count() {
                return bad(format!("branch set of {v} names missing host vertex {x}"));
            }
            if owner[x] != usize::MAX {
                return bad(format!("host vertex {x} is in the branch sets of {} and {v}", owner[x]));
            }
            owner[x] = v;
        }
    }
    for (v, set) in model.branch_sets.iter().enumerate() {
        match induced_radius(host, set) {
            None => return bad(format!("branch set of {v} is disconnected")),
            Some(r) if r > model.depth => {
                return bad(format!("branch set of {v} has radius {r} > {}", model.depth))
            }
            Some(_) => {}
        }
    }
    for &(u, v) in g.edges() {
        let realized = model.branch_sets[u]
            .iter()
            .any(|&x| host.neighbors(x).iter().any(|&y| owner[y] == v));
        if !realized {
            return bad(format!("edge ({u}, {v}) has no host edge between its branch sets"));
        }
    }
    Ok(())
}

/// Models the intersection graph inside the blow-up: disk `v` takes one
/// unused clique vertex from every face inside it. The model is validated
/// before it is returned, with depth equal to the local radius.
pub fn minor_model(ds: &DiskSet, arr: &Arrangement, blow: &BlowUp) -> Result<MinorModel> {
    let depth = arrangement_stats(arr)
        .local_radius
        .ok_or_else(|| Error::ModelInvalid("local radius is unbounded".into()))?;
    let mut used = vec![0usize; arr.faces.len()];
    let mut branch_sets = Vec::with_capacity(ds.len());
    for faces in &arr.disk_faces {
        let mut set = Vec::with_capacity(faces.len());
        for &f in faces {
            let clique = &blow.clique_of[f];
            if used[f] >= clique.len() {
                return Err(Error::ModelInvalid(format!("face {f} has no unused clique vertex")));
            }
            set.push(clique[used[f]]);
            used[f] += 1;
        }
        branch_sets.push(set);
    }
    let model = MinorModel { branch_sets, depth };
    validate_minor_model(&blow.graph, &intersection_graph(ds), &model)?;
    Ok(model)
}

/// Per disk, 1 + the smallest face-adjacency distance from the outer face
/// to a face inside it.
pub fn raw_levels(arr: &Arrangement) -> Vec<usize> {
    let dist = bfs_distances(&arr.graph(), &[arr.outer_face]);
    arr.disk_faces
        .iter()
        .map(|faces| {
            faces
                .iter()
                .filter_map(|&f| dist[f])
                .min()
                .map_or(usize::MAX, |d| d + 1)
        })
        .collect()
}

/// Layering of the intersection graph obtained by grouping raw levels into
/// blocks of `4ρ + 1`, where `ρ` is the local radius. Blocks start at the
/// smallest raw level, so disks touching the outer face are on layer 1.
pub fn disk_layering(ds: &DiskSet, arr: &Arrangement) -> Result<Layering> {
    let g = arr.graph();
    let rho = match arrangement_stats(arr).local_radius {
        Some(r) => r,
        None => {
            let disk = (0..ds.len())
                .find(|&d| induced_radius(&g, &arr.disk_faces[d]).is_none())
                .unwrap_or(0);
            return Err(Error::UnboundedRadius(disk));
        }
    };
    let block = 4 * rho + 1;
    let raw = raw_levels(arr);
    let low = raw.iter().copied().min().unwrap_or(1);
    let layers: Vec<usize> = raw.iter().map(|&l| (l - low) / block + 1).collect();
    let num_layers = layers.iter().copied().max().unwrap_or(0);
    Layering::new(&intersection_graph(ds), layers, num_layers)
}

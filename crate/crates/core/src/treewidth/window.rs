use super::compute::{compute_td, DEFAULT_EXACT_THRESHOLD};
use super::td::{validate_td, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// An embedding of a graph `G` into the strong product of `h` with a path on
/// `path_len` vertices. Vertex `v` of `G` sits at `placement[v] = (x, layer)`
/// with `x` a vertex of `h` and `layer` in `1..=path_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEmbedding {
    pub h: Graph,
    pub h_td: TreeDecomposition,
    pub path_len: usize,
    pub placement: Vec<(usize, usize)>,
}

impl ProductEmbedding {
    /// Computes `h_td` when not supplied.
    pub fn new(
        h: Graph,
        h_td: Option<TreeDecomposition>,
        path_len: usize,
        placement: Vec<(usize, usize)>,
    ) -> Self {
        let h_td = h_td.unwrap_or_else(|| compute_td(&h, DEFAULT_EXACT_THRESHOLD));
        ProductEmbedding {
            h,
            h_td,
            path_len,
            placement,
        }
    }

    pub fn layer(&self, v: usize) -> usize {
        self.placement[v].1
    }

    /// Checks that `g` really sits inside `h ⊠ P`: the placement is injective,
    /// in range, and every edge maps onto a product edge. Also checks `h_td`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidEmbedding(msg));
        if self.placement.len() != g.vertex_count() {
            return bad(format!(
                "{} placements for {} vertices",
                self.placement.len(),
                g.vertex_count()
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for (v, &(x, layer)) in self.placement.iter().enumerate() {
            if x >= self.h.vertex_count() {
                return bad(format!("vertex {v} placed on missing factor vertex {x}"));
            }
            if layer < 1 || layer > self.path_len {
                return bad(format!("vertex {v} placed on layer {layer} outside [1, {}]", self.path_len));
            }
            if !seen.insert((x, layer)) {
                return bad(format!("two vertices placed at ({x}, {layer})"));
            }
        }
        for &(u, v) in g.edges() {
            let (a, la) = self.placement[u];
            let (b, lb) = self.placement[v];
            if !(a == b || self.h.has_edge(a, b)) || la.abs_diff(lb) > 1 {
                return bad(format!("edge ({u}, {v}) is not a product edge"));
            }
        }
        if let Some(viol) = validate_td(&self.h, &self.h_td).first() {
            return bad(format!("factor decomposition: {viol}"));
        }
        Ok(())
    }
}

/// Decomposition of `G[sub_vertices]` (vertex `i` is `sub_vertices[i]`)
/// obtained by blowing each factor bag up to every placed vertex whose layer
/// lies in `[lo, hi]`. Width is at most `(hi - lo + 1) * (w + 1) - 1` where
/// `w` is the width of `h_td`.
pub fn window_td(
    embed: &ProductEmbedding,
    sub_vertices: &[usize],
    lo: usize,
    hi: usize,
) -> Result<TreeDecomposition> {
    let mut at_factor = vec![Vec::new(); embed.h.vertex_count()];
    for (i, &v) in sub_vertices.iter().enumerate() {
        let (x, layer) = embed.placement[v];
        if layer < lo || layer > hi {
            return Err(Error::LayerOutOfRange {
                vertex: v,
                layer,
                lo,
                hi,
            });
        }
        at_factor[x].push(i);
    }
    let bags = embed
        .h_td
        .bags
        .iter()
        .map(|bag| bag.iter().flat_map(|&x| at_factor[x].iter().copied()).collect())
        .collect();
    Ok(TreeDecomposition::new(bags, embed.h_td.tree_edges.clone()))
}

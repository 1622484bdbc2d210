//! Layerings, the window plan over them, and the layered solving pipeline:
//! shrink the family when a component shows up in many far-apart windows,
//! drop the middle third of every odd window that holds no component copy,
//! and run the dynamic program on what is left.

use crate::dp::{dp_solve, SolveOutcome};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, connected_components, edge, find_copy, is_family_free, EdgeSet, Graph, PatternFamily};
use crate::treewidth::{compute_td, window_td, ProductEmbedding, TreeDecomposition, DEFAULT_EXACT_THRESHOLD};

/// Vertex-to-layer map with layers in `1..=num_layers` and every edge
/// spanning at most one layer boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layering {
    layer_of: Vec<usize>,
    num_layers: usize,
}

impl Layering {
    /// Checks the layer range and the edge-span condition against `g`.
    pub fn new(g: &Graph, layer_of: Vec<usize>, num_layers: usize) -> Result<Self> {
        if layer_of.len() != g.vertex_count() {
            return Err(Error::InvalidLayering(format!(
                "{} layers for {} vertices",
                layer_of.len(),
                g.vertex_count()
            )));
        }
        if let Some((v, &l)) = layer_of
            .iter()
            .enumerate()
            .find(|(_, &l)| l < 1 || l > num_layers)
        {
            return Err(Error::InvalidLayering(format!(
                "vertex {v} on layer {l} outside [1, {num_layers}]"
            )));
        }
        if let Some(&(u, v)) = g
            .edges()
            .iter()
            .find(|&&(u, v)| layer_of[u].abs_diff(layer_of[v]) > 1)
        {
            return Err(Error::InvalidLayering(format!(
                "edge ({u}, {v}) spans layers {} and {}",
                layer_of[u], layer_of[v]
            )));
        }
        Ok(Layering {
            layer_of,
            num_layers,
        })
    }

    pub fn layer(&self, v: usize) -> usize {
        self.layer_of[v]
    }

    pub fn layers(&self) -> &[usize] {
        &self.layer_of
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }
}

/// Layers are the path coordinates of the embedding.
pub fn layering_from_embedding(g: &Graph, embed: &ProductEmbedding) -> Result<Layering> {
    embed.validate(g)?;
    Layering::new(
        g,
        embed.placement.iter().map(|&(_, l)| l).collect(),
        embed.path_len,
    )
}

/// Layer = 1 + BFS distance from the roots. Components without a given
/// root are rooted at their smallest vertex.
pub fn bfs_layering(g: &Graph, roots: Option<&[usize]>) -> Result<Layering> {
    let n = g.vertex_count();
    let mut sources = roots.unwrap_or(&[]).to_vec();
    if let Some(&r) = sources.iter().find(|&&r| r >= n) {
        return Err(Error::IndexOutOfRange { index: r, n });
    }
    let reached = bfs_distances(g, &sources);
    for comp in connected_components(g) {
        if reached[comp[0]].is_none() {
            sources.push(comp[0]);
        }
    }
    let layer: Vec<usize> = bfs_distances(g, &sources)
        .into_iter()
        .map(|d| d.expect("every component has a source") + 1)
        .collect();
    let num_layers = layer.iter().copied().max().unwrap_or(0);
    Layering::new(g, layer, num_layers)
}

/// Windows `I_j = [3(j-1)r + 1, 3jr]` tiling the layers, with their vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPlan {
    pub r: usize,
    /// `windows[j - 1]` is `I_j` as an inclusive layer range.
    pub windows: Vec<(usize, usize)>,
    /// Vertices of each window, sorted.
    pub members: Vec<Vec<usize>>,
}

impl WindowPlan {
    /// Indices (0-based) of windows with odd 1-based number.
    pub fn odd_windows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.windows.len()).step_by(2)
    }

    /// Inclusive layer range of the middle third of window index `w`.
    pub fn middle(&self, w: usize) -> (usize, usize) {
        let lo = self.windows[w].0;
        (lo + self.r, lo + 2 * self.r - 1)
    }
}

pub fn window_plan(lay: &Layering, r: usize) -> WindowPlan {
    assert!(r >= 1, "window plan needs r >= 1");
    let span = 3 * r;
    let count = lay.num_layers().div_ceil(span);
    let windows: Vec<(usize, usize)> = (1..=count)
        .map(|j| (3 * (j - 1) * r + 1, 3 * j * r))
        .collect();
    let mut members = vec![Vec::new(); count];
    for (v, &l) in lay.layers().iter().enumerate() {
        members[(l - 1) / span].push(v);
    }
    WindowPlan {
        r,
        windows,
        members,
    }
}

/// Tuning knobs for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub exact_threshold: usize,
    /// Detect component copies inside windows with the dynamic program
    /// (budget 0) instead of direct copy search.
    pub detect_with_dp: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            detect_with_dp: false,
        }
    }
}

fn contains_copy(host: &Graph, pattern: &Graph, opts: &SolveOptions) -> Result<bool> {
    if opts.detect_with_dp {
        let fam = PatternFamily::single(pattern.clone())?;
        let td = compute_td(host, opts.exact_threshold);
        Ok(!dp_solve(host, &td, &fam, 0)?.is_yes())
    } else {
        Ok(find_copy(host, pattern, None).is_some())
    }
}

/// One family replacement: pattern `pattern` lost the component `removed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub pattern: usize,
    pub removed: Graph,
    pub odd_windows: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Reduced {
        family: PatternFamily,
        replacements: Vec<Replacement>,
    },
    /// Some connected member occurs in too many windows for budget `k`.
    /// `replacements` lists the reductions made before that was detected.
    Infeasible {
        reason: String,
        replacements: Vec<Replacement>,
    },
}

fn window_graphs(g: &Graph, plan: &WindowPlan) -> Vec<(usize, Graph)> {
    plan.odd_windows()
        .map(|w| (w, g.induced_subgraph(&plan.members[w])))
        .collect()
}

fn reduce_with(
    windows: &[(usize, Graph)],
    plan: &WindowPlan,
    fam: &PatternFamily,
    k: usize,
    opts: &SolveOptions,
) -> Result<Reduction> {
    let r = plan.r;
    let mut fam = fam.clone();
    let mut replacements = Vec::new();
    'outer: loop {
        if fam.all_connected() {
            let mut hit = 0;
            for (_, wg) in windows {
                let mut any = false;
                for p in fam.patterns() {
                    if contains_copy(wg, p, opts)? {
                        any = true;
                        break;
                    }
                }
                hit += usize::from(any);
            }
            if hit > k {
                return Ok(Reduction::Infeasible {
                    reason: format!("{hit} odd windows hold a member copy, budget {k}"),
                    replacements,
                });
            }
        }
        for i in 0..fam.len() {
            for c in 0..fam.components(i).len() {
                let comp = fam.component_graph(i, c);
                let mut count = 0;
                for (_, wg) in windows {
                    if contains_copy(wg, &comp, opts)? {
                        count += 1;
                    }
                }
                if count < k + r {
                    continue;
                }
                if fam.components(i).len() == 1 {
                    return Ok(Reduction::Infeasible {
                        reason: format!(
                            "connected pattern {i} occurs in {count} odd windows (threshold {})",
                            k + r
                        ),
                        replacements,
                    });
                }
                let mut patterns = fam.patterns().to_vec();
                patterns[i] = fam.pattern_without_component(i, c);
                replacements.push(Replacement {
                    pattern: i,
                    removed: comp,
                    odd_windows: count,
                });
                fam = PatternFamily::with_order(patterns, r);
                continue 'outer;
            }
        }
        break;
    }
    Ok(Reduction::Reduced {
        family: fam,
        replacements,
    })
}

/// Repeatedly drops a component `C` from a pattern `F` when copies of `C`
/// appear in at least `k + r` odd windows; a connected pattern in that
/// situation (or, for all-connected families, member copies in more than
/// `k` odd windows) makes the instance infeasible. `r` stays that of `plan`.
pub fn reduce_family(g: &Graph, plan: &WindowPlan, fam: &PatternFamily, k: usize) -> Result<Reduction> {
    reduce_with(&window_graphs(g, plan), plan, fam, k, &SolveOptions::default())
}

/// `G'` after removing middle layers, with `kept[i]` the original index of
/// vertex `i` of `graph`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruned {
    pub graph: Graph,
    pub kept: Vec<usize>,
    /// 0-based indices of windows whose middle third was removed.
    pub pruned_windows: Vec<usize>,
}

fn prune_with(
    g: &Graph,
    lay: &Layering,
    plan: &WindowPlan,
    windows: &[(usize, Graph)],
    fam: &PatternFamily,
    opts: &SolveOptions,
) -> Result<Pruned> {
    let comps: Vec<Graph> = (0..fam.len())
        .flat_map(|i| (0..fam.components(i).len()).map(move |c| (i, c)))
        .map(|(i, c)| fam.component_graph(i, c))
        .collect();
    let mut drop = vec![false; g.vertex_count()];
    let mut pruned_windows = Vec::new();
    for (w, wg) in windows {
        let mut occupied = false;
        for c in &comps {
            if contains_copy(wg, c, opts)? {
                occupied = true;
                break;
            }
        }
        if occupied {
            continue;
        }
        pruned_windows.push(*w);
        let (lo, hi) = plan.middle(*w);
        for &v in &plan.members[*w] {
            if (lo..=hi).contains(&lay.layer(v)) {
                drop[v] = true;
            }
        }
    }
    let kept: Vec<usize> = (0..g.vertex_count()).filter(|&v| !drop[v]).collect();
    Ok(Pruned {
        graph: g.induced_subgraph(&kept),
        kept,
        pruned_windows,
    })
}

/// Removes the middle third of every odd window whose induced subgraph has
/// no copy of any component of any pattern.
pub fn prune_middle_layers(g: &Graph, lay: &Layering, plan: &WindowPlan, fam: &PatternFamily) -> Result<Pruned> {
    prune_with(g, lay, plan, &window_graphs(g, plan), fam, &SolveOptions::default())
}

/// How [`solve`] reached its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Few layers: the dynamic program ran on the whole graph.
    Direct,
    /// Family reduction declared the instance infeasible.
    Infeasible {
        reason: String,
        replacements: Vec<Replacement>,
    },
    /// Middle layers were pruned before running the dynamic program.
    Pruned {
        replacements: Vec<Replacement>,
        pruned_windows: Vec<usize>,
        kept_vertices: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameworkReport {
    pub outcome: SolveOutcome,
    pub strategy: Strategy,
    /// Width of the decomposition handed to the dynamic program, if it ran.
    pub width: Option<usize>,
}

fn embedded_td(
    embed: &ProductEmbedding,
    g: &Graph,
    kept: &[usize],
    lay: &Layering,
) -> Result<TreeDecomposition> {
    let parts = connected_components(g)
        .into_iter()
        .map(|comp| {
            let original: Vec<usize> = comp.iter().map(|&v| kept[v]).collect();
            let lo = original.iter().map(|&v| lay.layer(v)).min().unwrap();
            let hi = original.iter().map(|&v| lay.layer(v)).max().unwrap();
            Ok(window_td(embed, &original, lo, hi)?.relabel(&comp))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::chain(parts))
}

/// Decides whether at most `k` deletions make `g` free of `fam`, using the
/// layering to prune. When `embed` is given, `lay` must be its layering and
/// decompositions come from the product structure.
pub fn solve(
    g: &Graph,
    lay: &Layering,
    fam: &PatternFamily,
    k: usize,
    embed: Option<&ProductEmbedding>,
    opts: &SolveOptions,
) -> Result<FrameworkReport> {
    let lay = Layering::new(g, lay.layers().to_vec(), lay.num_layers())?;
    if let Some(e) = embed {
        let from_embed = layering_from_embedding(g, e)?;
        if from_embed.layers() != lay.layers() {
            return Err(Error::InvalidLayering(
                "layering does not match the embedding".into(),
            ));
        }
    }
    let r = fam.r().max(1);
    let identity: Vec<usize> = (0..g.vertex_count()).collect();

    if lay.num_layers() <= 6 * r {
        let td = match embed {
            Some(e) => embedded_td(e, g, &identity, &lay)?,
            None => compute_td(g, opts.exact_threshold),
        };
        let outcome = dp_solve(g, &td, fam, k)?;
        return Ok(FrameworkReport {
            outcome,
            strategy: Strategy::Direct,
            width: Some(td.width()),
        });
    }

    let plan = window_plan(&lay, r);
    let windows = window_graphs(g, &plan);
    let (reduced, replacements) = match reduce_with(&windows, &plan, fam, k, opts)? {
        Reduction::Infeasible {
            reason,
            replacements,
        } => {
            return Ok(FrameworkReport {
                outcome: SolveOutcome::no(),
                strategy: Strategy::Infeasible {
                    reason,
                    replacements,
                },
                width: None,
            })
        }
        Reduction::Reduced {
            family,
            replacements,
        } => (family, replacements),
    };
    let pruned = prune_with(g, &lay, &plan, &windows, &reduced, opts)?;
    let td = match embed {
        Some(e) => embedded_td(e, &pruned.graph, &pruned.kept, &lay)?,
        None => compute_td(&pruned.graph, opts.exact_threshold),
    };
    let inner = dp_solve(&pruned.graph, &td, &reduced, k)?;
    let outcome = match inner.witness {
        Some(w) => {
            let lifted: EdgeSet = w
                .iter()
                .map(|&(a, b)| edge(pruned.kept[a], pruned.kept[b]))
                .collect();
            if !is_family_free(g, fam, &lifted)? {
                return Err(Error::Internal(
                    "lifted deletion set leaves a forbidden copy in the input graph".into(),
                ));
            }
            let mut out = SolveOutcome::yes(lifted);
            out.warnings = inner.warnings;
            out
        }
        None => SolveOutcome {
            witness: None,
            warnings: inner.warnings,
        },
    };
    Ok(FrameworkReport {
        outcome,
        strategy: Strategy::Pruned {
            replacements,
            pruned_windows: pruned.pruned_windows,
            kept_vertices: pruned.kept.len(),
        },
        width: Some(td.width()),
    })
}

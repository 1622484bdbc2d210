//! Command-line interface. `main.rs` parses arguments and prints; everything
//! else lives here so it can be driven from tests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::disk::{arrangement_stats, build_arrangement, disk_layering, intersection_graph, DiskSet};
use crate::dp::SolveOutcome;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hardness::{
    build_clause_gadget, build_splitter, build_variable_gadget, parse_dimacs, reduce_formula, triangle_factor,
    Rotation,
};
use crate::layering::{bfs_layering, layering_from_embedding, Layering, SolveOptions, Strategy};
use crate::treewidth::{validate_td, DEFAULT_EXACT_THRESHOLD};
use crate::{io, oracle, selftest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GadgetKind {
    Splitter,
    Clause,
    Variable,
}

#[derive(Debug, Parser)]
#[command(name = "subfree", version, about = "Edge deletion to pattern-free graphs")]
pub struct RunConfig {
    /// Output format; `json` is the stable machine interface.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[arg(long, default_value_t = selftest::DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Tolerance for floating-point arrangement geometry.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Largest graph whose treewidth is computed exactly.
    #[arg(long, global = true)]
    pub exact_threshold: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether at most K deletions make the graph pattern-free.
    Solve {
        /// Host graph; defaults to the intersection graph when --disks is given.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        k: usize,
        /// Product embedding supplying the layering (takes precedence over --disks).
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long)]
        disks: Option<PathBuf>,
    },
    /// Answer the same question by brute force.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Arrangement statistics for a set of disks.
    Arrangement {
        #[arg(long)]
        disks: PathBuf,
    },
    /// Print the layer of every vertex.
    Layering {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long)]
        disks: Option<PathBuf>,
    },
    /// Emit one of the hardness gadgets.
    GenGadget {
        kind: GadgetKind,
        /// Occurrence polarities for the variable gadget, e.g. `+-+`.
        #[arg(long, default_value = "++")]
        polarities: String,
    },
    /// Build the triangle-tiling graph for a DIMACS formula.
    GenReduction {
        #[arg(long)]
        cnf: PathBuf,
        /// Rotation system JSON: {"var_order": [...], "clause_order": [...]}.
        #[arg(long)]
        rotation: Option<PathBuf>,
    },
    /// Find a perfect triangle tiling.
    TriangleFactor {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check a tree decomposition against a graph.
    ValidateTd {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Run the built-in acceptance checks.
    Selftest {
        /// Run a single criterion (1-8).
        #[arg(long)]
        criterion: Option<u8>,
    },
}

/// The outcome of a command. `success` is false only when a self-check fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub text: String,
    pub success: bool,
}

impl Report {
    fn ok(value: Value, text: String) -> Self {
        Report {
            value,
            text,
            success: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.value.to_string(),
            Format::Text => self.text.trim_end().to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    with_path(path, io::parse_graph(&read(path)?))
}

fn load_disks(path: &Path, epsilon: Option<f64>) -> Result<DiskSet> {
    let ds = with_path(path, io::parse_disks(&read(path)?))?;
    Ok(match epsilon {
        Some(eps) => ds.with_epsilon(eps),
        None => ds,
    })
}

fn edges_text(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ")
}

fn outcome_report(out: &SolveOutcome, extra: Vec<(&str, Value)>) -> Report {
    let mut value = json!({
        "answer": if out.is_yes() { "yes" } else { "no" },
        "cost": out.cost(),
        "witness": out.witness,
    });
    let mut text = format!("answer: {}\n", value["answer"].as_str().unwrap_or_default());
    if let Some(w) = &out.witness {
        let _ = writeln!(text, "cost: {}\nwitness: {}", w.len(), edges_text(w));
    }
    for (key, v) in extra {
        let shown = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
        let _ = writeln!(text, "{key}: {shown}");
        value[key] = v;
    }
    if !out.warnings.is_empty() {
        value["warnings"] = json!(out.warnings);
        for w in &out.warnings {
            let _ = writeln!(text, "warning: {w}");
        }
    }
    Report::ok(value, text)
}

/// Picks the layering source: embedding, then disks, then BFS.
fn layered_input(
    cfg: &RunConfig,
    graph: Option<&Path>,
    embedding: Option<&Path>,
    disks: Option<&Path>,
) -> Result<(Graph, Layering, &'static str, Option<crate::treewidth::ProductEmbedding>)> {
    let given = graph.map(load_graph).transpose()?;
    if let Some(path) = embedding {
        let g = given.ok_or_else(|| Error::InvalidInput("--embedding requires --graph".into()))?;
        let e = with_path(path, io::parse_embedding(&read(path)?))?;
        let lay = layering_from_embedding(&g, &e)?;
        return Ok((g, lay, "embedding", Some(e)));
    }
    if let Some(path) = disks {
        let ds = load_disks(path, cfg.epsilon)?;
        let ig = intersection_graph(&ds);
        if let Some(g) = &given {
            if *g != ig {
                return Err(Error::InvalidInput(
                    "--graph differs from the intersection graph of --disks".into(),
                ));
            }
        }
        let arr = build_arrangement(&ds)?;
        let lay = disk_layering(&ds, &arr)?;
        return Ok((ig, lay, "disks", None));
    }
    let g = given.ok_or_else(|| Error::InvalidInput("a graph is required (--graph or --disks)".into()))?;
    let lay = bfs_layering(&g, None)?;
    Ok((g, lay, "bfs", None))
}

fn solve(
    cfg: &RunConfig,
    graph: Option<&Path>,
    family: &Path,
    k: usize,
    embedding: Option<&Path>,
    disks: Option<&Path>,
) -> Result<Report> {
    let fam = with_path(family, io::parse_family(&read(family)?))?;
    let (g, lay, source, embed) = layered_input(cfg, graph, embedding, disks)?;
    let opts = SolveOptions {
        exact_threshold: cfg.exact_threshold.unwrap_or(DEFAULT_EXACT_THRESHOLD),
        ..SolveOptions::default()
    };
    let rep = crate::layering::solve(&g, &lay, &fam, k, embed.as_ref(), &opts)?;
    let strategy = match &rep.strategy {
        Strategy::Direct => json!("direct"),
        Strategy::Infeasible { reason, .. } => json!(format!("infeasible: {reason}")),
        Strategy::Pruned { pruned_windows, .. } => json!(format!("pruned {} windows", pruned_windows.len())),
    };
    Ok(outcome_report(
        &rep.outcome,
        vec![
            ("layering", json!(source)),
            ("layers", json!(lay.num_layers())),
            ("strategy", strategy),
            ("width", json!(rep.width)),
        ],
    ))
}

fn layering(
    cfg: &RunConfig,
    graph: Option<&Path>,
    embedding: Option<&Path>,
    disks: Option<&Path>,
) -> Result<Report> {
    let (_, lay, source, _) = layered_input(cfg, graph, embedding, disks)?;
    let mut text = format!("source: {source}\nlayers: {}\n", lay.num_layers());
    for (v, l) in lay.layers().iter().enumerate() {
        let _ = writeln!(text, "{v} {l}");
    }
    Ok(Report::ok(
        json!({"source": source, "num_layers": lay.num_layers(), "layers": lay.layers()}),
        text,
    ))
}

fn gadget_report(g: &crate::hardness::LabeledGadget) -> Report {
    let mut text = format!(
        "vertices: {}\nedges: {}\nports: {}\n",
        g.graph.vertex_count(),
        g.graph.edge_count(),
        g.ports.len()
    );
    for (name, v) in &g.ports {
        let _ = writeln!(text, "  {name} = {v}");
    }
    let _ = writeln!(text, "edge list: {}", edges_text(g.graph.edges()));
    Report::ok(io::gadget_to_value(g), text)
}

fn parse_polarities(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '+' => Ok(true),
            '-' => Ok(false),
            _ => Err(Error::Parse {
                location: format!("--polarities, byte {i}"),
                message: format!("expected '+' or '-', found {c:?}"),
            }),
        })
        .collect()
}

fn selftest_report(seed: u64, criterion: Option<u8>) -> Result<Report> {
    let reports = match criterion {
        Some(id) => vec![selftest::run_criterion(id, seed)
            .ok_or_else(|| Error::InvalidInput(format!("no criterion {id}; expected 1-8")))?],
        None => selftest::run_all(seed),
    };
    let success = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "criterion {} {verdict}: {} ({})", r.id, r.title, r.detail);
    }
    let value = json!({
        "seed": seed,
        "passed": success,
        "criteria": reports
            .iter()
            .map(|r| json!({"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail}))
            .collect::<Vec<_>>(),
    });
    Ok(Report { value, text, success })
}

/// Executes one command. Errors are input or usage problems; a "no" answer is
/// a normal report.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    match &cfg.command {
        Command::Solve {
            graph,
            family,
            k,
            embedding,
            disks,
        } => solve(cfg, graph.as_deref(), family, *k, embedding.as_deref(), disks.as_deref()),
        Command::Oracle { graph, family, k } => {
            let g = load_graph(graph)?;
            let fam = with_path(family, io::parse_family(&read(family)?))?;
            Ok(outcome_report(&oracle::oracle_solve(&g, &fam, *k), Vec::new()))
        }
        Command::Arrangement { disks } => {
            let ds = load_disks(disks, cfg.epsilon)?;
            let stats = arrangement_stats(&build_arrangement(&ds)?);
            let radius = stats.local_radius.map_or("unbounded".to_string(), |r| r.to_string());
            Ok(Report::ok(
                json!({"faces": stats.faces, "ply": stats.ply, "local_radius": stats.local_radius}),
                format!("faces: {}\nply: {}\nlocal radius: {radius}\n", stats.faces, stats.ply),
            ))
        }
        Command::Layering {
            graph,
            embedding,
            disks,
        } => layering(cfg, graph.as_deref(), embedding.as_deref(), disks.as_deref()),
        Command::GenGadget { kind, polarities } => {
            let g = match kind {
                GadgetKind::Splitter => build_splitter(),
                GadgetKind::Clause => build_clause_gadget(),
                GadgetKind::Variable => build_variable_gadget(&parse_polarities(polarities)?)?,
            };
            Ok(gadget_report(&g))
        }
        Command::GenReduction { cnf, rotation } => {
            let mut inst = with_path(cnf, parse_dimacs(&read(cnf)?))?;
            if let Some(path) = rotation {
                let text = read(path)?;
                let rot: Rotation = serde_json::from_str(&text).map_err(|e| Error::Parse {
                    location: format!("{}: line {} column {}", path.display(), e.line(), e.column()),
                    message: e.to_string(),
                })?;
                inst = inst.with_rotation(rot)?;
            }
            Ok(gadget_report(&reduce_formula(&inst)?))
        }
        Command::TriangleFactor { graph } => {
            let g = load_graph(graph)?;
            let tiling = triangle_factor(&g);
            let text = match &tiling {
                Some(ts) => {
                    let parts: Vec<String> = ts.iter().map(|t| format!("{}-{}-{}", t[0], t[1], t[2])).collect();
                    format!("perfect tiling: {}\n", parts.join(" "))
                }
                None => "no perfect tiling\n".to_string(),
            };
            Ok(Report::ok(json!({"tiling": tiling}), text))
        }
        Command::ValidateTd { graph, td } => {
            let g = load_graph(graph)?;
            let t = with_path(td, io::parse_td(&read(td)?))?;
            let violations: Vec<String> = validate_td(&g, &t).iter().map(ToString::to_string).collect();
            let valid = violations.is_empty();
            let mut text = format!("valid: {valid}\nwidth: {}\n", t.width());
            for v in &violations {
                let _ = writeln!(text, "violation: {v}");
            }
            Ok(Report::ok(
                json!({"valid": valid, "width": t.width(), "violations": violations}),
                text,
            ))
        }
        Command::Selftest { criterion } => selftest_report(cfg.seed, *criterion),
    }
}

//! Deciding whether a graph can be made free of a family of forbidden
//! subgraphs by deleting at most `k` edges, using layerings from product
//! structures, BFS or disk arrangements together with a bounded-treewidth
//! dynamic program.
//!
//! ```
//! use subfree::graph::{Graph, PatternFamily};
//! use subfree::layering::{bfs_layering, solve, SolveOptions};
//!
//! let g = Graph::complete(4);
//! let fam = PatternFamily::single(Graph::complete(3))?;
//! let lay = bfs_layering(&g, None)?;
//! let report = solve(&g, &lay, &fam, 2, None, &SolveOptions::default())?;
//! assert_eq!(report.outcome.cost(), Some(2));
//! # Ok::<(), subfree::Error>(())
//! ```

pub mod disk;
pub mod dp;
pub mod cli;
pub mod error;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod layering;
pub mod oracle;
pub mod selftest;
pub mod treewidth;

pub use error::{Error, Result};

//! C interface to the `subfree` solver.
//!
//! Objects are opaque handles created by `*_new` / `*_from_json` and released
//! with the matching `*_free`. Fallible calls return a [`SubfreeStatus`]; on
//! failure `subfree_last_error()` describes the problem. No call unwinds across
//! the boundary: panics are caught and reported as `SUBFREE_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use subfree::disk::{arrangement_stats, build_arrangement};
use subfree::dp::SolveOutcome;
use subfree::graph::{Graph, PatternFamily};
use subfree::layering::{bfs_layering, solve, Layering, SolveOptions};
use subfree::{io, oracle, Error};

/// Returned by size getters when there is no value (e.g. the cost of a "no"
/// answer or an unbounded local radius).
pub const SUBFREE_NONE: usize = usize::MAX;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubfreeStatus {
    Ok = 0,
    NullPointer = 1,
    /// A string argument is not UTF-8, or an array length is inconsistent.
    InvalidArgument = 2,
    ParseError = 3,
    /// Well-formed input that the library rejects (bad index, degenerate disks, ...).
    InvalidInput = 4,
    TooLarge = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

pub struct SubfreeGraph(Graph);

pub struct SubfreeFamily(PatternFamily);

pub struct SubfreeOutcome(SolveOutcome);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SubfreeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => SubfreeStatus::ParseError,
            Error::TooLarge(_) => SubfreeStatus::TooLarge,
            Error::Internal(_) => SubfreeStatus::Internal,
            _ => SubfreeStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SubfreeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SubfreeStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            SubfreeStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SubfreeStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SubfreeStatus::InvalidArgument, format!("{what} is not UTF-8: {e}")))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn subfree_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn subfree_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`2 * edge_count` entries).
#[no_mangle]
pub unsafe extern "C" fn subfree_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut SubfreeGraph,
) -> SubfreeStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        emit(out, SubfreeGraph(Graph::new(n, &pairs)?))
    })
}

/// Parses `{"n": ..., "edges": [[u, v], ...]}`.
#[no_mangle]
pub unsafe extern "C" fn subfree_graph_from_json(json: *const c_char, out: *mut *mut SubfreeGraph) -> SubfreeStatus {
    guard(|| emit(out, SubfreeGraph(io::parse_graph(text(json, "json")?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn subfree_graph_vertex_count(g: *const SubfreeGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

#[no_mangle]
pub unsafe extern "C" fn subfree_graph_edge_count(g: *const SubfreeGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

#[no_mangle]
pub unsafe extern "C" fn subfree_graph_free(g: *mut SubfreeGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// A family from `count` pattern graphs. The patterns are copied; the caller
/// keeps ownership of the handles.
#[no_mangle]
pub unsafe extern "C" fn subfree_family_new(
    patterns: *const *const SubfreeGraph,
    count: usize,
    out: *mut *mut SubfreeFamily,
) -> SubfreeStatus {
    guard(|| {
        if count > 0 && patterns.is_null() {
            return Err(null("patterns"));
        }
        let graphs = (0..count)
            .map(|i| deref(*patterns.add(i), "pattern").map(|g| g.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        emit(out, SubfreeFamily(PatternFamily::new(graphs)?))
    })
}

/// Parses a JSON list of graphs.
#[no_mangle]
pub unsafe extern "C" fn subfree_family_from_json(json: *const c_char, out: *mut *mut SubfreeFamily) -> SubfreeStatus {
    guard(|| emit(out, SubfreeFamily(io::parse_family(text(json, "json")?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn subfree_family_free(f: *mut SubfreeFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

unsafe fn solve_with(
    g: *const SubfreeGraph,
    fam: *const SubfreeFamily,
    k: usize,
    layers: Option<&[usize]>,
    out: *mut *mut SubfreeOutcome,
) -> SubfreeStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        let fam = &deref(fam, "family")?.0;
        let lay = match layers {
            Some(l) => Layering::new(g, l.to_vec(), l.iter().copied().max().unwrap_or(1))?,
            None => bfs_layering(g, None)?,
        };
        let report = solve(g, &lay, fam, k, None, &SolveOptions::default())?;
        emit(out, SubfreeOutcome(report.outcome))
    })
}

/// Decides whether deleting at most `k` edges makes `g` free of every
/// pattern in `fam`, using a BFS layering.
#[no_mangle]
pub unsafe extern "C" fn subfree_solve(
    g: *const SubfreeGraph,
    fam: *const SubfreeFamily,
    k: usize,
    out: *mut *mut SubfreeOutcome,
) -> SubfreeStatus {
    solve_with(g, fam, k, None, out)
}

/// Like [`subfree_solve`] with a caller-supplied layering: `layers[v]` is the
/// 1-based layer of vertex `v`, one entry per vertex.
#[no_mangle]
pub unsafe extern "C" fn subfree_solve_layered(
    g: *const SubfreeGraph,
    fam: *const SubfreeFamily,
    k: usize,
    layers: *const usize,
    out: *mut *mut SubfreeOutcome,
) -> SubfreeStatus {
    let n = subfree_graph_vertex_count(g);
    if n > 0 && layers.is_null() {
        set_error("layers is null");
        return SubfreeStatus::NullPointer;
    }
    let slice = if n == 0 { &[][..] } else { std::slice::from_raw_parts(layers, n) };
    solve_with(g, fam, k, Some(slice), out)
}

/// Brute-force answer to the same question, for small inputs.
#[no_mangle]
pub unsafe extern "C" fn subfree_solve_oracle(
    g: *const SubfreeGraph,
    fam: *const SubfreeFamily,
    k: usize,
    out: *mut *mut SubfreeOutcome,
) -> SubfreeStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        let fam = &deref(fam, "family")?.0;
        emit(out, SubfreeOutcome(oracle::oracle_solve(g, fam, k)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn subfree_outcome_is_yes(o: *const SubfreeOutcome) -> bool {
    o.as_ref().is_some_and(|o| o.0.is_yes())
}

/// Number of deleted edges, or `SUBFREE_NONE` for a "no" answer.
#[no_mangle]
pub unsafe extern "C" fn subfree_outcome_cost(o: *const SubfreeOutcome) -> usize {
    o.as_ref().and_then(|o| o.0.cost()).unwrap_or(SUBFREE_NONE)
}

/// Copies the deleted edges into `edges` as flat pairs. `*count` receives
/// the number of edges; `SUBFREE_STATUS_BUFFER_TOO_SMALL` is returned when
/// `capacity` (in edges) is less than that, and nothing is written.
#[no_mangle]
pub unsafe extern "C" fn subfree_outcome_witness(
    o: *const SubfreeOutcome,
    edges: *mut usize,
    capacity: usize,
    count: *mut usize,
) -> SubfreeStatus {
    guard(|| {
        let o = deref(o, "outcome")?;
        if count.is_null() {
            return Err(null("count"));
        }
        let w = o.0.witness.as_deref().unwrap_or_default();
        *count = w.len();
        if w.is_empty() {
            return Ok(());
        }
        if capacity < w.len() {
            return Err(Failure(
                SubfreeStatus::BufferTooSmall,
                format!("witness has {} edges, capacity is {capacity}", w.len()),
            ));
        }
        if edges.is_null() {
            return Err(null("edges"));
        }
        for (i, &(u, v)) in w.iter().enumerate() {
            *edges.add(2 * i) = u;
            *edges.add(2 * i + 1) = v;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn subfree_outcome_free(o: *mut SubfreeOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Face count, ply and local radius of the arrangement of disks given as
/// JSON (`[{"x": "0", "y": "0", "r": "1"}, ...]`). An unbounded radius is
/// reported as `SUBFREE_NONE`.
#[no_mangle]
pub unsafe extern "C" fn subfree_arrangement_stats(
    disks_json: *const c_char,
    faces: *mut usize,
    ply: *mut usize,
    local_radius: *mut usize,
) -> SubfreeStatus {
    guard(|| {
        if faces.is_null() || ply.is_null() || local_radius.is_null() {
            return Err(null("output pointer"));
        }
        let ds = io::parse_disks(text(disks_json, "disks_json")?)?;
        let stats = arrangement_stats(&build_arrangement(&ds)?);
        *faces = stats.faces;
        *ply = stats.ply;
        *local_radius = stats.local_radius.unwrap_or(SUBFREE_NONE);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_handles_are_reported() {
        let mut out = ptr::null_mut();
        let st = unsafe { subfree_solve(ptr::null(), ptr::null(), 0, &mut out) };
        assert_eq!(st, SubfreeStatus::NullPointer);
        assert!(out.is_null());
        let msg = unsafe { CStr::from_ptr(subfree_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "graph is null");
    }
}

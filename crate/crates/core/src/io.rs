//! JSON file formats.
//!
//! * graph: `{"n": 4, "edges": [[0, 1], [1, 2]]}`
//! * family: a list of graphs
//! * tree decomposition: `{"bags": [[0, 1], [1, 2]], "tree_edges": [[0, 1]]}`
//!   (an optional `"nodes"` count must match the number of bags)
//! * embedding: `{"h": graph, "h_td": td (optional), "path_len": 5, "map": [[x, layer], ...]}`
//! * disks: `[{"x": "1.5", "y": "-2", "r": "1"}, ...]`, decimal strings or numbers
//! * gadget: a graph with an extra `"ports": {"name": vertex}` object

use std::collections::BTreeMap;

use serde::de::IgnoredAny;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::disk::{Disk, DiskSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, PatternFamily};
use crate::hardness::LabeledGadget;
use crate::treewidth::{ProductEmbedding, TreeDecomposition};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Gadget port names are accepted and ignored where a plain graph is expected.
    #[serde(default, rename = "ports", skip_serializing)]
    _ports: Option<IgnoredAny>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TdJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingJson {
    h: GraphJson,
    #[serde(default)]
    h_td: Option<TdJson>,
    path_len: usize,
    map: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskJson {
    x: Value,
    y: Value,
    r: Value,
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn parse_error(what: &str, text: &str, e: serde_json::Error) -> Error {
    Error::Parse {
        location: format!(
            "{what}, byte {} (line {} column {})",
            byte_offset(text, e.line(), e.column()),
            e.line(),
            e.column()
        ),
        message: e.to_string(),
    }
}

fn field_error(location: String, message: impl Into<String>) -> Error {
    Error::Parse {
        location,
        message: message.into(),
    }
}

fn from_str<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(what, text, e))
}

fn build_graph(g: GraphJson, at: &str) -> Result<Graph> {
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if u >= g.n || v >= g.n {
            return Err(field_error(
                format!("{at}edges[{i}]"),
                format!("endpoint out of range for n = {}", g.n),
            ));
        }
        if u == v {
            return Err(field_error(format!("{at}edges[{i}]"), "self-loop"));
        }
    }
    Graph::new(g.n, &g.edges)
}

fn graph_json(g: &Graph) -> GraphJson {
    GraphJson {
        n: g.vertex_count(),
        edges: g.edges().to_vec(),
        _ports: None,
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    build_graph(from_str("graph", text)?, "")
}

pub fn graph_to_value(g: &Graph) -> Value {
    serde_json::to_value(graph_json(g)).expect("graphs serialize")
}

pub fn parse_family(text: &str) -> Result<PatternFamily> {
    let list: Vec<GraphJson> = from_str("family", text)?;
    let graphs = list
        .into_iter()
        .enumerate()
        .map(|(i, g)| build_graph(g, &format!("[{i}].")))
        .collect::<Result<Vec<_>>>()?;
    PatternFamily::new(graphs)
}

fn build_td(td: TdJson, at: &str) -> Result<TreeDecomposition> {
    if let Some(nodes) = td.nodes {
        if nodes != td.bags.len() {
            return Err(field_error(
                format!("{at}nodes"),
                format!("{nodes} nodes but {} bags", td.bags.len()),
            ));
        }
    }
    for (i, &(a, b)) in td.tree_edges.iter().enumerate() {
        if a >= td.bags.len() || b >= td.bags.len() {
            return Err(field_error(format!("{at}tree_edges[{i}]"), "node index out of range"));
        }
    }
    Ok(TreeDecomposition::new(td.bags, td.tree_edges))
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    build_td(from_str("tree decomposition", text)?, "")
}

pub fn td_to_value(td: &TreeDecomposition) -> Value {
    serde_json::to_value(TdJson {
        nodes: Some(td.bags.len()),
        bags: td.bags.clone(),
        tree_edges: td.tree_edges.clone(),
    })
    .expect("decompositions serialize")
}

pub fn parse_embedding(text: &str) -> Result<ProductEmbedding> {
    let e: EmbeddingJson = from_str("embedding", text)?;
    let h = build_graph(e.h, "h.")?;
    let h_td = e.h_td.map(|td| build_td(td, "h_td.")).transpose()?;
    Ok(ProductEmbedding::new(h, h_td, e.path_len, e.map))
}

fn decimal(v: &Value, at: String) -> Result<num_rational::BigRational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(field_error(at, "expected a decimal string or number")),
    };
    crate::disk::parse_decimal(&text).map_err(|e| match e {
        Error::Parse { message, .. } => field_error(at, message),
        other => other,
    })
}

pub fn parse_disks(text: &str) -> Result<DiskSet> {
    let list: Vec<DiskJson> = from_str("disks", text)?;
    let disks = list
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Ok(Disk::new(
                decimal(&d.x, format!("[{i}].x"))?,
                decimal(&d.y, format!("[{i}].y"))?,
                decimal(&d.r, format!("[{i}].r"))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiskSet::new(disks))
}

pub fn gadget_to_value(g: &LabeledGadget) -> Value {
    let mut v = graph_to_value(&g.graph);
    v["ports"] = serde_json::to_value(&g.ports).expect("ports serialize");
    v
}

pub fn parse_gadget(text: &str) -> Result<LabeledGadget> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct GadgetJson {
        n: usize,
        edges: Vec<(usize, usize)>,
        ports: BTreeMap<String, usize>,
    }
    let g: GadgetJson = from_str("gadget", text)?;
    for (name, &v) in &g.ports {
        if v >= g.n {
            return Err(field_error(format!("ports.{name}"), "vertex out of range"));
        }
    }
    Ok(LabeledGadget {
        graph: build_graph(
            GraphJson {
                n: g.n,
                edges: g.edges,
                _ports: None,
            },
            "",
        )?,
        ports: g.ports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::cycle(5);
        let text = graph_to_value(&g).to_string();
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn errors_name_their_place() {
        match parse_graph("{\"n\": 2, \"edges\": [[0, 5]]}") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "edges[0]"),
            other => panic!("{other:?}"),
        }
        match parse_graph("{\"n\": 2,\n \"edges\": [[0, 1]") {
            Err(Error::Parse { location, .. }) => assert!(location.contains("byte 25 (line 2"), "{location}"),
            other => panic!("{other:?}"),
        }
        match parse_disks("[{\"x\": \"1\", \"y\": \"two\", \"r\": \"1\"}]") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "[0].y"),
            other => panic!("{other:?}"),
        }
        assert!(parse_graph("{\"n\": 2, \"edges\": [], \"extra\": 1}").is_err());
        assert!(parse_graph("{\"n\": 2, \"edges\": [], \"ports\": {\"a\": 0}}").is_ok());
    }

    #[test]
    fn family_and_disks() {
        let fam = parse_family("[{\"n\": 3, \"edges\": [[0,1],[1,2],[0,2]]}]").unwrap();
        assert_eq!(fam.patterns()[0], Graph::complete(3));
        let ds = parse_disks("[{\"x\": \"0\", \"y\": 0, \"r\": \"1.5\"}]").unwrap();
        assert_eq!(ds.len(), 1);
    }

    #[test]
    fn td_and_embedding() {
        let td = parse_td("{\"bags\": [[0,1],[1,2]], \"tree_edges\": [[0,1]]}").unwrap();
        assert_eq!(td.width(), 1);
        assert!(parse_td("{\"nodes\": 3, \"bags\": [[0]], \"tree_edges\": []}").is_err());
        let e = parse_embedding("{\"h\": {\"n\": 1, \"edges\": []}, \"path_len\": 3, \"map\": [[0,1],[0,2]]}").unwrap();
        e.validate(&Graph::path(2)).unwrap();
    }

    #[test]
    fn gadget_round_trip() {
        let sp = crate::hardness::build_splitter();
        let back = parse_gadget(&gadget_to_value(&sp).to_string()).unwrap();
        assert_eq!(back, sp);
    }
}

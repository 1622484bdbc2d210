use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use subfree::graph::Graph;
use subfree::hardness::build_splitter;
use subfree::io;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subfree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Files {
    _dir: tempfile::TempDir,
    k4: PathBuf,
    k3: PathBuf,
    two_crossing: PathBuf,
}

fn files() -> Files {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.json", &io::graph_to_value(&Graph::complete(4)).to_string());
    let k3 = write(dir.path(), "k3.json", r#"[{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}]"#);
    let two_crossing = write(
        dir.path(),
        "two_crossing.json",
        r#"[{"x": "0", "y": "0", "r": "1"}, {"x": "1", "y": "0", "r": "1"}]"#,
    );
    Files {
        _dir: dir,
        k4,
        k3,
        two_crossing,
    }
}

#[test]
fn k4_without_triangles_needs_two_deletions() {
    let f = files();
    let no = json_of(&run(&["solve", "--graph", s(&f.k4), "--family", s(&f.k3), "--k", "1"]));
    assert_eq!(no["answer"], "no");
    assert_eq!(no["layering"], "bfs");
    let yes = json_of(&run(&["solve", "--graph", s(&f.k4), "--family", s(&f.k3), "--k", "2"]));
    assert_eq!(yes["answer"], "yes");
    assert_eq!(yes["cost"], 2);
    let oracle = json_of(&run(&["oracle", "--graph", s(&f.k4), "--family", s(&f.k3), "--k", "2"]));
    assert_eq!(oracle["cost"], 2);
}

#[test]
fn two_crossing_disks() {
    let f = files();
    let stats = json_of(&run(&["arrangement", "--disks", s(&f.two_crossing)]));
    assert_eq!(stats, serde_json::json!({"faces": 4, "ply": 2, "local_radius": 1}));
    let lay = json_of(&run(&["layering", "--disks", s(&f.two_crossing)]));
    assert_eq!(lay["source"], "disks");
    assert_eq!(lay["layers"], serde_json::json!([1, 1]));
}

#[test]
fn splitter_gadget_round_trips() {
    let out = run(&["gen-gadget", "splitter"]);
    let v = json_of(&out);
    assert_eq!(v["n"], 28);
    assert_eq!(v["edges"].as_array().unwrap().len(), 47);
    assert_eq!(v["ports"].as_object().unwrap().len(), 5);
    let back = io::parse_gadget(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(back, build_splitter());
}

#[test]
fn layering_precedence_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = write(dir.path(), "p2.json", r#"{"n": 2, "edges": [[0, 1]]}"#);
    let fam = write(dir.path(), "fam.json", r#"[{"n": 2, "edges": [[0, 1]]}]"#);
    let disks = write(
        dir.path(),
        "d.json",
        r#"[{"x": "0", "y": "0", "r": "1"}, {"x": "1", "y": "0", "r": "1"}]"#,
    );
    let embed = write(
        dir.path(),
        "e.json",
        r#"{"h": {"n": 1, "edges": []}, "path_len": 2, "map": [[0, 1], [0, 2]]}"#,
    );
    let base = ["solve", "--graph", s(&p2), "--family", s(&fam), "--k", "1"];
    let with = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        json_of(&run(&args))
    };
    assert_eq!(with(&[])["layering"], "bfs");
    assert_eq!(with(&["--disks", s(&disks)])["layering"], "disks");
    let both = with(&["--disks", s(&disks), "--embedding", s(&embed)]);
    assert_eq!(both["layering"], "embedding");
    assert_eq!(both["answer"], "yes");
    assert_eq!(both["witness"], serde_json::json!([[0, 1]]));
}

#[test]
fn reduction_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.cnf", "c one clause\np cnf 3 1\n1 2 3 0\n");
    let unsat = write(dir.path(), "unsat.cnf", "p cnf 3 2\n1 2 3 0\n-1 2 3 0\n");
    for (cnf, tiles) in [(&sat, true), (&unsat, false)] {
        let out = run(&["gen-reduction", "--cnf", s(cnf)]);
        let g = write(dir.path(), "g.json", std::str::from_utf8(&out.stdout).unwrap());
        let t = json_of(&run(&["triangle-factor", "--graph", s(&g)]));
        assert_eq!(!t["tiling"].is_null(), tiles, "{}", cnf.display());
    }
}

#[test]
fn validate_td_lists_violations() {
    let f = files();
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"bags": [[0, 1, 2, 3]], "tree_edges": []}"#);
    let bad = write(dir.path(), "bad.json", r#"{"bags": [[0, 1, 2]], "tree_edges": []}"#);
    let v = json_of(&run(&["validate-td", "--graph", s(&f.k4), "--td", s(&good)]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["width"], 3);
    let v = json_of(&run(&["validate-td", "--graph", s(&f.k4), "--td", s(&bad)]));
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 4);
}

#[test]
fn errors_exit_nonzero_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n": 2, "edges": [[0, 1], [1, 9]]}"#);
    let out = run(&["triangle-factor", "--graph", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges[1]"));

    let broken = write(dir.path(), "broken.json", "{\"n\": 2,\n\"edges\": [[0, 1]");
    let out = run(&["triangle-factor", "--graph", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));

    let out = run(&["triangle-factor", "--graph", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["solve", "--family", s(&bad), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // clap usage errors
    assert!(!run(&["solve"]).status.success());
    assert!(!run(&["gen-gadget", "nonsense"]).status.success());
}

#[test]
fn text_format() {
    let f = files();
    let out = run(&["--format", "text", "solve", "--graph", s(&f.k4), "--family", s(&f.k3), "--k", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("answer: yes\ncost: 2\n"), "{text}");
}

#[test]
fn reports_are_deterministic() {
    let f = files();
    let dir = tempfile::tempdir().unwrap();
    let g = Graph::new(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6), (6, 4)]).unwrap();
    let gp = write(dir.path(), "g.json", &io::graph_to_value(&g).to_string());
    let cmds: Vec<Vec<&str>> = vec![
        vec!["solve", "--graph", s(&gp), "--family", s(&f.k3), "--k", "3"],
        vec!["arrangement", "--disks", s(&f.two_crossing)],
        vec!["gen-gadget", "variable", "--polarities", "+-+-"],
        vec!["selftest", "--criterion", "7"],
    ];
    for args in cmds {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_graphs_reparse(n in 1usize..12, raw in prop::collection::vec((0usize..12, 0usize..12), 0..30)) {
        let edges: Vec<_> = raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let g = Graph::new(n, &edges).unwrap();
        let text = io::graph_to_value(&g).to_string();
        prop_assert_eq!(io::parse_graph(&text).unwrap(), g);
    }
}

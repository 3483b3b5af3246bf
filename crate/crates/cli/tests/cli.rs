// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use treebar::coretree::{core_tree, CoreTree};
use treebar::kcore::compute_coreness;
use treebar::scale::bar_count;
use treebar::synth;

fn treebar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treebar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const TRIANGLE: &str = "0 1\n1 2\n2 0\n";
const TWO_TRIANGLES: &str = "0 1\n1 2\n2 0\n10 11\n11 12\n12 10\n";

#[test]
fn analyze_triangle_text_and_json() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", TRIANGLE);
    let o = treebar(&["analyze", s(&f)]);
    assert!(o.status.success());
    let text = stdout(&o);
    for (key, val) in [("n", "3"), ("m_prime", "3"), ("degeneracy", "2"), ("non_leaf", "1")] {
        let line = text.lines().find(|l| l.split_whitespace().next() == Some(key)).unwrap();
        assert_eq!(line.split_whitespace().nth(1), Some(val), "{line}");
    }

    let o = treebar(&["analyze", "--json", s(&f)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stats"]["n"], 3);
    assert_eq!(v["stats"]["m_prime"], 3);
    assert_eq!(v["degeneracy"], 2);
    assert_eq!(v["non_leaf_nodes"], 1);
}

#[test]
fn missing_file_exits_2_and_names_path() {
    let o = treebar(&["analyze", "/definitely/not/here.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/definitely/not/here.txt"));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_line_exits_1_with_context() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "0 1\nx y\n");
    let o = treebar(&["analyze", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.txt") && err.contains("line 2"), "{err}");
}

#[test]
fn render_triangle_single_bar() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", TRIANGLE);
    let o = treebar(&["render", s(&f), "--scale", "1"]);
    assert!(o.status.success());
    let svg = stdout(&o);
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("class=\"bar\"").count(), 1);
    assert_eq!(svg.matches("class=\"square\"").count(), 1);
    assert!(stderr(&o).contains("degeneracy"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", TRIANGLE);
    for args in [
        vec!["render", s(&f), "--scale", "0"],
        vec!["render", s(&f), "--scale", "1", "--target-bars", "5"],
        vec!["render", s(&f), "--target-bars", "0"],
        vec!["tree", s(&f), "--scale", "0"],
        vec!["frobnicate"],
    ] {
        let o = treebar(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn render_comb_auto_scale_matches_exhaustive_scan() {
    // Spine of 22 levels with 49 teeth per level: a 1002-node core tree.
    let g = synth::comb_graph_with(22, 49);
    let tree = core_tree(&g, &compute_coreness(&g), true).unwrap();
    assert_eq!(tree.len(), 1002);
    let expected = (1..=tree.max_coreness() + 1)
        .find(|&t| bar_count(&tree, t).unwrap() <= 30)
        .unwrap();

    let dir = TempDir::new().unwrap();
    let f = dir.path().join("comb.txt");
    g.write_edge_list(fs::File::create(&f).unwrap()).unwrap();
    let svg = dir.path().join("comb.svg");
    let o = treebar(&["render", s(&f), "--target-bars", "30", "--json", "-o", s(&svg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let report: Value = serde_json::from_str(&stderr(&o)).unwrap();
    assert_eq!(report["chosen_t"], expected);
    assert_eq!(report["auto_scaled"], true);
    assert!(report["bars"].as_u64().unwrap() <= 30);
    assert!(fs::read_to_string(&svg).unwrap().contains("</svg>"));
}

#[test]
fn timings_add_up_to_total() {
    let dir = TempDir::new().unwrap();
    let g = synth::nested_cores(12, 8, 4);
    let f = dir.path().join("g.txt");
    g.write_edge_list(fs::File::create(&f).unwrap()).unwrap();
    let o = treebar(&["render", s(&f), "--json", "-o", s(&dir.path().join("g.svg"))]);
    let r: Value = serde_json::from_str(&stderr(&o)).unwrap();
    let t = &r["timings"];
    let sum: f64 = ["ingest", "coreness", "tree", "collapse", "layout", "render"]
        .iter()
        .map(|k| {
            let v = t[k].as_f64().unwrap();
            assert!(v >= 0.0);
            v
        })
        .sum();
    let total = r["total_seconds"].as_f64().unwrap();
    assert!((sum - total).abs() <= 0.05 * total, "{sum} vs {total}");
}

#[test]
fn tree_json_shapes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "tri.txt", TRIANGLE);
    let v: Value = serde_json::from_str(&stdout(&treebar(&["tree", s(&f)]))).unwrap();
    assert_eq!((v["min_c"].as_u64(), v["max_c"].as_u64()), (Some(0), Some(2)));
    assert_eq!(v["n"], 3);
    assert_eq!(v["children"].as_array().unwrap().len(), 0);

    let f = write(&dir, "two.txt", TWO_TRIANGLES);
    let text = stdout(&treebar(&["tree", s(&f)]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!((v["min_c"].as_u64(), v["max_c"].as_u64()), (Some(0), Some(0)));
    assert_eq!(v["children"].as_array().unwrap().len(), 2);

    let parsed = CoreTree::from_json(&text).unwrap();
    let g = treebar::Graph::from_edges(&[(0, 1), (1, 2), (2, 0), (10, 11), (11, 12), (12, 10)]).unwrap();
    assert_eq!(parsed, core_tree(&g, &compute_coreness(&g), true).unwrap());
}

#[test]
fn tree_with_scale_is_collapsed() {
    let dir = TempDir::new().unwrap();
    let g = synth::comb_graph(8);
    let f = dir.path().join("comb.txt");
    g.write_edge_list(fs::File::create(&f).unwrap()).unwrap();
    let full = CoreTree::from_json(&stdout(&treebar(&["tree", s(&f)]))).unwrap();
    let coarse = CoreTree::from_json(&stdout(&treebar(&["tree", s(&f), "--scale", "9"]))).unwrap();
    assert_eq!(full.len(), 8 + 6);
    assert_eq!(coarse.len(), 1);
}

#[test]
fn coreness_uses_file_ids() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "k4p.txt", "10 20\n10 30\n10 40\n20 30\n20 40\n30 40\n10 99\n");
    let text = stdout(&treebar(&["coreness", s(&f)]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["10\t3", "20\t3", "30\t3", "40\t3", "99\t1", "# degeneracy = 3"]);
}

#[test]
fn strict_undirected_and_comment_prefix() {
    let dir = TempDir::new().unwrap();
    let one_way = write(&dir, "dir.txt", "0 1\n1 0\n1 2\n");
    assert!(treebar(&["analyze", s(&one_way)]).status.success());
    let o = treebar(&["analyze", "--strict-undirected", s(&one_way)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("asymmetric"));

    let f = write(&dir, "c.txt", "// header\n0 1\n1 2\n2 0\n");
    assert_eq!(treebar(&["analyze", s(&f)]).status.code(), Some(1));
    let o = treebar(&["analyze", "--comment-prefix", "//", s(&f)]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn output_and_layout_files() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "two.txt", TWO_TRIANGLES);
    let svg = dir.path().join("out.svg");
    let lay = dir.path().join("layout.json");
    let o = treebar(&["render", s(&f), "-o", s(&svg), "--dump-layout", s(&lay)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let layout: Value = serde_json::from_str(&fs::read_to_string(&lay).unwrap()).unwrap();
    assert_eq!(layout["squares"].as_array().unwrap().len(), 3);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"square\"").count(), 3);

    // Same input, same bytes.
    let again = dir.path().join("again.svg");
    treebar(&["render", s(&f), "-o", s(&again)]);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

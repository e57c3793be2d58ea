use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn halftsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halftsp")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn generated(dir: &TempDir, kind: &str, size: usize, seed: Option<u64>) -> PathBuf {
    let path = dir.path().join(format!("{kind}-{size}.json"));
    let size = size.to_string();
    let mut args = vec!["generate", "--kind", kind, "--size", &size, "-o", path.to_str().unwrap()];
    let seed = seed.map(|s| s.to_string());
    if let Some(s) = &seed {
        args.extend(["--seed", s.as_str()]);
    }
    let out = halftsp(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generated_instances_validate() {
    let dir = TempDir::new().unwrap();
    for (kind, size, seed) in [("doubled-cycle", 5, None), ("k4-chain", 2, Some(3)), ("nested-cycle", 2, Some(4))] {
        let path = generated(&dir, kind, size, seed);
        let out = halftsp(&["validate", p(&path)]);
        assert_eq!(code(&out), 0);
        let report = json(&out);
        assert_eq!(report["valid"], true);
        assert_eq!(report["min_cut"], 4);
    }
}

#[test]
fn doubled_c5_has_unit_costs_on_five_unit_edges() {
    let out = halftsp(&["generate", "--kind", "doubled-cycle", "--size", "5"]);
    assert_eq!(code(&out), 0);
    let inst = json(&out);
    assert_eq!(inst["n"], 5);
    let edges = inst["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 5);
    assert!(edges.iter().all(|e| e["x"] == 1.0 && e["cost"] == 1.0));
}

#[test]
fn corrupted_instance_exits_one_with_violations() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "k4-chain", 2, Some(1));
    let text = std::fs::read_to_string(&path).unwrap().replacen("\"x\": 0.5", "\"x\": 0.7", 1);
    std::fs::write(&path, text).unwrap();
    let out = halftsp(&["validate", p(&path)]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["valid"], false);
    let kinds: Vec<_> = report["violations"].as_array().unwrap().iter().map(|v| v["kind"].clone()).collect();
    assert!(kinds.contains(&Value::from("non_half_integral")), "{kinds:?}");
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&halftsp(&["validate", p(&junk)])), 2);
    assert_eq!(code(&halftsp(&["validate", "/nonexistent/instance.json"])), 2);
    assert_eq!(code(&halftsp(&["generate", "--kind", "hexagon", "--size", "3"])), 2);
    assert_eq!(code(&halftsp(&["generate", "--kind", "doubled-cycle", "--size", "2"])), 2);

    let inst = generated(&dir, "doubled-cycle", 4, None);
    // No silent nondeterminism: the seed is mandatory.
    assert_eq!(code(&halftsp(&["solve", p(&inst)])), 2);
    assert_eq!(code(&halftsp(&["solve", p(&inst), "--seed", "1", "--trials", "0"])), 2);
    assert_eq!(code(&halftsp(&["solve", p(&inst), "--seed", "1", "--epsilon", "-1"])), 2);
    assert_eq!(code(&halftsp(&["verify-lemmas", p(&inst), "--method", "mc"])), 2);
}

#[test]
fn hierarchy_of_doubled_c5_is_root_cycle_only() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "doubled-cycle", 5, None);
    let out = halftsp(&["hierarchy", p(&path)]);
    assert_eq!(code(&out), 0);
    let h = json(&out);
    let kinds: Vec<&str> = h["nodes"].as_array().unwrap().iter().map(|n| n["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "leaf").count(), 5);
    assert_eq!(kinds.iter().filter(|k| **k != "leaf").collect::<Vec<_>>(), [&"root_cycle"]);

    let dot = halftsp(&["hierarchy", p(&path), "--format", "dot"]);
    assert_eq!(code(&dot), 0);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn nested_cycle_hierarchy_nests_cycle_cuts() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "nested-cycle", 2, Some(9));
    let h = json(&halftsp(&["hierarchy", p(&path)]));
    let nodes = h["nodes"].as_array().unwrap();
    let nested = nodes.iter().any(|n| {
        n["kind"] == "cycle_cut" && n["parent"].as_u64().is_some_and(|par| nodes[par as usize]["kind"] == "cycle_cut")
    });
    assert!(nested);
}

#[test]
fn verify_lemmas_exact_on_two_k4_blocks_passes() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "k4-chain", 2, Some(11));
    let out = halftsp(&["verify-lemmas", p(&path), "--method", "exact"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["method"], "exact");
    let checks = report["report"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(report["expectations"]["pass"], true);
}

#[test]
fn verify_lemmas_mc_reports_estimates() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "k4-chain", 2, Some(11));
    let out = halftsp(&["verify-lemmas", p(&path), "--method", "mc", "--trials", "20000", "--seed", "5"]);
    let report = json(&out);
    assert_eq!(report["method"], "mc");
    assert_eq!(report["trials"], 20000);
    assert_eq!(report["report"]["exact"], false);
    assert!(report["expectations"].is_null());
}

#[test]
fn doubled_cycle_tours_are_optimal() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "doubled-cycle", 7, None);
    let out = halftsp(&["solve", p(&path), "--seed", "4", "--trials", "50"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    for r in report["records"].as_array().unwrap() {
        assert_eq!(r["ratio"], 1.0);
        assert_eq!(r["join_cost"], 0.0);
    }
    assert_eq!(report["summary"]["max_ratio"], 1.0);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "k4-chain", 3, Some(2));
    let base = ["solve", p(&path), "--seed", "8", "--trials", "40", "--certificate"];
    let j = json(&halftsp(&base));
    let c = halftsp(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(code(&c), 0);
    let mut rd = csv::Reader::from_reader(&c.stdout[..]);
    let headers = rd.headers().unwrap().clone();
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    let records = j["records"].as_array().unwrap();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(records) {
        for key in ["tree_cost", "join_cost", "tour_cost", "ratio", "odd_vertices", "trial"] {
            let i = headers.iter().position(|h| h == key).unwrap();
            let from_csv: f64 = row[i].parse().unwrap();
            assert_eq!(from_csv, rec[key].as_f64().unwrap(), "{key}");
        }
        let i = headers.iter().position(|h| h == "z_cost").unwrap();
        assert_eq!(row[i].parse::<f64>().unwrap(), rec["certificate"]["z_cost"].as_f64().unwrap());
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "nested-cycle", 2, Some(6));
    let run =
        |threads: &str| halftsp(&["solve", p(&path), "--seed", "77", "--trials", "64", "--threads", threads]).stdout;
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
    assert_eq!(one, run("3"));
}

#[test]
fn certificate_runs_report_no_failures() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "nested-cycle", 2, Some(6));
    let out = halftsp(&["solve", p(&path), "--seed", "3", "--trials", "100", "--certificate"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["summary"]["certificate_failures"], 0);
    for r in report["records"].as_array().unwrap() {
        let c = &r["certificate"];
        assert_eq!(c["y_feasible"], true);
        assert_eq!(c["z_feasible"], true);
        assert!(r["join_cost"].as_f64().unwrap() <= c["z_cost"].as_f64().unwrap() + 1e-9);
    }
}

#[test]
fn samples_are_json_lines_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "k4-chain", 2, Some(1));
    let a = halftsp(&["sample", p(&path), "--count", "5", "--seed", "12"]);
    assert_eq!(code(&a), 0);
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    for l in &lines {
        // Vertex 0 carries only ½ edges and is split, so the support has 9 vertices
        // and a 1-tree on it has 9 edges.
        assert_eq!(l["edges"].as_array().unwrap().len(), 9);
        assert_eq!(l["odd"].as_array().unwrap().len() % 2, 0);
    }
    assert_eq!(a.stdout, halftsp(&["sample", p(&path), "--count", "5", "--seed", "12"]).stdout);
}

#[test]
fn bench_covers_the_library() {
    let out = halftsp(&["bench", "--seed", "1", "--trials", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut rd = csv::Reader::from_reader(&out.stdout[..]);
    let names: Vec<String> = rd.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"k4-chain-2".to_string()));

    let text = halftsp(&["bench", "--seed", "1", "--trials", "2"]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8(text.stdout).unwrap().lines().next().unwrap().starts_with("instance"));
}

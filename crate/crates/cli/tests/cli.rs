use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsearch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn parse(v: &Value) -> f64 {
    if let Some(x) = v.as_f64() {
        return x;
    }
    let s = v.as_str().expect("number or string");
    match s.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scratch(name: &str, contents: &[u8]) -> String {
    let dir = std::env::temp_dir().join(format!("subsearch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn validate_accepts_f3() {
    let out = run(&["validate", &fixture("f3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["certification"]["passed"], true);
}

#[test]
fn validate_rejects_flat_g_with_witness() {
    let out = run(&["validate", &fixture("flat_g.json")]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["certification"]["passed"], false);
    assert!(!r["result"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_json_is_a_parse_error() {
    let path = scratch("broken.json", b"{\n  \"n\": 2,\n  \"f\": [\n");
    let out = run(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn solve_brute_on_f3() {
    let out = run(&["solve", "--method", "brute", &fixture("f3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["order"], serde_json::json!(["2", "3", "1"]));
    assert_eq!(r["result"]["cost"], "3/2");
}

#[test]
fn sidney_solution_is_within_twice_its_bound() {
    let out = run(&["solve", &fixture("f3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let cost = parse(&r["result"]["cost"]);
    let lower = parse(&r["certification"]["lower_bound"]);
    assert!(lower <= cost && cost <= 2.0 * lower);
}

#[test]
fn decompose_f3_reports_not_decomposable() {
    let out = run(&["decompose", &fixture("f3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["decomposable"], false);
}

#[test]
fn exact_spd_on_f3_exits_4() {
    let out = run(&["solve", "--method", "spd", &fixture("f3.json")]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn game_on_path_tree() {
    let out = run(&["game", &fixture("path_tree.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["value"], "2");
    assert_eq!(r["certification"]["searcher_max_cost"], "2");
    assert_eq!(r["certification"]["hider_min_cost"], "2");
    assert_eq!(r["certification"]["base_polyhedron"]["holds"], true);
    assert_eq!(r["certification"]["equalized"], true);
}

#[test]
fn modular_game_methods_agree() {
    for method in ["spd", "modular", "lp"] {
        let out = run(&["game", "--method", method, &fixture("modular12.json")]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        assert_eq!(report(&out)["result"]["value"], "7/3", "{method}");
    }
    let out = run(&["game", "--method", "oracle", &fixture("modular12.json")]);
    let r = report(&out);
    let v = 7.0 / 3.0;
    assert!(parse(&r["certification"]["lower"]) <= v + 1e-9);
    assert!(parse(&r["certification"]["upper"]) >= v - 1e-9);
    assert!((parse(&r["result"]["value"]) - v).abs() <= 1e-3);
}

#[test]
fn capacity_exits_3() {
    let gen = run(&["gen", "modular", "8", "1"]);
    assert_eq!(gen.status.code(), Some(0));
    let path = scratch("modular8.json", &gen.stdout);
    let out = run(&["game", "--method", "oracle", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains('7'));
}

#[test]
fn sched_chain_is_feasible() {
    let out = run(&["sched", "--method", "brute", &fixture("chain_sched.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["certification"]["precedence_feasible"], true);
    let order: Vec<&str> = r["result"]["order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let a = order.iter().position(|&j| j == "a").unwrap();
    let b = order.iter().position(|&j| j == "b").unwrap();
    assert!(a < b);
}

#[test]
fn sched_log_reports_noprec_ratio() {
    let out = run(&["sched", &fixture("log_noprec.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"]["mode"], "float");
    let ratio = r["certification"]["noprec_ratio"]["ratio"].as_f64().unwrap();
    assert!((ratio - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn reports_are_deterministic() {
    let args = ["game", "--json", &fixture("modular12.json")];
    let strip = |out: Output| {
        let mut v = report(&out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(run(&args)), strip(run(&args)));
    let solve = ["solve", "--json", &fixture("f3.json")];
    assert_eq!(strip(run(&solve)), strip(run(&solve)));
}

#[test]
fn compact_output_is_one_line() {
    let out = run(&["density", "--json", &fixture("f3.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1);
}

#[test]
fn generated_instances_validate_and_are_deterministic() {
    for (family, n, seed) in [
        ("tree", "5", "7"),
        ("kuniform", "5", "1"),
        ("coverage", "6", "1"),
        ("gsp", "6", "2"),
        ("concave", "4", "3"),
    ] {
        let a = run(&["gen", family, n, seed]);
        let b = run(&["gen", family, n, seed]);
        assert_eq!(a.status.code(), Some(0), "{family}");
        assert_eq!(a.stdout, b.stdout, "{family}");
        let path = scratch(&format!("gen-{family}.json"), &a.stdout);
        let out = run(&["validate", &path]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{family}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn gen_schedule_emits_a_dag_file() {
    let gen = run(&["gen", "schedule", "5", "--seed", "4"]);
    assert_eq!(gen.status.code(), Some(0));
    let path = scratch("sched5.json", &gen.stdout);
    let out = run(&["sched", "--method", "spd", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["certification"]["precedence_feasible"], true);
}

#[test]
fn unknown_family_is_rejected() {
    let out = run(&["gen", "hypercube", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

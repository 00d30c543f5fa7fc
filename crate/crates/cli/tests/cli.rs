use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ordturan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordturan")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = ordturan(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// `H_k` in the ordered text format.
fn hk_text(k: usize) -> String {
    let edges: Vec<(usize, usize)> = (1..=k).flat_map(|x| (x..=k).map(move |y| (2 * (x - 1), 2 * (y - 1) + 1))).collect();
    let mut s = format!("{} {}\n", 2 * k, edges.len());
    for (u, v) in edges {
        s += &format!("{u} {v}\n");
    }
    s
}

#[test]
fn classify_h4() {
    let dir = tempfile::tempdir().unwrap();
    let h4 = write(dir.path(), "h4.og", &hk_text(4));
    let v = json(&["classify", "--pattern", &h4]);
    assert_eq!(v["classification"], "ZERO");
    assert_eq!(v["chi_interval"], 5);
    assert_eq!(v["pi"], 0.75);
    assert_eq!(v["has_monotone_p3"], false);
    assert_eq!(v["hk_embedding"].as_array().unwrap().len(), 8);

    let p3 = write(dir.path(), "p3.og", "3 2\n0 1\n1 2\n");
    let v = json(&["classify", "--pattern", &p3]);
    assert_eq!(v["classification"], "AT_LEAST_QUARTER");
    assert_eq!(v["hk_embedding"], Value::Null);
    let empty = write(dir.path(), "e.og", "3 0\n");
    assert_eq!(json(&["classify", "--pattern", &empty])["pi"], Value::Null);
}

#[test]
fn solve_p3_in_k4() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.og", "3 2\n0 1\n1 2\n");
    let k4 = write(dir.path(), "k4.og", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let v = json(&["solve", "--pattern", &p3, "--host", &k4]);
    assert_eq!(v["best_edges"], 4);
    assert_eq!(v["total"], 6);
    assert_eq!(v["exact"], true);
    let v = json(&["solve", "--pattern", &p3, "--host", &k4, "--method", "exact"]);
    assert_eq!(v["best_edges"], 4);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ordturan(&["classify", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(ordturan(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ordturan(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.og", "3 2\n0 1\n2 x\n");
    let out = ordturan(&["classify", "--pattern", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = ordturan(&["gen-host", "--kind", "r", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_checks_exit_1() {
    let out = ordturan(&["appendix-check", "--lemma", "a2", "--params", r#"{"n":4096,"epsilon":0.1,"samples":50}"#]);
    assert_eq!(out.status.code(), Some(1));
    let out = ordturan(&["appendix-check", "--lemma", "a1", "--params", r#"{"alpha":0.5,"epsilon":0.1,"k":3,"eta":0.016666666666666666,"n":2000}"#]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_dir_and_manifest_replay() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.og", "3 2\n0 1\n1 2\n");
    let run1 = dir.path().join("run1");
    let out = ordturan(&["tile-sample", "--pattern", &p3, "--d", "10", "--w", "5", "--n-samples", "2000", "--seed", "11", "--out-dir", run1.to_str().unwrap()]);
    assert!(out.status.success());
    for f in ["tile-sample.json", "level_histogram.csv", "manifest.json"] {
        assert!(run1.join(f).exists(), "{f}");
    }
    let manifest: Value = serde_json::from_str(&fs::read_to_string(run1.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "tile-sample");
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["input_digests"].as_object().unwrap().len(), 1);

    let run2 = dir.path().join("run2");
    let mut argv: Vec<String> = manifest["argv"].as_array().unwrap().iter().skip(1).map(|a| a.as_str().unwrap().to_string()).collect();
    let at = argv.iter().position(|a| a == "--out-dir").unwrap();
    argv[at + 1] = run2.to_str().unwrap().to_string();
    let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
    assert!(ordturan(&argv).status.success());
    for f in ["tile-sample.json", "level_histogram.csv"] {
        assert_eq!(fs::read(run1.join(f)).unwrap(), fs::read(run2.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn workers_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.og", "3 2\n0 1\n1 2\n");
    let base = ["tile-sample", "--pattern", &p3, "--d", "9", "--w", "4", "--n-samples", "5000", "--seed", "2", "--json"];
    let one = ordturan(&[&base[..], &["--workers", "1"]].concat());
    let four = ordturan(&[&base[..], &["--workers", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn report_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "sweep.toml",
        r#"
[[experiment]]
name = "quarter on R"
solver = "quarter"
host = "r"
d = [2, 3, 4]
m = [2]
seeds = [1]

[[experiment]]
name = "exact on K_n"
solver = "exact"
host = "complete"
n = [3, 4, 5, 6]

[[experiment]]
name = "richness"
solver = "richness"
host = "r"
d = [3]
m = [3]
seeds = [4]
"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert!(ordturan(&["report", "--spec", &spec, "--out-dir", d.to_str().unwrap()]).status.success());
    }
    let csv = fs::read_to_string(a.join("results.csv")).unwrap();
    assert_eq!(csv, fs::read_to_string(b.join("results.csv")).unwrap());
    assert!(a.join("timings.csv").exists());
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows[..3] {
        assert!(r.split(',').nth(12).unwrap().parse::<f64>().unwrap() >= 0.25);
    }
    let best: Vec<&str> = rows[3..7].iter().map(|r| r.split(',').nth(11).unwrap()).collect();
    assert_eq!(best, ["2", "4", "6", "9"]);

    let empty = write(dir.path(), "empty.toml", "");
    let out = ordturan(&["report", "--spec", &empty]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);
}

#[test]
fn gen_host_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.rmd");
    let v = json(&["gen-host", "--kind", "r", "--d", "4", "--m", "8", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(v["vertices"], 128);
    let again = dir.path().join("r2.rmd");
    json(&["gen-host", "--kind", "r", "--d", "4", "--m", "8", "--seed", "3", "--output", again.to_str().unwrap()]);
    assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
    let r = json(&["analyze-richness", "--host", path.to_str().unwrap()]);
    assert!(r["blocked_average"].as_f64().unwrap() > 0.0);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use leastgrad::geometry::GeometryDoc;
use leastgrad::{field, table};

fn leastgrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leastgrad"))
        .args(args)
        .env_remove("LEASTGRAD_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().expect("temp dir")
}

fn construct(dir: &Path, depth: usize, name: &str) -> PathBuf {
    let out = dir.join(name);
    let run = leastgrad(&["construct", "--depth", &depth.to_string(), "--out", path_arg(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    out
}

#[test]
fn construct_writes_loadable_geometry() {
    let dir = tmp();
    let one = GeometryDoc::load(&construct(dir.path(), 1, "b1.json")).unwrap();
    assert_eq!(one.components.len(), 2);
    let path = construct(dir.path(), 2, "b2.json");
    let two = GeometryDoc::load(&path).unwrap();
    assert_eq!(two.components.len(), 4);
    for c in &two.components {
        // W, T_0, T_1, Bot
        assert_eq!(c.polygons.len() + 2, 4);
    }
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(two.to_json().as_bytes(), bytes.as_slice());
    let again = std::fs::read(construct(dir.path(), 2, "b2_again.json")).unwrap();
    assert_eq!(bytes, again);
}

#[test]
fn construct_rejects_depth_zero_before_writing() {
    let dir = tmp();
    let out = dir.path().join("b0.json");
    let run = leastgrad(&["construct", "--depth", "0", "--out", path_arg(&out)]);
    assert_eq!(code(&run), 2);
    assert!(!out.exists());
}

#[test]
fn io_failures_exit_three_with_the_path() {
    let run = leastgrad(&["construct", "--depth", "1", "--out", "/nonexistent-dir/b.json"]);
    assert_eq!(code(&run), 3);
    assert!(String::from_utf8_lossy(&run.stderr).contains("/nonexistent-dir/b.json"));
    let run = leastgrad(&["construct", "--config", "/nonexistent-dir/run.toml"]);
    assert_eq!(code(&run), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&leastgrad(&["verify", "--suite", "lemma99"])), 2);
    assert_eq!(code(&leastgrad(&["render", "--depth", "9"])), 2);
    assert_eq!(code(&leastgrad(&["solve", "--resolution", "32"])), 2);
    assert_eq!(code(&leastgrad(&["construct", "--iters", "5"])), 2);
    assert_eq!(code(&leastgrad(&["frobnicate"])), 2);
    let dir = tmp();
    let out = dir.path().join("s.csv");
    let run = Command::new(env!("CARGO_BIN_EXE_leastgrad"))
        .args(["solve", "--resolution", "64", "--out", path_arg(&out)])
        .env("LEASTGRAD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&run), 2);
    assert!(!out.exists());
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tmp();
    let cfg = dir.path().join("run.toml");
    let from_file = dir.path().join("file.json");
    std::fs::write(&cfg, format!("depth = 3\nout = {:?}\n", path_arg(&from_file))).unwrap();
    assert_eq!(code(&leastgrad(&["construct", "--config", path_arg(&cfg)])), 0);
    assert_eq!(GeometryDoc::load(&from_file).unwrap().depth, 3);
    let from_flag = dir.path().join("flag.json");
    let run = leastgrad(&[
        "construct",
        "--config",
        path_arg(&cfg),
        "--depth",
        "1",
        "--out",
        path_arg(&from_flag),
    ]);
    assert_eq!(code(&run), 0);
    assert_eq!(GeometryDoc::load(&from_flag).unwrap().depth, 1);
    std::fs::write(&cfg, "depht = 3\n").unwrap();
    assert_eq!(code(&leastgrad(&["construct", "--config", path_arg(&cfg)])), 2);
}

#[test]
fn render_toggles_labels_only() {
    let dir = tmp();
    let plain = dir.path().join("plain.svg");
    let labelled = dir.path().join("labelled.svg");
    assert_eq!(
        code(&leastgrad(&["render", "--depth", "1", "--out", path_arg(&plain)])),
        0
    );
    assert_eq!(
        code(&leastgrad(&[
            "render",
            "--depth",
            "1",
            "--labels",
            "--out",
            path_arg(&labelled)
        ])),
        0
    );
    let plain = std::fs::read_to_string(plain).unwrap();
    let labelled = std::fs::read_to_string(labelled).unwrap();
    assert!(!plain.contains("<text"));
    assert_eq!(labelled.matches("<text").count(), 2 * 3);
    assert_eq!(plain.matches("<g id=\"B-").count(), 2);
    assert_eq!(
        plain.matches("<path").count() + plain.matches("<polygon").count(),
        labelled.matches("<path").count() + labelled.matches("<polygon").count()
    );
}

#[test]
fn verify_reports_every_check() {
    let dir = tmp();
    let out = dir.path().join("report.json");
    let run = leastgrad(&["verify", "--suite", "lemma33", "--out", path_arg(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["failed"], 0);
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    // two verdicts for each of 1000 random pairs and 3 closed-form pairs
    assert_eq!(checks.len(), 2006);
    for c in checks {
        assert_eq!(c["inputs_hash"].as_str().unwrap().len(), 64);
        assert!(c["lhs"].is_number() && c["rhs"].is_number() && c["margin"].is_number());
    }
    let stdout = leastgrad(&["verify", "--suite", "cantor"]);
    assert_eq!(code(&stdout), 0);
    let report: serde_json::Value = serde_json::from_slice(&stdout.stdout).unwrap();
    assert_eq!(report["suites"][0]["suite"], "cantor");
}

#[test]
fn smallest_experiment_is_fast_and_reproducible() {
    let dir = tmp();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let start = Instant::now();
    let run = leastgrad(&[
        "experiment",
        "--depth",
        "0",
        "--resolution",
        "64",
        "--out",
        path_arg(&a),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    assert!(start.elapsed().as_secs() < 10);
    let run = leastgrad(&[
        "experiment",
        "--depth",
        "0",
        "--resolution",
        "64",
        "--out",
        path_arg(&b),
    ]);
    assert_eq!(code(&run), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (provenance, rows) = table::load(&a).unwrap();
    assert!(provenance.contains("experiment --depth 0 --resolution 64"));
    assert_eq!(rows.len(), 1);
    assert!((rows[0].energy - 2.0 * 0.5f64.sin()).abs() < 0.05);
    let (header, field) = field::load(&dir.path().join("a_n0.json")).unwrap();
    assert_eq!(header.side * header.side, field.values.len());
    assert_eq!(
        std::fs::read(dir.path().join("a_n0.bin")).unwrap(),
        std::fs::read(dir.path().join("b_n0.bin")).unwrap()
    );
    let copy = dir.path().join("copy.bin");
    field::save(&copy, &field, 0, &header.provenance).unwrap();
    assert_eq!(
        std::fs::read(&copy).unwrap(),
        std::fs::read(dir.path().join("a_n0.bin")).unwrap()
    );
    let (_, back) = field::load(&dir.path().join("copy.json")).unwrap();
    assert_eq!(back, field);
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tmp();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}.csv"));
        let run = Command::new(env!("CARGO_BIN_EXE_leastgrad"))
            .args([
                "experiment",
                "--depth",
                "2",
                "--resolution",
                "64",
                "--iters",
                "400",
                "--out",
                path_arg(&out),
            ])
            .env("LEASTGRAD_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&run), 0);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn solve_writes_one_row_and_its_field() {
    let dir = tmp();
    let out = dir.path().join("s.csv");
    let run = leastgrad(&[
        "solve",
        "--depth",
        "1",
        "--resolution",
        "64",
        "--coupling",
        "band",
        "--out",
        path_arg(&out),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let (provenance, rows) = table::load(&out).unwrap();
    assert!(provenance.contains("--coupling band"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].n, 1);
    assert!(dir.path().join("s_field.bin").exists());
    let (header, _) = field::load(&dir.path().join("s_field.json")).unwrap();
    assert_eq!(header.depth, 1);
}

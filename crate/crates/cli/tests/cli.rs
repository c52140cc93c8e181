use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-mori"))
        .args(args)
        .current_dir(fixture(""))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    (code(&o), serde_json::from_slice(&o.stdout).expect("report is JSON"))
}

#[test]
fn validate_exit_codes() {
    let o = run(&["validate", "p2.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "valid\n");

    let o = run(&["validate", "proportional_rays.json"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("proportional rays 0 and 2"));

    assert_eq!(code(&run(&["validate", "truncated.json"])), 1);
    assert_eq!(code(&run(&["validate", "missing.json"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
}

#[test]
fn info_reports_structure() {
    let o = run(&["info", "f1.json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("smooth: true, complete: true"));
    assert!(text.contains("primitive collections: {0,1} {2,3}"));
    let text = stdout(&run(&["info", "p121.json"]));
    assert!(text.contains("weighted projective space P(1,2,1)"));
}

#[test]
fn mori_on_f1() {
    let o = run(&["mori", "f1_to_point.json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("contracted walls: 4"));
    assert!(text.contains("extremal rays: 2"));
    assert!(text.contains("ray 0: r2 + r3 = 0  [Fano]"));
    assert!(text.contains("ray 1: r0 + r1 = r3  [divisorial]"));
    assert!(text.contains("not extremal: class (1,1,1,0)"));
}

#[test]
fn mori_small_and_identity() {
    let text = stdout(&run(&["mori", "atiyah_flop.json"]));
    assert!(text.contains("small, flop"), "{text}");
    let text = stdout(&run(&["mori", "f1_identity.json"]));
    assert!(text.contains("extremal rays: 0"));
}

#[test]
fn properness_and_compatibility() {
    let o = run(&["mori", "p1xp1_to_p1.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--assume-proper"));
    assert_eq!(code(&run(&["--assume-proper", "mori", "p1xp1_to_p1.json"])), 0);

    let o = run(&["mori", "p2_to_p1.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("morphism incompatible"));
}

#[test]
fn contract_reports_kind_and_dimensions() {
    let text = stdout(&run(&["contract", "f1_to_point.json", "--ray", "1"]));
    assert!(text.contains("codim A=1, dim B=0"), "{text}");
    let text = stdout(&run(&["contract", "p2_to_point.json", "--ray", "0"]));
    assert!(text.contains("fiber P(1,1,1)"));
    let text = stdout(&run(&["contract", "atiyah_flop.json", "--ray", "r0"]));
    assert!(text.contains("codim A=2, dim B=0"), "{text}");
    assert_eq!(code(&run(&["contract", "f1_to_point.json", "--ray", "5"])), 1);
}

#[test]
fn flip_trichotomy() {
    let text = stdout(&run(&["flip", "atiyah_flop.json", "--ray", "0"]));
    assert!(text.contains("flop"));
    let text = stdout(&run(&["flip", "weighted_flip.json", "--ray", "0"]));
    assert!(text.contains("anti-flip (degree difference -1)"));
    assert!(text.contains("reversed relation: 2*r0 + r1 = r2 + r3"));
    let o = run(&["flip", "f1_to_point.json", "--ray", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not a small contraction"));
}

#[test]
fn positivity_queries() {
    let o = run(&["positivity", "f1_to_point.json", "--divisor", "f1_anticanonical.json", "--twist-free", "r0", "r1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("is not f-free; witness: ray 1"));
    assert!(text.contains("direct check agrees"));

    let o = run(&["positivity", "p2_to_point.json", "--divisor", "p2_o2.json", "--twist-ample", "r0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("agrees"));

    let text = stdout(&run(&["positivity", "p121_to_point.json", "--divisor", "p121_anticanonical.json", "--check", "nef"]));
    assert!(text.contains("f-ample"));

    let text = stdout(&run(&["positivity", "f1_to_point.json", "--divisor", "f1_anticanonical.json", "--twist-bound", "1"]));
    assert_eq!(text.matches("f-free").count(), 4);
    assert!(text.contains("L(-D_0): min L(-D).C_R = 0"));

    let o = run(&["positivity", "p121_to_point.json", "--divisor", "p121_anticanonical.json", "--twist-ample", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn mmp_runs_to_a_fiber_space() {
    let text = stdout(&run(&["mmp", "f1_to_point.json", "--ray-choice", "1,0"]));
    assert!(text.contains("step 0: ray 1 (divisorial)"));
    assert!(text.contains("Mori fiber space over point"));
    assert!(stdout(&run(&["mmp", "atiyah_flop.json", "--ray-choice", "0"])).contains("flop"));
    assert_eq!(code(&run(&["mmp", "f1_to_point.json", "--ray-choice", "7"])), 1);
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["--json", "mori", "f1_to_point.json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["extremal_rays"].as_array().unwrap().len(), 2);
    let inputs = v["inputs"].as_object().unwrap();
    assert_eq!(inputs.len(), 1);
    assert_eq!(inputs.values().next().unwrap().as_str().unwrap().len(), 64);
}

#[test]
fn json_errors_go_to_diagnostics() {
    let (c, v) = json(&["mori", "p2_to_p1.json"]);
    assert_eq!(c, 2);
    let diags = v["diagnostics"].as_array().unwrap();
    assert!(diags.iter().any(|d| d.as_str().unwrap().starts_with("error: morphism incompatible")));
}

#[test]
fn written_fans_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = run(&["contract", "f1_to_point.json", "--ray", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["validate", out.to_str().unwrap()])), 0);
    assert!(dir.path().join("w.quotient.json").exists());

    let out2 = dir.path().join("p2.json");
    let args = ["contract", "f1_to_point.json", "--ray", "1", "--out", out2.to_str().unwrap()];
    run(&args);
    let first = std::fs::read(&out2).unwrap();
    run(&args);
    assert_eq!(std::fs::read(&out2).unwrap(), first);
    let (_, written) = json(&["info", out2.to_str().unwrap()]);
    let (_, expected) = json(&["info", "p2.json"]);
    assert_eq!(written["result"]["fan"], expected["result"]["fan"]);

    let plus = dir.path().join("plus.json");
    run(&["flip", "atiyah_flop.json", "--ray", "0", "--out", plus.to_str().unwrap()]);
    assert_eq!(code(&run(&["validate", plus.to_str().unwrap()])), 0);
}

#[test]
fn mmp_writes_each_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["mmp", "f1_to_point.json", "--ray-choice", "1,0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(out.join("step-0.json").exists());
    assert!(out.join("step-1.json").exists());
    assert_eq!(code(&run(&["validate", out.join("step-0.json").to_str().unwrap()])), 0);
}

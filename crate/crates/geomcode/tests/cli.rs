use std::path::Path;
use std::process::{Command, Output};

use geomcode::alist::from_alist;
use geomcode::manifest::{manifest_path, sha256_hex};
use geomcode_core::{build_hyperbolic_structure, FieldSpec};

fn geomcode(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geomcode"))
        .current_dir(dir)
        .args(args)
        .env_remove("GEOMCODE_THREADS")
        .output()
        .expect("binary runs")
}

fn outcome(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn manifest_digest_matches(dir: &Path, name: &str) {
    let m: serde_json::Value = serde_json::from_str(&read(dir, manifest_path(Path::new(name)).to_str().unwrap())).unwrap();
    let bytes = std::fs::read(dir.join(name)).unwrap();
    assert_eq!(m["outputs"][0]["path"], name);
    assert_eq!(m["outputs"][0]["sha256"], sha256_hex(&bytes));
}

#[test]
fn construct_hyperbolic_writes_alist() {
    let dir = tempfile::tempdir().unwrap();
    let o = geomcode(dir.path(), &["construct", "--family", "hyperbolic", "--field", "3", "--out", "H.alist"]);
    assert!(o.status.success());
    assert_eq!(outcome(&o)["ok"], true);
    let h = from_alist(&read(dir.path(), "H.alist")).unwrap();
    assert_eq!((h.rows(), h.cols()), (81, 648));
    assert!(h.col_weights().iter().all(|&w| w == 3));
    let built = build_hyperbolic_structure(&FieldSpec::prime(3).unwrap()).unwrap();
    assert_eq!(h, built.matrix);
    assert!(read(dir.path(), "H.alist").starts_with("648 81\n3 24\n"));
    manifest_digest_matches(dir.path(), "H.alist");
}

#[test]
fn construct_conic_and_even_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = geomcode(dir.path(), &["construct", "--family", "conic", "--field", "5", "--out", "C.alist"]);
    assert!(o.status.success());
    let h = from_alist(&read(dir.path(), "C.alist")).unwrap();
    assert_eq!((h.rows(), h.cols()), (16, 16));
    let o = geomcode(dir.path(), &["construct", "--family", "conic", "--field", "4", "--out", "C4.alist"]);
    assert!(!o.status.success());
    let j = outcome(&o);
    assert_eq!(j["ok"], false);
    assert!(j["failures"][0].as_str().unwrap().contains("characteristic 2"));
    assert!(!dir.path().join("C4.alist").exists());
}

#[test]
fn construct_extension_field_with_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let o = geomcode(
        dir.path(),
        &["construct", "--family", "conic", "--field", "3^2", "--modulus", "2,2,1", "--out", "C9.alist"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let h = from_alist(&read(dir.path(), "C9.alist")).unwrap();
    assert_eq!((h.rows(), h.cols()), (64, 64));
    assert!(h.col_weights().iter().all(|&w| w == 7));
}

#[test]
fn analyze_hyperbolic_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = geomcode(dir.path(), &["analyze", "--family", "hyperbolic", "--field", "3", "--out", "r.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let r: serde_json::Value = serde_json::from_str(&read(dir.path(), "r.json")).unwrap();
    assert_eq!(r["srg"], serde_json::json!({"v": 81, "k": 48, "lambda": 27, "mu": 30}));
    assert_eq!(r["rank2_m"], 81);
    assert_eq!(r["rank2_mmt"], 48);
    assert_eq!(r["girth"], 6);
    assert_eq!(r["six_cycles"]["enumerated"], 16848);
    assert_eq!(r["six_cycles"]["formula"], 16848);
    assert_eq!(r["axioms"]["alphas"], serde_json::json!([1, 2, 3]));
    assert_eq!(r["code"]["dimension"], 567);
    assert_eq!(r["brouwer"]["agrees"], true);
    manifest_digest_matches(dir.path(), "r.json");
}

#[test]
fn analyze_conic_cases() {
    let dir = tempfile::tempdir().unwrap();
    let o = geomcode(dir.path(), &["analyze", "--family", "conic", "--field", "5", "--out", "c5.json"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&read(dir.path(), "c5.json")).unwrap();
    assert_eq!(r["rank2_m"], 16);
    assert_eq!(r["code"]["dimension"], 0);
    assert_eq!(r["code"]["simulable"], false);

    let o = geomcode(dir.path(), &["analyze", "--family", "conic", "--field", "3", "--out", "c3.json"]);
    assert!(!o.status.success());
    let r: serde_json::Value = serde_json::from_str(&read(dir.path(), "c3.json")).unwrap();
    assert!(r["notices"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().starts_with("degenerate")));
    assert_eq!(outcome(&o)["ok"], false);
}

#[test]
fn analyze_from_alist_file() {
    let dir = tempfile::tempdir().unwrap();
    geomcode(dir.path(), &["construct", "--family", "conic", "--field", "7", "--out", "C7.alist"]);
    let o = geomcode(dir.path(), &["analyze", "--input", "C7.alist", "--out", "c7.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let r: serde_json::Value = serde_json::from_str(&read(dir.path(), "c7.json")).unwrap();
    assert_eq!(r["family"], "external");
    assert_eq!(r["srg"], serde_json::json!({"v": 36, "k": 20, "lambda": 10, "mu": 12}));
    assert_eq!(r["six_cycles"]["enumerated"], 840);
}

#[test]
fn simulate_refuses_trivial_code() {
    let dir = tempfile::tempdir().unwrap();
    geomcode(dir.path(), &["construct", "--family", "conic", "--field", "5", "--out", "C.alist"]);
    let o = geomcode(dir.path(), &["simulate", "--input", "C.alist", "--ebno", "1:1:2", "--out", "c.csv"]);
    assert!(!o.status.success());
    let j = outcome(&o);
    assert!(j["failures"][0].as_str().unwrap().contains("dimension 0"));
    assert!(!dir.path().join("c.csv").exists());
}

#[test]
fn simulate_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    geomcode(dir.path(), &["construct", "--family", "hyperbolic", "--field", "3", "--out", "H.alist"]);
    let args = |out: &'static str| {
        [
            "simulate",
            "--input",
            "H.alist",
            "--ebno",
            "1:0.5:5",
            "--max-iters",
            "100",
            "--min-frame-errors",
            "1",
            "--max-frames",
            "64",
            "--seed",
            "9",
            "--out",
            out,
        ]
    };
    let o = geomcode(dir.path(), &args("a.csv"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    geomcode(dir.path(), &args("b.csv"));
    let a = read(dir.path(), "a.csv");
    assert_eq!(a, read(dir.path(), "b.csv"));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "ebn0_db,frames,bit_errors,frame_errors,ber,fer,mean_iters,ci_low,ci_high");
    assert!(lines[1].starts_with("1,"));
    assert!(lines[9].starts_with("5,"));
    manifest_digest_matches(dir.path(), "a.csv");
    let threaded = Command::new(env!("CARGO_BIN_EXE_geomcode"))
        .current_dir(dir.path())
        .args(args("c.csv"))
        .env("GEOMCODE_THREADS", "3")
        .output()
        .unwrap();
    assert!(threaded.status.success());
    assert_eq!(a, read(dir.path(), "c.csv"));
}

#[test]
fn random_code_command() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        ["random-code", "--m", "81", "--n", "648", "--w-col", "3", "--w-row", "24", "--seed", "7", "--out", out]
    };
    let o = geomcode(dir.path(), &args("R1.alist"));
    assert!(o.status.success());
    geomcode(dir.path(), &args("R2.alist"));
    assert_eq!(read(dir.path(), "R1.alist"), read(dir.path(), "R2.alist"));
    let h = from_alist(&read(dir.path(), "R1.alist")).unwrap();
    assert!(h.col_weights().iter().all(|&w| w == 3));
    assert!(h.row_weights().iter().all(|&w| w == 24));
    manifest_digest_matches(dir.path(), "R1.alist");
    let bad = ["random-code", "--m", "81", "--n", "648", "--w-col", "3", "--w-row", "25", "--out", "R3.alist"];
    let o = geomcode(dir.path(), &bad);
    assert!(!o.status.success());
    assert_eq!(outcome(&o)["ok"], false);
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    let o = geomcode(dir.path(), &["construct", "--field", "3", "--out", "x.alist"]);
    assert!(!o.status.success());
    assert!(outcome(&o)["failures"][0].as_str().unwrap().contains("--family"));
    let o = geomcode(dir.path(), &["simulate", "--input", "missing.alist", "--ebno", "1", "--out", "x.csv"]);
    assert!(!o.status.success());
}

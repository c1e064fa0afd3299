use std::process::{Command, Output};

use serde_json::Value;

fn semilin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semilin")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_class_and_witnesses() {
    let out = semilin(&["classify", "--field", "GF(5)", "--dim", "2", "--points", "1,0;0,1;1,1;1,4", "--projective"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["class"], "NotFullyExtendable");
    assert!(v["witnesses"]["failing_transposition"].is_array());

    let out = semilin(&["classify", "--field", "GF(2)", "--dim", "3", "--points", "1,0,0;0,1,0;0,0,1"]);
    assert_eq!(json(&out)["class"], "Independent");
}

#[test]
fn search_is_thread_independent_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let path_s = path.to_str().unwrap();
    let one = semilin(&[
        "--no-timing",
        "--threads",
        "1",
        "--out",
        path_s,
        "search",
        "--domain",
        "GF(2)^2",
        "--codomain",
        "GF(2)^2",
    ]);
    let many = semilin(&["--no-timing", "--threads", "3", "search", "--domain", "GF(2)^2", "--codomain", "GF(2)^2"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(std::fs::read(&path).unwrap(), one.stdout);
    let v = json(&one);
    assert_eq!(v["nontrivial_gl_dim_le_n"], 6);
    assert_eq!(v["trivial_gl"], 16);
    assert_eq!(v["exploratory"], true);

    let sampled: Vec<Output> = ["1", "2"]
        .iter()
        .map(|t| {
            semilin(&[
                "--no-timing",
                "--threads",
                t,
                "--seed",
                "9",
                "search",
                "--domain",
                "GF(2)^3",
                "--codomain",
                "GF(2)^3",
                "--samples",
                "5000",
            ])
        })
        .collect();
    assert_eq!(sampled[0].stdout, sampled[1].stdout);
}

#[test]
fn verify_is_byte_identical_and_signals_failure_by_exit_code() {
    let a = semilin(&["--no-timing", "verify", "--suite", "ftpg-roundtrip", "--samples", "20"]);
    let b = semilin(&["--no-timing", "verify", "--suite", "ftpg-roundtrip", "--samples", "20"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);

    let guarded = semilin(&["verify", "--suite", "linear-subsets", "--max-size", "40"]);
    assert_eq!(guarded.status.code(), Some(2));
    let unknown = semilin(&["verify", "--suite", "nonsense"]);
    assert!(!unknown.status.success());
}

#[test]
fn check_and_reconstruct_read_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("g.json");
    std::fs::write(
        &table,
        r#"{"domain_field":"GF(2)","domain_dim":2,"codomain_field":"GF(2)","codomain_dim":2,"table":[[0,0],[0,1],[1,0],[1,1]]}"#,
    )
    .unwrap();
    let out = semilin(&["check-gl", "--mapping", table.to_str().unwrap(), "--exhaustive"]);
    let v = json(&out);
    assert_eq!(v["is_gl_mapping"], true);
    assert_eq!(v["mode"], "exhaustive");

    let points = dir.path().join("f.json");
    let identity: Vec<usize> = (0..7).collect();
    std::fs::write(
        &points,
        serde_json::json!({"domain_field":"GF(2)","domain_dim":3,"codomain_field":"GF(2)","codomain_dim":3,"table":identity})
            .to_string(),
    )
    .unwrap();
    let v = json(&semilin(&["reconstruct", "--map", points.to_str().unwrap()]));
    assert_eq!(v["certificate"], "ok");
    let v = json(&semilin(&["check-pgl", "--map", points.to_str().unwrap()]));
    assert_eq!(v["is_pgl_mapping"], true);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"domain_field":"GF(6)"}"#).unwrap();
    let out = semilin(&["check-gl", "--mapping", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

//! End-to-end tests of the `lhv` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lhv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("lhv-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn tight_compute_verify_pipeline() {
    let model_path = temp_path("h1-half.json");
    let out = lhv(&[
        "tight",
        "--family",
        "h1",
        "--p",
        "0.5",
        "-o",
        model_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    let out = lhv(&["compute", "-i", model_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("C_opt = 3.000000000000"), "{text}");
    assert!(text.contains("M     = 1.000000000000"), "{text}");
    assert!(text.contains("H     = 1"), "{text}");
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("ok compute"), "{last}");

    let out = lhv(&["verify", "-i", model_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().last().unwrap().starts_with("ok verify"));

    let out = lhv(&[
        "compute",
        "-i",
        model_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["h_declared"], 1);
    assert!((parsed["c_opt"].as_f64().unwrap() - 3.0).abs() <= 1e-12);

    std::fs::remove_file(model_path).ok();
}

#[test]
fn verify_certifies_every_cardinality_branch() {
    for (family, p, n_flag) in [
        ("h2", "0.4", None),
        ("h3plus", "0.25", None),
        ("h3plus", "0.25", Some("6")),
    ] {
        let model_path = temp_path(&format!("verify-{family}-{}.json", n_flag.unwrap_or("0")));
        let mut args = vec![
            "tight",
            "--family",
            family,
            "--p",
            p,
            "-o",
            model_path.to_str().unwrap(),
        ];
        if let Some(pad) = n_flag {
            args.extend(["--pad-to", pad]);
        }
        assert!(lhv(&args).status.success());
        let out = lhv(&["verify", "-i", model_path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stdout(&out));
        std::fs::remove_file(model_path).ok();
    }
}

#[test]
fn malformed_files_fail_with_a_field_diagnostic() {
    let bad_path = temp_path("bad.json");
    std::fs::write(
        &bad_path,
        r#"{
            "dist":   [[0.5, 0.4], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
            "a_plus": [[1, 1], [0, 1]],
            "b_plus": [[1, 1], [1, 1]]
        }"#,
    )
    .unwrap();
    let out = lhv(&["validate", "-i", bad_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("row 1"), "{err}");
    std::fs::remove_file(bad_path).ok();

    let out = lhv(&["compute", "-i", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_and_region_emit_the_documented_csv() {
    let csv_path = temp_path("curve.csv");
    let out = lhv(&[
        "sweep",
        "--family",
        "h2",
        "--steps",
        "5",
        "-o",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,p,t,H,M,C_opt,lower,upper,on_boundary"
    );
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",upper")));
    std::fs::remove_file(&csv_path).ok();

    let out = lhv(&["region", "--H", "3", "--steps", "4", "--t-steps", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("family,p,t,H,M,C_opt,lower,upper,on_boundary"));
    assert_eq!(text.lines().count(), 13);

    // Hiddenness 0 degenerates to the single classical point.
    let out = lhv(&["region", "--H", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("H0,"), "{text}");
}

#[test]
fn sample_is_reproducible_and_reports_estimates() {
    let model_path = temp_path("sample-model.json");
    assert!(lhv(&[
        "tight",
        "--family",
        "h1",
        "--p",
        "0.5",
        "-o",
        model_path.to_str().unwrap(),
    ])
    .status
    .success());

    let rec1 = temp_path("rec1.json");
    let rec2 = temp_path("rec2.json");
    for rec in [&rec1, &rec2] {
        let out = lhv(&[
            "sample",
            "-i",
            model_path.to_str().unwrap(),
            "--trials",
            "20000",
            "--seed",
            "9",
            "-o",
            rec.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let summary = stdout(&out);
        assert!(summary.contains("C_exact=3.000000000000"), "{summary}");
    }
    assert_eq!(
        std::fs::read_to_string(&rec1).unwrap(),
        std::fs::read_to_string(&rec2).unwrap()
    );
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rec1).unwrap()).unwrap();
    assert_eq!(parsed["trials"], serde_json::json!([20000, 20000, 20000, 20000]));
    assert!(parsed["estimates"]["chsh"].as_f64().is_some());
    for path in [model_path, rec1, rec2] {
        std::fs::remove_file(path).ok();
    }
}

#[test]
fn oracle_agrees_on_random_models_and_respects_the_cap() {
    let out = lhv(&["oracle", "--random", "300", "--n", "5", "--seed", "42"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("300/300 agree within 1e-12"), "{text}");

    // A cap below the sampled cardinality forces a resource error.
    let out = Command::new(env!("CARGO_BIN_EXE_lhv"))
        .args(["oracle", "--random", "10", "--n", "5", "--seed", "1"])
        .env("LHV_ORACLE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capped"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn walshframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walshframe"))
        .args(args)
        .env_remove("WALSHFRAME_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rational(v: &Value) -> (i64, i64) {
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

#[test]
fn gen_gff_3_1_certificate() {
    let out = walshframe(&["gen-gff", "--n", "3", "--m", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["kind"], "fusion_frame");
    assert_eq!(doc["ambient_dim"], 6);
    assert_eq!(doc["subspaces"].as_array().unwrap().len(), 4);
    let cert = &doc["certificate"];
    assert_eq!(rational(&cert["bound_a"]), (4, 3));
    assert_eq!(rational(&cert["dist_sq"]), (16, 9));
    assert_eq!(cert["grassmannian_by_construction"], true);
}

#[test]
fn gen_walsh_k0_is_one_by_one() {
    let out = walshframe(&["gen-walsh", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["entries"], serde_json::json!([[1]]));
    assert_eq!(doc["certificate"]["sequency_ordered"], true);
}

#[test]
fn gen_walsh_3_rows_have_increasing_sign_changes() {
    let out = walshframe(&["gen-walsh", "--k", "3"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["entries"].as_array().unwrap();
    for (j, row) in rows.iter().enumerate() {
        let r: Vec<i64> = row
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_i64().unwrap())
            .collect();
        assert_eq!(r.windows(2).filter(|w| w[0] != w[1]).count(), j);
    }
}

#[test]
fn flipped_sign_fails_verification() {
    let dir = TempDir::new().unwrap();
    let good = dir.path().join("etf8.json");
    let out = walshframe(&["gen-etf", "--order", "8", "--output", path_str(&good)]);
    assert_eq!(out.status.code(), Some(0));

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&good).unwrap()).unwrap();
    doc["raw"][3][5] = (-doc["raw"][3][5].as_i64().unwrap()).into();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = walshframe(&["verify", "--input", path_str(&bad), "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tightness"), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("tight               no"),
        "{}",
        stdout(&out)
    );

    let out = walshframe(&["verify", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["certificate"]["tight"], false);
    assert_eq!(report["embedded_matches"], false);
}

#[test]
fn generated_files_verify_with_identical_certificates() {
    let dir = TempDir::new().unwrap();
    let specs: &[&[&str]] = &[
        &["gen-hadamard", "--k", "3"],
        &["gen-walsh", "--k", "4"],
        &["gen-etf", "--order", "16"],
        &["gen-gff", "--n", "4", "--m", "2"],
        &["gen-gff", "--n", "2", "--m", "1"],
        &["gen-gff", "--n", "3", "--m", "0"],
    ];
    for (i, spec) in specs.iter().enumerate() {
        let file = dir.path().join(format!("{i}.json"));
        let mut args = spec.to_vec();
        args.extend(["--output", path_str(&file)]);
        let out = walshframe(&args);
        assert_eq!(out.status.code(), Some(0), "{spec:?}: {}", stderr(&out));

        let generated: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
        let out = walshframe(&["verify", "--input", path_str(&file)]);
        assert_eq!(out.status.code(), Some(0), "{spec:?}: {}", stderr(&out));
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["embedded_matches"], true, "{spec:?}");
        assert_eq!(report["certificate"], generated["certificate"], "{spec:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    for spec in [
        vec!["gen-gff", "--n", "4", "--m", "1"],
        vec!["gen-etf", "--order", "8", "--format", "csv"],
        vec!["gen-walsh", "--k", "3", "--format", "text"],
    ] {
        let a = walshframe(&spec).stdout;
        let b = walshframe(&spec).stdout;
        assert_eq!(a, b, "{spec:?}");

        // export of a generated file reproduces it byte for byte
        if spec.contains(&"csv") || spec.contains(&"text") {
            continue;
        }
        let file = dir.path().join("g.json");
        fs::write(&file, &a).unwrap();
        let again = walshframe(&["export", "--input", path_str(&file)]).stdout;
        assert_eq!(a, again);
    }
}

#[test]
fn csv_round_trip_through_verify() {
    let dir = TempDir::new().unwrap();
    for (name, spec) in [
        ("etf.csv", vec!["gen-etf", "--order", "8"]),
        ("gff.csv", vec!["gen-gff", "--n", "3", "--m", "1"]),
        ("w.csv", vec!["gen-walsh", "--k", "2"]),
    ] {
        let file = dir.path().join(name);
        let mut args = spec.clone();
        args.extend(["--format", "csv", "--output", path_str(&file)]);
        assert_eq!(walshframe(&args).status.code(), Some(0));
        assert!(fs::read_to_string(&file).unwrap().starts_with("# kind="));

        let out = walshframe(&["verify", "--input", path_str(&file)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let json_again = walshframe(&["export", "--input", path_str(&file)]).stdout;
        assert_eq!(json_again, walshframe(&spec).stdout, "{name}");
    }
}

#[test]
fn etf_from_supplied_order_12_matrix() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/hadamard_12.json");
    let out = walshframe(&["gen-etf", "--input", path_str(&fixture)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rational(&doc["certificate"]["bound_a"]), (12, 11));
    assert_eq!(rational(&doc["certificate"]["alpha_sq"]), (1, 121));
}

#[test]
fn invalid_input_exits_2_with_diagnostic() {
    let dir = TempDir::new().unwrap();

    let out = walshframe(&["gen-etf", "--order", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("power of two"));

    let out = walshframe(&["gen-gff", "--n", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!stderr(&out).is_empty());

    let out = walshframe(&["gen-walsh", "--k", "2", "--unknown"]);
    assert_eq!(out.status.code(), Some(2));

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"kind\": \"frame\", \"ambient_dim\": 2}").unwrap();
    let out = walshframe(&["verify", "--input", path_str(&junk)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));

    // not Hadamard: rows 0 and 1 are not orthogonal
    let not_h = dir.path().join("h.json");
    fs::write(
        &not_h,
        r#"{"kind":"hadamard","order":2,"entries":[[1,1],[1,1]]}"#,
    )
    .unwrap();
    let out = walshframe(&["gen-etf", "--input", path_str(&not_h)]);
    assert_eq!(out.status.code(), Some(2));
    let out = walshframe(&["verify", "--input", path_str(&not_h)]);
    assert_eq!(out.status.code(), Some(1));

    let out = walshframe(&["simulate", "--object", "etf:4", "--erase", "random:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("k must be less than 4"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn max_order_environment_variable() {
    let out = Command::new(env!("CARGO_BIN_EXE_walshframe"))
        .args(["gen-walsh", "--k", "6"])
        .env("WALSHFRAME_MAX_ORDER", "32")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_walshframe"))
        .args(["gen-walsh", "--k", "5"])
        .env("WALSHFRAME_MAX_ORDER", "32")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn simulate_from_flags_and_config_file_agree() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"noise_std":0.05,"erasures":{"type":"random_k","k":1},"trials":500,"seed":11,"reconstruction":"least_squares"}"#,
    )
    .unwrap();
    let a = walshframe(&[
        "simulate",
        "--object",
        "gff:3,1",
        "--config",
        path_str(&cfg),
    ]);
    let b = walshframe(&[
        "simulate",
        "--object",
        "gff:3,1",
        "--noise-std",
        "0.05",
        "--erase",
        "random:1",
        "--trials",
        "500",
        "--seed",
        "11",
    ]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(report["trials_run"], 500);
    assert_eq!(report["config"]["erasures"]["type"], "random_k");
}

#[test]
fn simulate_file_input() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("etf.json");
    walshframe(&["gen-etf", "--order", "4", "--output", path_str(&file)]);
    let out = walshframe(&[
        "simulate",
        "--input",
        path_str(&file),
        "--erase",
        "fixed:2",
        "--trials",
        "10",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("exact_recovery   10"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn compare_table_text() {
    let out = walshframe(&[
        "compare",
        "--candidate",
        "basis:3",
        "--candidate",
        "etf:4",
        "--erase",
        "random:1",
        "--trials",
        "200",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("name"));
    assert!(lines[2].starts_with("etf:4"), "{text}");
    assert!(lines[3].starts_with("basis:3"), "{text}");
    // columns line up
    let header_end = lines[1].find("trials").unwrap() + "trials".len();
    assert!(lines[2..].iter().all(|l| l.len() == header_end), "{text}");

    let out = walshframe(&["compare", "--candidate", "basis:2", "--candidate", "etf:4"]);
    assert_eq!(out.status.code(), Some(2));
}

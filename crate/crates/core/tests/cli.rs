//! The binary's external contract: exit codes, JSON schema, CSV, files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_desitter-dirac"));
    c.env_remove("DESITTER_DIRAC_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema shipped in docs/");
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn validated(out: &Output) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let v = schema();
    let errors: Vec<String> = v
        .iter_errors(&doc)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    doc
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn every_command_emits_schema_valid_json() {
    let cases: [&[&str]; 6] = [
        &["spectrum", "--grid", "800", "--tol", "1e-2"],
        &["verify", "geometry"],
        &["romanovski-table", "--nubar-max", "3"],
        &["time-part", "--map", "coth", "--eps", "-1", "--points", "21"],
        &["partner-metric", "--samples", "10"],
        &["verify", "romanovski"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let doc = validated(&out);
        assert_eq!(doc["command"], args[0]);
        assert!(!doc["rows"].as_array().unwrap().is_empty());
        assert!(!doc["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn spectrum_rows_match_the_closed_form() {
    let out = run(&["spectrum", "--m", "1", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = validated(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (row, want) in rows.iter().zip([0.0, 4.0, 10.0, 18.0]) {
        assert_eq!(row["omega2_factorized"].as_f64().unwrap(), want);
        assert!((row["oracle"].as_f64().unwrap() - want).abs() < 5e-4);
    }
    assert!(rows[0]["gap_error"].is_null());
    assert!(rows[1]["gap_error"].as_f64().unwrap() < 5e-4);
}

#[test]
fn failing_check_exits_one() {
    let out = run(&["spectrum", "--grid", "64", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = validated(&out);
    assert_eq!(doc["summary"]["passed"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAILED"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let bad_config = scratch("bad.toml");
    std::fs::write(&bad_config, "grid = 8\n").unwrap();
    let unknown_key = scratch("unknown.toml");
    std::fs::write(&unknown_key, "nonsense = true\n").unwrap();
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["spectrum".into(), "--m".into(), "one".into()], "--m"),
        (vec!["verify".into(), "everything".into()], "everything"),
        (vec!["frobnicate".into()], "frobnicate"),
        (vec!["spectrum".into(), "--grid".into(), "8".into()], "grid"),
        (vec!["spectrum".into(), "--tol".into(), "0".into()], "tol"),
        (vec!["partner-metric".into(), "--ell".into(), "-1".into()], "ell"),
        (vec!["time-part".into(), "--eps".into(), "0.5".into()], "eps"),
        (vec!["time-part".into(), "--map".into(), "tan".into()], "map"),
        (
            vec!["romanovski-table".into(), "--nubar-max".into(), "6".into()],
            "degenerate",
        ),
        (
            vec!["--config".into(), bad_config.display().to_string(), "spectrum".into()],
            "grid",
        ),
        (
            vec!["--config".into(), unknown_key.display().to_string(), "spectrum".into()],
            "nonsense",
        ),
        (
            vec!["--config".into(), "/nonexistent/cfg.toml".into(), "spectrum".into()],
            "config",
        ),
    ];
    for (args, needle) in cases {
        let out = bin().args(&args).output().unwrap();
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: message should name `{needle}`: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = bin()
        .args(["verify", "geometry"])
        .env("DESITTER_DIRAC_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn flags_override_config_file() {
    let cfg = scratch("layered.toml");
    std::fs::write(&cfg, "m = 2\nn_max = 2\ngrid = 1000\nformat = \"csv\"\n").unwrap();
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--format",
            "json",
            "spectrum",
            "--n-max",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = validated(&out);
    assert_eq!(doc["params"]["m"].as_f64(), Some(2.0));
    assert_eq!(doc["params"]["grid"].as_i64(), Some(1000));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_file_and_csv_is_rectangular() {
    let path = scratch("table.csv");
    let out = run(&[
        "--out",
        path.to_str().unwrap(),
        "--format",
        "csv",
        "romanovski-table",
        "--nubar-max",
        "3",
        "--b",
        "-1.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[0], "record");
    assert_eq!(&header[1], "tag");
    let records: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().expect("rectangular CSV");
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert!(records.iter().any(|r| &r[1] == "romanovski.orthogonality"
        && &r[col("status")] == "divergent"
        && r[col("integral")].is_empty()));
    let check = records
        .iter()
        .find(|r| &r[0] == "check" && &r[col("name")] == "finite_orthogonality")
        .unwrap();
    // the location contains a comma and survives quoting
    let location = &check[col("location")];
    assert!(location.starts_with('(') && location.contains(','), "{location}");
    assert_eq!(&check[col("passed")], "true");
}

#[test]
fn seed_controls_sampling_and_is_echoed() {
    let with = |seed: &str| {
        bin()
            .args(["partner-metric", "--samples", "5"])
            .env("DESITTER_DIRAC_SEED", seed)
            .output()
            .unwrap()
    };
    let a = with("11");
    let b = with("11");
    assert_eq!(a.stdout, b.stdout);
    let doc = validated(&a);
    assert_eq!(doc["params"]["seed"].as_i64(), Some(11));
    let default = run(&["partner-metric", "--samples", "5"]);
    let doc = validated(&default);
    assert_eq!(doc["params"]["seed"].as_u64(), Some(desitter_dirac::cli::DEFAULT_SEED));
}

#[test]
fn jobs_do_not_change_output() {
    let one = run(&["--jobs", "1", "verify", "pseudo"]);
    let four = run(&["--jobs", "4", "verify", "pseudo"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run(&["--jobs", "0", "verify", "pseudo"]).status.code(), Some(2));
}

//! End-to-end CLI contract tests: exit codes and CSV/JSON parity.

use std::process::{Command, Output};

fn chiralosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chiralosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn classify_reports_regime_and_scales() {
    let out = chiralosc(&["classify", "--omega", "1", "--B", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("regime: left"));
    assert!(text.contains("B_c: 2"));
    assert!(text.contains("b: 0.5"));
    assert!(text.contains("F_w: 0.5"));

    let out = chiralosc(&["classify", "--omega", "1", "--B", "2"]);
    assert!(stdout(&out).contains("regime: critical"));
}

#[test]
fn validation_failures_exit_2_and_name_the_field() {
    let out = chiralosc(&["classify", "--omega", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("omega"));

    // SI mode without constants
    let out = chiralosc(&["classify", "--units", "si", "--omega", "1e12"]);
    assert_eq!(out.status.code(), Some(2));

    let out = chiralosc(&[
        "sweep",
        "--omega",
        "1",
        "--b-start",
        "3",
        "--b-end",
        "1",
        "--steps",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_csv_json_parity() {
    let base = ["spectrum", "--omega", "1", "--B", "1", "--n-max", "3"];
    let csv = stdout(&chiralosc(&base));
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json = stdout(&chiralosc(&json_args));

    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    let csv_rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), csv_rows.len());
    assert_eq!(rows.len(), 8);
    for (row, line) in rows.iter().zip(&csv_rows) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(row["n"].as_u64().unwrap().to_string(), fields[0]);
        assert_eq!(row["branch"].as_str().unwrap(), fields[1]);
        assert_eq!(row["chirality"].as_str().unwrap(), fields[2]);
        assert_eq!(row["frame"].as_str().unwrap(), fields[3]);
        let csv_e: f64 = fields[4].parse().unwrap();
        let json_e = row["energy_mc2"].as_f64().unwrap();
        assert!(
            (csv_e - json_e).abs() <= 1e-11 * json_e.abs().max(1.0),
            "CSV {csv_e} vs JSON {json_e}"
        );
    }
}

#[test]
fn spectrum_critical_point_rows() {
    let out = stdout(&chiralosc(&[
        "spectrum", "--omega", "1", "--B", "2", "--n-max", "2",
    ]));
    for line in out.lines().skip(1) {
        assert!(line.contains("undefined"));
        let e: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!((e.abs() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sweep_reports_transition_and_parity() {
    let base = [
        "sweep",
        "--omega",
        "1",
        "--b-start",
        "0",
        "--b-end",
        "4",
        "--steps",
        "401",
        "--n",
        "1",
    ];
    let out = chiralosc(&base);
    assert!(out.status.success());
    let csv = stdout(&out);
    let footer = csv.lines().last().unwrap();
    assert!(footer.starts_with("# B_transition"));
    let est: f64 = footer
        .split('=')
        .nth(1)
        .unwrap()
        .split("+-")
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((est - 2.0).abs() <= 0.005);

    // critical rows carry the undefined marker exactly where regime=critical
    for line in csv.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let fields: Vec<&str> = line.split(',').collect();
        let is_critical = fields[2] == "critical";
        let lz_defined = fields[7] == "true";
        assert_eq!(is_critical, !lz_defined, "row: {line}");
    }

    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&chiralosc(&json_args))).unwrap();
    let jt = doc["transition"]["B"].as_f64().unwrap();
    assert!((jt - est).abs() <= 1e-11);
    let records = doc["records"].as_array().unwrap();
    let csv_data_lines = csv.lines().skip(1).filter(|l| !l.starts_with('#')).count();
    assert_eq!(records.len(), csv_data_lines);
    // spot-check full-precision parity on the first record
    let first_csv: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let b_csv: f64 = first_csv[0].parse().unwrap();
    let e_csv: f64 = first_csv[5].parse().unwrap();
    assert!((b_csv - records[0]["B"].as_f64().unwrap()).abs() <= 1e-11);
    assert!((e_csv - records[0]["energy_mc2"].as_f64().unwrap()).abs() <= 1e-11);
}

#[test]
fn sweep_without_bracket_exits_4() {
    let out = chiralosc(&[
        "sweep",
        "--omega",
        "1",
        "--b-start",
        "0",
        "--b-end",
        "1",
        "--steps",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_svg_emission() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("lz.svg");
    let out = chiralosc(&[
        "sweep",
        "--omega",
        "1",
        "--b-start",
        "0",
        "--b-end",
        "4",
        "--steps",
        "21",
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
}

#[test]
fn output_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_chiralosc"))
        .args([
            "spectrum", "--omega", "1", "--B", "0", "--n-max", "1", "--output", "spec.csv",
        ])
        .env("CHIRALOSC_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.path().join("spec.csv")).unwrap();
    assert!(written.starts_with("n,branch,"));
}

#[test]
fn oracle_assert_passes_in_both_phases() {
    for b in ["0", "4"] {
        let out = chiralosc(&[
            "oracle", "--omega", "1", "--B", b, "--N-max", "16", "--window", "4", "--assert",
        ]);
        assert!(out.status.success(), "B={b}: {}", stderr(&out));
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["verdict"], "pass");
        let matched = doc["positive"]["matched"].as_array().unwrap().len()
            + doc["negative"]["matched"].as_array().unwrap().len();
        assert!(matched >= 6, "only {matched} matched levels at B={b}");
        let expected_sign = if b == "0" { 1 } else { -1 };
        assert_eq!(doc["zero_mode"]["expected_sign"], expected_sign);
        assert_eq!(doc["zero_mode"]["pass"], true);
    }
}

#[test]
fn oracle_insufficient_basis_exits_5() {
    let out = chiralosc(&[
        "oracle", "--omega", "1", "--B", "0", "--N-max", "8", "--window", "40",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

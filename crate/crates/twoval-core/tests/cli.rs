//! End-to-end tests of the `twoval` binary: exit codes, output formats, and
//! report determinism, exercised through real process invocations.

use std::process::{Command, Output};

fn twoval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn passing_check_exits_zero() {
    let out = twoval(&[
        "check", "--family", "buchstaber", "--a1", "1", "--a2", "2", "--a3", "3",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("overall: PASS"));
    assert!(text.contains("elapsed:"), "text mode reports timing");
}

#[test]
fn hecke_all_exits_zero() {
    let out = twoval(&["hecke", "--q", "5", "--t", "2", "--check", "all"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn failing_check_exits_one_with_witness() {
    let out = twoval(&[
        "check", "--family", "kontsevich", "--e", "0", "--format", "json",
    ]);
    assert_eq!(exit_code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["pass"], false);
    assert_eq!(v["payload"]["identity"]["pass"], false);
    let witness = v["payload"]["identity"]["witness"]["display"]
        .as_str()
        .unwrap();
    assert_ne!(witness, "0", "failure carries a nonzero witness");
}

#[test]
fn usage_errors_exit_two() {
    // Unknown flag (clap-level).
    assert_eq!(exit_code(&twoval(&["check", "--no-such-flag"])), 2);
    // Unknown family (configuration-level).
    let out = twoval(&["check", "--family", "nonsense"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    // Composite q.
    assert_eq!(exit_code(&twoval(&["hecke", "--q", "9", "--t", "2"])), 2);
    // Help exits 0.
    assert_eq!(exit_code(&twoval(&["--help"])), 0);
}

#[test]
fn json_reports_are_byte_identical_and_schema_tagged() {
    let args = [
        "hecke", "--q", "7", "--t", "3", "--format", "json", "--seed", "11",
    ];
    let one = twoval(&args);
    let two = twoval(&args);
    assert_eq!(exit_code(&one), 0);
    assert_eq!(one.stdout, two.stdout, "JSON report must be reproducible");
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["schema"], "twoval-report/1");
    assert_eq!(v["seed"], 11);
    assert_eq!(v["tool"]["name"], "twoval");
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = twoval(&[
        "star",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty(), "--out suppresses stdout");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "star");
    assert_eq!(v["pass"], true);
    assert_eq!(
        v["payload"]["mobius_match"]["expected_ratio"],
        "1/9",
        "default A = 3 gives ratio 1/A² = 1/9"
    );
}

#[test]
fn family_output_round_trips_into_check() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.json");
    let out = twoval(&[
        "family",
        "--name",
        "buchstaber",
        "--a1",
        "1",
        "--a2",
        "0",
        "--a3",
        "0",
        "--format",
        "json",
        "--out",
        fam.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fam).unwrap()).unwrap();
    let law = dir.path().join("law.json");
    std::fs::write(
        &law,
        serde_json::to_string(&v["payload"]["polynomial"]["poly"]).unwrap(),
    )
    .unwrap();
    let out = twoval(&["check", "--law-file", law.to_str().unwrap()]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn hecke_matrix_csv_is_well_formed() {
    let out = twoval(&[
        "hecke", "--q", "5", "--t", "3", "--matrix", "2", "--format", "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let csv = v["payload"]["matrix"]["csv"].as_str().unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 6, "q + 1 rows (0..q-1 and ∞)");
    for row in rows {
        let cells: Vec<i64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 6);
        assert!(cells.iter().all(|&c| (0..=2).contains(&c)));
    }
}

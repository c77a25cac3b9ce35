//! End-to-end tests of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jfod"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn example_problem_json() -> &'static str {
    r#"{
  "schemaVersion": "1",
  "weights": [40, 35, 9, 5, 4.5, 3, 2.4, 2],
  "dims": [7, 5, 3],
  "initialSpectra": [
    [9, 5.5, 3, 0.3, 0, 0, 0],
    [20, 1.1, 0.5, 0, 0],
    [2, 1.5, 0.7]
  ]
}"#
}

fn run(output: Output) -> (i32, String, String) {
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

#[test]
fn solve_reproduces_the_reference_value() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let out = dir.path().join("report.json");
    let (code, _, stderr) = run(bin()
        .args(["solve"])
        .arg(&problem)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap());
    assert_eq!(code, 0, "stderr: {}", stderr);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let min_value = report["minValue"].as_f64().unwrap();
    assert!((min_value - 265.685).abs() <= 1e-2);
    let b: Vec<f64> = report["bVector"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let expected = [
        -5.9833, -5.9833, -2.3778, -2.3778, -2.3778, -2.3778, -2.3778,
    ];
    for (got, want) in b.iter().zip(expected.iter()) {
        assert!((got - want).abs() <= 5e-4);
    }
    assert_eq!(report["cuts"], serde_json::json!([0, 2, 7]));
    assert!(report["certificates"]["allPassed"].as_bool().unwrap());
}

#[test]
fn unsorted_weights_exit_code_and_message() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        dir.path(),
        "problem.json",
        r#"{"schemaVersion":"1","weights":[1,2],"dims":[1],"initialSpectra":[[0.5]]}"#,
    );
    let (code, _, stderr) = run(bin().args(["solve"]).arg(&problem).output().unwrap());
    assert_eq!(code, 3);
    assert!(
        stderr.contains("weights must be non-increasing"),
        "stderr: {}",
        stderr
    );
}

#[test]
fn malformed_json_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", "{ not json");
    let (code, _, _) = run(bin().args(["solve"]).arg(&problem).output().unwrap());
    assert_eq!(code, 2);

    // Both or neither of the initial data fields is also malformed input.
    let problem = write_file(
        dir.path(),
        "both.json",
        r#"{"schemaVersion":"1","weights":[1],"dims":[1]}"#,
    );
    let (code, _, _) = run(bin().args(["solve"]).arg(&problem).output().unwrap());
    assert_eq!(code, 2);
}

#[test]
fn wrong_schema_version_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        dir.path(),
        "problem.json",
        r#"{"schemaVersion":"2","weights":[1],"dims":[1],"initialSpectra":[[0.0]]}"#,
    );
    let (code, _, _) = run(bin().args(["solve"]).arg(&problem).output().unwrap());
    assert_eq!(code, 2);
}

#[test]
fn report_round_trips_to_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let out = dir.path().join("report.json");
    assert!(bin()
        .args(["solve"])
        .arg(&problem)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let text = std::fs::read_to_string(&out).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    // Re-serializing the parsed floats must reproduce every value exactly.
    let b1: Vec<f64> = parsed["bVector"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((b1[0] - (39.1 - 75.0) / 6.0).abs() == 0.0);
    assert!((parsed["minValue"].as_f64().unwrap()
        - (6.0 * (35.9f64 / 6.0).powi(2) + 9.0 * (21.4f64 / 9.0).powi(2)))
    .abs()
        < 1e-12);
}

#[test]
fn synthesize_populates_design_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let out = dir.path().join("report.json");
    let (code, _, stderr) = run(bin()
        .args(["synthesize"])
        .arg(&problem)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap());
    assert_eq!(code, 0, "stderr: {}", stderr);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let certs = &report["certificates"];
    assert!(certs["allPassed"].as_bool().unwrap());
    assert!(certs["thetaResidual"].as_f64().unwrap() <= 1e-7 * (1.0 + 265.7));
    for c in certs["commutatorNorms"].as_array().unwrap() {
        assert!(c.as_f64().unwrap() <= 1e-7);
    }
    let design = report["synthesizedDesign"].as_array().unwrap();
    assert_eq!(design.len(), 3);
    for (family, dim) in design.iter().zip([7usize, 5, 3]) {
        assert_eq!(family.as_array().unwrap().len(), 8);
        assert_eq!(family[0].as_array().unwrap().len(), dim);
    }
}

#[test]
fn descend_reports_small_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let out = dir.path().join("report.json");
    let (code, _, stderr) = run(bin()
        .args(["descend"])
        .arg(&problem)
        .args(["--starts", "2", "--seed", "5"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap());
    assert_eq!(code, 0, "stderr: {}", stderr);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let summary = &report["descentSummary"];
    assert_eq!(summary["runs"].as_array().unwrap().len(), 2);
    assert!(summary["maxRelativeGap"].as_f64().unwrap() <= 1e-3);
    for r in summary["runs"].as_array().unwrap() {
        assert!(r["monotone"].as_bool().unwrap());
    }
}

#[test]
fn descend_zero_starts_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let (code, _, _) = run(bin()
        .args(["descend"])
        .arg(&problem)
        .args(["--starts", "0"])
        .output()
        .unwrap());
    assert_eq!(code, 2);
}

#[test]
fn deterministic_reports_for_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let out1 = dir.path().join("r1.json");
    let out2 = dir.path().join("r2.json");
    for (cmdline, out) in [("descend", &out1), ("descend", &out2)] {
        assert!(bin()
            .args([cmdline])
            .arg(&problem)
            .args(["--starts", "2", "--seed", "42"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap()
            .success());
    }
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2, "reports differ for identical problem and seed");
}

#[test]
fn problem_file_seed_is_used_when_flag_absent() {
    let dir = tempfile::tempdir().unwrap();
    let with_seed = example_problem_json().replace(
        "\"dims\": [7, 5, 3],",
        "\"dims\": [7, 5, 3],\n  \"seed\": 9,",
    );
    let problem = write_file(dir.path(), "problem.json", &with_seed);
    let out = dir.path().join("r.json");
    assert!(bin()
        .args(["descend"])
        .arg(&problem)
        .args(["--starts", "1"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["descentSummary"]["baseSeed"].as_u64().unwrap(), 9);
}

#[test]
fn initial_design_input_is_accepted() {
    // Two orthonormal vectors in C^2 as the initial family: target is the
    // identity; weights make exact attainment impossible.
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        dir.path(),
        "problem.json",
        r#"{
  "schemaVersion": "1",
  "weights": [3, 1],
  "dims": [2],
  "initialDesign": [
    [
      [[1, 0], [0, 0]],
      [[0, 0], [1, 0]]
    ]
  ]
}"#,
    );
    let out = dir.path().join("r.json");
    let (code, _, stderr) = run(bin()
        .args(["synthesize"])
        .arg(&problem)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap());
    assert_eq!(code, 0, "stderr: {}", stderr);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["certificates"]["allPassed"].as_bool().unwrap());
    // The weight 3 forces approximant spectrum (3, 1) against the identity
    // target: the minimal squared distance is (1-3)^2 = 4.
    assert!((report["minValue"].as_f64().unwrap() - 4.0).abs() <= 1e-9);
}

#[test]
fn gframe_identity_is_exactly_attainable() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        dir.path(),
        "gframe.json",
        r#"{
  "schemaVersion": "1",
  "matrixA": [
    [[1, 0], [0, 0], [0, 0]],
    [[0, 0], [1, 0], [0, 0]],
    [[0, 0], [0, 0], [1, 0]]
  ],
  "weights": [3],
  "analysisDim": 3
}"#,
    );
    let out = dir.path().join("r.json");
    let (code, _, stderr) = run(bin()
        .args(["gframe"])
        .arg(&problem)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap());
    assert_eq!(code, 0, "stderr: {}", stderr);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["feasibleExact"].as_bool().unwrap());
    assert!(report["minValue"].as_f64().unwrap().abs() <= 1e-10);
    assert!(report["certificates"]["allPassed"].as_bool().unwrap());
}

#[test]
fn gframe_rejects_non_hermitian_input() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        dir.path(),
        "gframe.json",
        r#"{
  "schemaVersion": "1",
  "matrixA": [
    [[1, 0], [0.5, 0]],
    [[0.1, 0], [1, 0]]
  ],
  "weights": [2],
  "analysisDim": 2
}"#,
    );
    let (code, _, stderr) = run(bin().args(["gframe"]).arg(&problem).output().unwrap());
    assert_eq!(code, 3, "stderr: {}", stderr);
    assert!(stderr.contains("Hermitian"), "stderr: {}", stderr);
}

#[test]
fn tol_report_flag_echoes_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(dir.path(), "problem.json", example_problem_json());
    let out = dir.path().join("r.json");
    let (code, stdout, _) = run(bin()
        .args(["solve"])
        .arg(&problem)
        .arg("--tol-report")
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap());
    assert_eq!(code, 0);
    assert!(stdout.contains("majorizationRelative"));
}

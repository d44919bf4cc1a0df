//! End-to-end tests for the `theta-lgr` binary: exit codes, output shapes,
//! and determinism of seeded sampling.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use theta_lgr::lagrangian::{cell_index, classify_double};
use theta_lgr::LagrangianPoint;

const BIN: &str = env!("CARGO_BIN_EXE_theta-lgr");

/// rep of the base point with k = l = 1 at n = 2: span(e_1, e_4).
const BASE_ONE_ONE: &str = r#"{"n": 2, "rep": {"rows": 4, "cols": 2, "data":
  [["1","0"],["0","0"],["0","0"],["0","1"]]}}"#;

/// rep [I; I] at n = 2, interior to the nonnegative region.
const INTERIOR: &str = r#"{"n": 2, "rep": {"rows": 4, "cols": 2, "data":
  [["1","0"],["0","1"],["1","0"],["0","1"]]}}"#;

fn run_with(args: &[&str], stdin: &str, envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args)
        .env_remove("THETA_LGR_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let mut child = cmd.spawn().expect("spawn theta-lgr");
    child
        .stdin
        .take()
        .expect("child stdin")
        .write_all(stdin.as_bytes())
        .expect("write stdin");
    child.wait_with_output().expect("wait for theta-lgr")
}

fn run(args: &[&str], stdin: &str) -> Output {
    run_with(args, stdin, &[])
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn classify_reports_stratum_and_cosets() {
    let out = run(&["classify"], BASE_ONE_ONE);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["k"], 1);
    assert_eq!(v["l"], 1);
    assert_eq!(v["K_plus"], serde_json::json!([2]));
    assert_eq!(v["K_minus"], serde_json::json!([2]));
    assert_eq!(v["theta"], "nonnegative");
    assert_eq!(v["plucker_class"], "nonnegative");
}

#[test]
fn classify_interior_point_is_positive() {
    let out = run(&["classify"], INTERIOR);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["k"], 0);
    assert_eq!(v["l"], 2);
    assert_eq!(v["K_plus"], serde_json::json!([1, 2]));
    assert_eq!(v["K_minus"], serde_json::json!([]));
    assert_eq!(v["theta"], "positive");
    assert_eq!(v["plucker_class"], "positive");
    assert_eq!(v["gs_list"].as_array().unwrap().len(), 4);
}

#[test]
fn violated_invariant_exits_three() {
    // A^t C is not symmetric, so the plane is not Lagrangian.
    let input = r#"{"n": 2, "rep": {"rows": 4, "cols": 2, "data":
      [["1","0"],["0","1"],["0","1"],["0","0"]]}}"#;
    let out = run(&["classify"], input);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn malformed_json_exits_two() {
    let out = run(&["classify"], "{ this is not json");
    assert_eq!(code(&out), 2);

    // Well-formed JSON with a malformed matrix is still a parse failure.
    let out = run(&["classify"], r#"{"rep": {"rows": 1, "cols": 1, "data": []}}"#);
    assert_eq!(code(&out), 2);
}

#[test]
fn declared_rank_mismatch_exits_three() {
    let input = r#"{"n": 3, "rep": {"rows": 4, "cols": 2, "data":
      [["1","0"],["0","1"],["1","0"],["0","1"]]}}"#;
    let out = run(&["classify"], input);
    assert_eq!(code(&out), 3);
}

#[test]
fn sampled_stratum_points_reclassify_and_are_deterministic() {
    let args = ["sample", "--n", "3", "--stratum", "1,2", "--count", "10", "--seed", "7"];
    let out = run(&args, "");
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let points: Vec<LagrangianPoint> = serde_json::from_slice(&out.stdout).expect("points");
    assert_eq!(points.len(), 10);
    for p in &points {
        assert_eq!(classify_double(p), (1, 2));
    }

    let again = run(&args, "");
    assert_eq!(out.stdout, again.stdout, "same seed must reproduce bytes");

    let other = run(&["sample", "--n", "3", "--stratum", "1,2", "--count", "10", "--seed", "8"], "");
    assert_ne!(out.stdout, other.stdout, "different seed must move the stream");
}

#[test]
fn sampled_cell_points_land_in_the_requested_cell() {
    let out = run(&["sample", "--n", "3", "--cell", "1,3", "--count", "5", "--seed", "2"], "");
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let points: Vec<LagrangianPoint> = serde_json::from_slice(&out.stdout).expect("points");
    assert_eq!(points.len(), 5);
    let target: BTreeSet<usize> = [1, 3].into();
    for p in &points {
        assert_eq!(cell_index(p).unwrap(), target);
    }
}

#[test]
fn seed_env_variable_matches_explicit_flag() {
    let flagged = run(&["sample", "--n", "2", "--count", "3", "--seed", "9"], "");
    let from_env = run_with(&["sample", "--n", "2", "--count", "3"], "", &[("THETA_LGR_SEED", "9")]);
    assert_eq!(code(&flagged), 0);
    assert_eq!(flagged.stdout, from_env.stdout);

    let bad_env = run_with(&["sample", "--n", "2", "--count", "3"], "", &[("THETA_LGR_SEED", "nope")]);
    assert_eq!(code(&bad_env), 2);
}

#[test]
fn sample_rejects_contradictory_requests() {
    let out = run(&["sample", "--n", "2", "--stratum", "1,1", "--cell", "1"], "");
    assert_eq!(code(&out), 2, "mutually exclusive flags are a usage error");

    let out = run(&["sample", "--stratum", "1,1"], "");
    assert_eq!(code(&out), 2, "sample requires --n");

    // k > l names no stratum.
    let out = run(&["sample", "--n", "2", "--stratum", "2,1"], "");
    assert_eq!(code(&out), 4);
}

#[test]
fn verify_minors_suite_passes() {
    let out = run(&["verify", "--suite", "minors", "--n", "2", "--count", "40"], "");
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "minors");
    assert_eq!(v["suites"][0]["failures"], 0);

    let out = run(&["verify", "--suite", "nonsense"], "");
    assert_eq!(code(&out), 2);
}

#[test]
fn factor_splits_the_identity_trivially() {
    let identity = r#"{"rows": 4, "cols": 4, "data": [
      ["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
    let out = run(&["factor"], identity);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["reassembly_exact"], true);
    let eye = serde_json::json!([
        ["1", "0", "0", "0"],
        ["0", "1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"]
    ]);
    for part in ["u_minus", "torus", "u_plus"] {
        assert_eq!(v[part]["data"], eye, "{part} of I is I");
    }
}

#[test]
fn factor_outside_the_monoid_exits_four() {
    // Lower unipotent block with indefinite symmetric part: symplectic, but
    // not in the nonnegative monoid.
    let input = r#"{"rows": 4, "cols": 4, "data": [
      ["1","0","0","0"],["0","1","0","0"],["1","0","1","0"],["0","-1","0","1"]]}"#;
    let out = run(&["factor"], input);
    assert_eq!(code(&out), 4);

    // Non-symplectic input is a violated invariant instead.
    let input = r#"{"rows": 4, "cols": 4, "data": [
      ["2","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
    let out = run(&["factor"], input);
    assert_eq!(code(&out), 3);
}

#[test]
fn flow_moves_points_and_validates_speed() {
    let input = r#"{"rep": {"rows": 2, "cols": 1, "data": [["1"],["1"]]}}"#;
    let out = run(&["flow", "--speed", "2"], input);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let moved: LagrangianPoint = serde_json::from_slice(&out.stdout).expect("moved point");
    assert!(moved.is_theta_positive());

    let out = run(&["flow", "--speed", "0"], input);
    assert_eq!(code(&out), 4);

    let out = run(&["flow", "--speed", "fast"], input);
    assert_eq!(code(&out), 2);
}

#[test]
fn plucker_reports_coordinates_and_class() {
    let out = run(&["plucker"], INTERIOR);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["n"], 2);
    assert_eq!(v["sign_class"], "positive");
    let coords = v["coords"].as_object().unwrap();
    assert_eq!(coords.len(), 4);
    for key in ["1,2", "1,4", "2,3", "3,4"] {
        assert!(coords.contains_key(key), "missing admissible coordinate {key}");
    }
    assert_eq!(v["gs_list"].as_array().unwrap().len(), 4);
}

#[test]
fn output_flag_writes_the_same_report_to_a_file() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("classify-report.json");
    let to_stdout = run(&["classify", "--json"], INTERIOR);
    let to_file = run(&["classify", "--json", "--output", path.to_str().unwrap()], INTERIOR);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).expect("report file");
    assert_eq!(written, to_stdout.stdout);

    // Compact mode is a single line.
    assert_eq!(to_stdout.stdout.iter().filter(|&&b| b == b'\n').count(), 1);
}

#[test]
fn tolerance_must_be_positive() {
    let out = run(&["verify", "--suite", "weyl", "--tolerance", "0"], "");
    assert_eq!(code(&out), 2);
}

//! Binary-level tests: exit codes, output schema, instance round trips.

use std::process::Command;

fn slalom() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slalom"))
}

#[test]
fn solve_rosenbrock_reports_solved_with_exit_zero() {
    let out = slalom()
        .args(["solve", "rosenbrock", "--x0", "-5,5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["status"], "solved");
    assert_eq!(value["problem"], "rosenbrock");
    for field in [
        "x",
        "s",
        "y",
        "residuals",
        "q_value",
        "outer_iterations",
        "inner_iterations",
        "trace",
    ] {
        assert!(!value[field].is_null(), "missing field {field}");
    }
    assert!(value["residuals"]["primal"].as_f64().unwrap() <= 1e-6);
    assert!(!value["trace"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_problem_is_a_usage_error() {
    let out = slalom().args(["solve", "nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = slalom()
        .args(["bench-portfolio", "--definitely-not-a-flag"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn iteration_cap_maps_to_exit_two() {
    let out = slalom()
        .args([
            "solve",
            "rosenbrock",
            "--max-outer",
            "1",
            "--tol-prim",
            "1e-12",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_suspect_maps_to_exit_three() {
    // A portfolio file whose return floor is unreachable: rho far above any
    // convex combination of the means.
    let dir = std::env::temp_dir().join("slalom-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("infeasible.txt");
    std::fs::write(
        &path,
        "portfolio 1\nn 2 alpha 0 rho 9.0\n0.1 0.2\n1.0 1.0\n1.0\n0.0 1.0\n",
    )
    .unwrap();
    let out = slalom()
        .args(["solve", "portfolio", "--inner-cap", "20000", "--file"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn gen_instance_round_trips_through_solve() {
    let dir = std::env::temp_dir().join("slalom-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("roundtrip.txt");
    let out = slalom()
        .args([
            "gen-instance",
            "--seed",
            "9",
            "--n",
            "12",
            "--alpha",
            "0.001",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = slalom::problems::parse_portfolio(&text).unwrap();
    let direct = slalom::problems::gen_portfolio(9, 12, 0.001);
    assert_eq!(parsed, direct);

    let out = slalom()
        .args(["solve", "portfolio", "--reg", "l1", "--file"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn csv_format_emits_trace_rows() {
    let out = slalom()
        .args(["solve", "rosenbrock", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,infeas,eps_k,mu_min,inner_iterations,q"
    );
    assert!(lines.count() >= 1);
    assert!(!text.contains('\r'), "CSV must use LF line endings");
}

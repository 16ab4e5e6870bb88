use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padic-cauchy"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(report: &'a serde_json::Value, section: &str, name: &str) -> &'a str {
    report[section]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["name"] == name)
        .unwrap_or_else(|| panic!("no {section}.{name}"))["value"]
        .as_str()
        .unwrap()
}

#[test]
fn nilpotent_transport_has_unbounded_radius_and_zero_residual() {
    let f = fixture("transport.json");
    let o = run(&["solve-ode", "--file", f.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(field(&rep, "results", "radius"), "unbounded");
    let evals = rep["tables"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["name"] == "evaluations")
        .unwrap();
    let columns = evals["columns"].as_array().unwrap();
    let residual = columns.iter().position(|c| c == "residual").unwrap();
    for row in evals["rows"].as_array().unwrap() {
        assert_eq!(row[residual], "−∞");
    }
    assert_eq!(rep["status"], "pass");
}

#[test]
fn analyze_diagonal_p() {
    let f = fixture("diag_p.json");
    let o = run(&["analyze", "--file", f.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(field(&rep, "results", "sigma_exponent"), "-1");
    assert_eq!(field(&rep, "results", "method"), "window_limsup");
    assert_eq!(field(&rep, "results", "closed_form_sigma_exponent"), "-1");
}

#[test]
fn verify_legendre_passes() {
    let o = run(&["verify", "--suite", "legendre", "--max-n", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("legendre: pass"));
}

#[test]
fn verify_suites_pass() {
    for suite in ["asymptotics", "oracle", "radius-law"] {
        let o = run(&["verify", "--suite", suite, "--max-n", "10000", "--cases", "8"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn solve_pde_reports_disk_and_degrees() {
    let f = fixture("reaction_pde.json");
    let o = run(&["solve-pde", "--file", f.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // 5^{-1/4} / max(1, |5|) with ρ = 1
    assert_eq!(field(&rep, "results", "disk_radius_exponent"), "-1/4");
    let checks = rep["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn text_and_machine_reports_agree() {
    let f = fixture("transport.json");
    let f = f.to_str().unwrap();
    let text = stdout(&run(&["solve-ode", "--file", f]));
    let machine = stdout(&run(&["solve-ode", "--file", f, "--format", "machine"]));
    let rep: serde_json::Value = serde_json::from_str(&machine).unwrap();
    for section in ["input", "results"] {
        for fld in rep[section].as_array().unwrap() {
            let line = format!("{} = {}", fld["name"].as_str().unwrap(), fld["value"].as_str().unwrap());
            assert!(text.contains(&line), "missing `{line}`");
        }
    }
    for table in rep["tables"].as_array().unwrap() {
        for row in table["rows"].as_array().unwrap() {
            for cell in row.as_array().unwrap() {
                assert!(text.contains(cell.as_str().unwrap()));
            }
        }
    }
}

#[test]
fn machine_reports_are_deterministic_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("reaction_pde.json");
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for p in &paths {
        let o = run(&[
            "solve-pde",
            "--file",
            f.to_str().unwrap(),
            "--format",
            "machine",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
}

#[test]
fn flags_override_the_file() {
    let f = fixture("diag_p.json");
    let o = run(&["analyze", "--file", f.to_str().unwrap(), "--terms", "16", "--window", "3"]);
    let text = stdout(&o);
    assert!(text.contains("depth = 16"));
    assert!(text.contains("window = 3"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"prime": 4, "matrix": [[1]], "initial": [1]}"#,
        r#"{"prime": 3, "matrix": [[1, 2]], "initial": [1]}"#,
        r#"{"prime": 3, "matrix": [[1]], "initial": ["1/0"]}"#,
        r#"{"prime": 3, "matrix": [[1]]}"#,
        r#"{"prime": 3, "matrix": [[1]], "initial": [1], "colour": "red"}"#,
        "not json",
    ];
    for (i, body) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&path, body).unwrap();
        let o = run(&["analyze", "--file", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let f = fixture("transport.json");
    let o = run(&["solve-ode", "--file", f.to_str().unwrap(), "--epsilon", "3/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["analyze", "--file", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shallow.json");
    std::fs::write(&path, r#"{"prime": 3, "depth": 2, "matrix": [[1]], "initial": [1]}"#).unwrap();
    let o = run(&["solve-ode", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("depth"));
}

#[test]
fn points_outside_the_disk_are_reported_not_summed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diag.json");
    std::fs::write(
        &path,
        r#"{"prime": 3, "depth": 16, "matrix": [[3]], "initial": [1], "points": [1, "1/3"]}"#,
    )
    .unwrap();
    let o = run(&["solve-ode", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outside_disk"));
}

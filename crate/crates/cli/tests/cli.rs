use std::path::Path;
use std::process::{Command, Output};

use composite_probe_cli::error::{EXIT_NUMERICAL, EXIT_VALIDATION};
use composite_probe_cli::scenario::BUILTINS;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_composite-probe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines
        .map(|l| l.split(',').nth(j).unwrap().parse().unwrap())
        .collect()
}

fn reproduce(id: &str, dir: &Path) -> String {
    let out = bin(&["reproduce", id, "--out", dir.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read_to_string(dir.join(format!("{id}.csv"))).unwrap()
}

fn scenario_file(dir: &Path, from: &str, edit: impl Fn(&str) -> String) -> String {
    let text = BUILTINS.iter().find(|(n, _)| *n == from).unwrap().1;
    let path = dir.join(format!("{from}-edited.toml"));
    std::fs::write(&path, edit(text)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_reports_measure_independence() {
    let out = bin(&["verify", "--scenario", "example1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("all_time_independent: true"), "{text}");
    assert!(
        text.contains("pole -1+0i (multiplicity 1, residue -4+0i"),
        "{text}"
    );

    let out = bin(&["verify", "--scenario", "example3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all_time_independent: false"));
}

#[test]
fn off_axis_endpoint_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(dir.path(), "example1", |t| {
        t.replace("[[0.0, 1.5],", "[[0.3, 1.5],")
    });
    let out = bin(&["verify", "--scenario", &path]);
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION as i32));
}

#[test]
fn exponent_overflow_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(dir.path(), "example1", |t| {
        t.replace("start = -3.0\nstop = 0.0", "start = 0.0\nstop = 1000.0")
    });
    let out = bin(&["simulate", "--scenario", &path]);
    assert_eq!(out.status.code(), Some(EXIT_NUMERICAL as i32));
}

#[test]
fn unknown_figure_is_rejected() {
    let out = bin(&["reproduce", "fig9z"]);
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION as i32));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig2b"));
}

#[test]
fn fig2b_exact_column_and_coincident_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let csv = reproduce("fig2b", dir.path());
    let t = column(&csv, "t");
    let exact = column(&csv, "exact");
    let (lo, hi) = (column(&csv, "lower"), column(&csv, "upper"));
    assert_eq!(t.len(), 601);
    for i in 0..t.len() {
        assert!((exact[i] + 0.6 * t[i].exp()).abs() < 1e-15);
        assert!((lo[i] - exact[i]).abs() < 1e-8 && (hi[i] - exact[i]).abs() < 1e-8);
    }
    assert!(column(&csv, "unknown_a0_upper").iter().all(|&u| u == 0.0));
}

#[test]
fn fig3b_exact_column() {
    let dir = tempfile::tempdir().unwrap();
    let csv = reproduce("fig3b", dir.path());
    let t = column(&csv, "t");
    let exact = column(&csv, "exact");
    let lo = column(&csv, "lower");
    for i in 0..t.len() {
        let e = -0.6 * t[i].exp() * (1.4 + 4.0 * t[i]);
        assert!((exact[i] - e).abs() < 1e-15);
        assert!((lo[i] - e).abs() < 1e-8);
    }
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = bin(&[
            "bounds",
            "--scenario",
            "example3",
            "--grid",
            "101",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for f in ["bounds.csv", "bounds_extremals.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn svg_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&[
        "simulate",
        "--scenario",
        "example2",
        "--svg",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("response.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));

    let out = bin(&["simulate", "--scenario", "example2", "--svg"]);
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION as i32));
}

#[test]
fn recover_round_trip() {
    let out = bin(&["recover", "--scenario", "example1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["f1"].as_f64().unwrap() - 0.3).abs() < 1e-9);
}

#[test]
fn design_writes_input_signal() {
    let out = bin(&["design", "--scenario", "example1"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let u = column(&csv, "u");
    assert_eq!(u.len(), 601);
    assert!(u.iter().all(|x| x.is_finite()));
}

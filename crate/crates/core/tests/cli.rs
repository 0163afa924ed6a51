use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_magnetogas"));
    c.env_remove("MAGNETOGAS_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["zeta", "-z", "-0.5", "-q", "1"]).status.code(), Some(0));
    // bad flag, bad value, figure number out of range
    assert_eq!(run(&["zeta", "--nope"]).status.code(), Some(2));
    assert_eq!(run(&["point", "--fermi-energy", "0.9", "--b", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "7"]).status.code(), Some(2));
    // pole and domain errors
    assert_eq!(run(&["zeta", "-z", "1", "-q", "2"]).status.code(), Some(3));
    assert_eq!(run(&["zeta", "-z", "0.5", "-q", "1", "--strategy", "direct"]).status.code(), Some(3));
    // unreachable quadrature tolerance
    let cfg = tmp("tight.ini");
    std::fs::write(&cfg, "[tolerances]\nabs_tol = 1e-300\nrel_tol = 1e-300\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "zeta", "-z", "0.5", "-q", "1", "--strategy", "hermite"]);
    assert_eq!(o.status.code(), Some(4));
    // unwritable output path
    let o = run(&["--out", "/nonexistent-dir/x.csv", "zeta", "-z", "-0.5", "-q", "1"]);
    assert_eq!(o.status.code(), Some(1));
    // unknown config key
    let bad = tmp("bad.ini");
    std::fs::write(&bad, "[grid]\nwidth = 3\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "figure", "6"]).status.code(), Some(2));
}

#[test]
fn zeta_value() {
    let o = run(&["--format", "json", "zeta", "-z", "-0.5", "-q", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = v["rows"][0]["value"].as_f64().unwrap();
    let err = v["rows"][0]["abs_error_estimate"].as_f64().unwrap();
    assert!((value + 0.2078862249773545).abs() <= err.max(1e-14));
}

#[test]
fn table_round_trip_is_bit_identical() {
    for args in [
        &["table", "--fermi-energy", "1.2,1.7", "--b", "0.05:0.3:3"][..],
        &["table", "--mu", "2", "--b", "0.31", "--temperature", "1e-3,1e-2", "--method", "series"][..],
        &["table", "--fermi-energy", "log:1.1:3:3", "--b", "0.2", "--method", "brute", "--order", "4"][..],
    ] {
        let first = run(args);
        assert!(first.status.success());
        let path = tmp("round_trip.csv");
        std::fs::write(&path, &first.stdout).unwrap();
        let second = run(&["--config", path.to_str().unwrap(), "table"]);
        assert!(second.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        // the environment variable is read the same way
        let third = bin().env("MAGNETOGAS_CONFIG", &path).arg("table").output().unwrap();
        assert_eq!(first.stdout, third.stdout);
    }
}

#[test]
fn out_flag_writes_the_file() {
    let path = tmp("point.csv");
    let o = run(&["--out", path.to_str().unwrap(), "point", "--fermi-energy", "1.5", "--b", "0.2"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines = data_lines(&text);
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("mu,temperature,b,n,omega,pressure,u,m"));
}

#[test]
fn point_rejects_grids() {
    assert_eq!(run(&["point", "--fermi-energy", "1.2,1.5", "--b", "0.1"]).status.code(), Some(2));
}

#[test]
fn pressure_is_minus_omega() {
    let o = run(&["--format", "json", "table", "--fermi-energy", "1.3,2.5", "--b", "0.1,0.7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r["pressure"].as_f64().unwrap(), -r["omega"].as_f64().unwrap());
    }
}

#[test]
fn finite_temperature_rejects_zero_t_expansions() {
    let o = run(&["point", "--mu", "2", "--b", "0.3", "--temperature", "1e-3", "--method", "small-b"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn figures_have_requested_shape() {
    let expected: [&[&str]; 6] = [
        &["eps_f", "n_b0.1", "n_b0.5"],
        &["b", "n_eps1.3", "n_eps1.5"],
        &["b", "m_eps4", "lower_eps4", "upper_eps4", "upper_eps8", "upper_eps16"],
        &["temperature", "upper_b0.1", "upper_b1", "upper_b10"],
        &["b", "upper_t1e-5", "upper_t1e-7", "sphere_line"],
        &["q", "zeta_m0.5", "zeta_m1.5", "zeta_m2.5"],
    ];
    for (i, cols) in expected.iter().enumerate() {
        let n = (i + 1).to_string();
        let o = run(&["figure", &n, "--points", "25"]);
        assert!(o.status.success(), "figure {n}");
        let text = stdout(&o);
        assert!(text.contains(&format!("# ; figure: {n}")));
        let lines = data_lines(&text);
        assert_eq!(lines[0], cols.join(","));
        assert_eq!(lines.len(), 26);
        for l in &lines[1..] {
            assert!(l.split(',').all(|x| x.parse::<f64>().map(f64::is_finite).unwrap_or(false)), "{l}");
        }
    }
}

#[test]
fn figure_output_is_deterministic() {
    let a = run(&["figure", "3", "--points", "40"]);
    let b = run(&["figure", "3", "--points", "40"]);
    assert_eq!(a.stdout, b.stdout);
}

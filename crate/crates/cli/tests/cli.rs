use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use jqf_cli::{analytic_table, execute, parse_config, parse_config_str, CliError, Command};

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const QUBITS: &str = r#"
schema_version = 1
[qubits.dq]
omega_ghz = 5.0
alpha_mhz = -300.0
gamma_mhz = 0.002
phase_pi = 0.0
[qubits.jqf]
omega_ghz = 5.0
alpha_mhz = -300.0
gamma_mhz = 100.0
phase_pi = 1.0
"#;

#[test]
fn shipped_fig2_config_parses_to_angular_units() {
    let cfg = parse_config(&repo_root().join("configs/fig2.cfg")).unwrap();
    assert!((cfg.jqf.gamma - 0.628319).abs() < 1e-6, "{}", cfg.jqf.gamma);
    assert!((cfg.dq.gamma - 1.256_64e-5).abs() < 1e-9);
    assert!((cfg.drive.omega_d.unwrap() - 2.0 * PI * 5.0017).abs() < 1e-9);
}

#[test]
fn every_shipped_config_parses() {
    for fig in [2, 3, 4, 5, 6, 7, 9] {
        let path = repo_root().join(format!("configs/fig{fig}.cfg"));
        let cfg = parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(cfg.experiment.name.is_some(), "fig{fig}");
    }
}

#[test]
fn phase_is_given_in_units_of_pi() {
    let text = QUBITS.replace("phase_pi = 0.0", "phase_pi = 0.5");
    let cfg = parse_config_str(&text).unwrap();
    assert!((cfg.dq.phase - PI / 2.0).abs() < 1e-15);
}

#[test]
fn misspelled_key_is_named_in_the_error() {
    let text = format!("{QUBITS}\n[experiment]\nsgima = 10.0\n");
    let err = parse_config_str(&text).unwrap_err();
    assert!(matches!(err, CliError::Config(_)));
    assert!(err.to_string().contains("sgima"), "{err}");
}

#[test]
fn missing_config_file_is_reported() {
    let err = parse_config(Path::new("/nonexistent/run.cfg")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/run.cfg"), "{err}");
}

#[test]
fn undriven_simulation_stays_in_ground_state() {
    let text = format!("{QUBITS}\n[sim]\nt_end_ns = 5.0\nrecord_stride = 50\n");
    let cfg = parse_config_str(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = execute(Command::Simulate, &cfg, dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t_ns,p1,p0,p2,p3,trace_err,neg"));
    let mut rows = 0;
    for line in lines {
        let p1: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(p1, 0.0, "{line}");
        rows += 1;
    }
    assert!(rows > 5);
    assert!(out.summary.starts_with("p1_final=0.000000"), "{}", out.summary);
}

#[test]
fn analytic_table_at_reference_point() {
    let table = analytic_table(5.0, -0.3, 0.016).unwrap();
    assert!(table.lines().any(|l| l == "shift_MHz=1.707"), "{table}");
    assert!(table.lines().any(|l| l == "p1_max=0.9943"), "{table}");
    for key in ["p1_max_exact=", "exact_resonance_GHz=", "E_plus_MHz=", "E_minus_MHz=", "sw_E_plus_MHz=", "sw_deficit="] {
        assert!(table.contains(key), "missing {key}");
    }
}

#[test]
fn analytic_rejects_zero_rabi() {
    assert!(matches!(analytic_table(5.0, -0.3, 0.0), Err(CliError::Usage(_))));
}

#[test]
fn simulate_matches_checked_in_golden() {
    let cfg = parse_config(&fixture("quick_simulate.cfg")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    execute(Command::Simulate, &cfg, dir.path()).unwrap();
    let got = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let want = fs::read_to_string(fixture("quick_simulate_trajectory.csv")).unwrap();
    assert!(got == want, "trajectory differs from golden");
}

#[test]
fn manifest_echoes_config_and_version() {
    let cfg = parse_config(&fixture("quick_simulate.cfg")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = execute(Command::Simulate, &cfg, dir.path()).unwrap();
    assert!(out.files.iter().any(|f| f.ends_with("manifest.txt")));
    let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(manifest.contains(&format!("tool = jqf-sim {}", env!("CARGO_PKG_VERSION"))));
    assert!(manifest.contains("command = simulate"));
    assert!(manifest.contains("status = ok"));
    assert!(manifest.ends_with(&cfg.source) || manifest.contains(cfg.source.trim_end()));
}

#[test]
fn subcommand_must_match_experiment_name() {
    let cfg = parse_config(&repo_root().join("configs/fig2.cfg")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = execute(Command::SweepSigma, &cfg, dir.path()).unwrap_err();
    let line = err.machine_line();
    assert!(line.starts_with("error kind=usage message=\""), "{line}");
    assert!(line.ends_with('"'));
}

#[test]
fn machine_line_escapes_quotes_and_newlines() {
    let err = CliError::Config("bad \"x\"\nnext".into());
    assert_eq!(err.machine_line(), r#"error kind=config message="bad \"x\"\nnext""#);
}

#[test]
fn binary_exits_nonzero_with_machine_line() {
    let out = Process::new(env!("CARGO_BIN_EXE_jqf-sim"))
        .args(["resonance", "--config", "/nonexistent/run.cfg"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.lines().any(|l| l.starts_with("error kind=io message=")), "{stderr}");
}

#[test]
fn binary_prints_analytic_table() {
    let out = Process::new(env!("CARGO_BIN_EXE_jqf-sim"))
        .args(["analytic", "--omega", "5", "--alpha", "-0.3", "--rabi", "0.016"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("shift_MHz=1.707\n"));
    assert!(stdout.contains("p1_max=0.9943\n"));
}

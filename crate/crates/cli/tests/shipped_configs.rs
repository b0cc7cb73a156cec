//! Re-runs every shipped example config and compares its CSVs byte for byte
//! with the goldens under `configs/golden/`. Regenerate those with the
//! release binary after an intentional numerical change.

use std::fs;
use std::path::{Path, PathBuf};

use jqf_cli::{execute, parse_config, Command};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn command_for(name: &str) -> Command {
    match name {
        "resonance" => Command::Resonance,
        "scan-alpha" => Command::ScanAlpha,
        "optimize-pulse" => Command::OptimizePulse,
        "sweep-sigma" => Command::SweepSigma,
        "compare" => Command::Compare,
        "njqf" => Command::Njqf,
        other => panic!("no golden runner for {other}"),
    }
}

fn check(fig: u32) {
    let cfg = parse_config(&configs().join(format!("fig{fig}.cfg"))).unwrap();
    let cmd = command_for(cfg.experiment.name.as_deref().unwrap());
    let dir = tempfile::tempdir().unwrap();
    let outcome = execute(cmd, &cfg, dir.path()).unwrap();

    let golden_dir = configs().join(format!("golden/fig{fig}"));
    let mut goldens: Vec<_> = fs::read_dir(&golden_dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    goldens.sort();
    let mut produced: Vec<_> = outcome
        .files
        .iter()
        .filter(|f| f.extension().is_some_and(|e| e == "csv"))
        .map(|f| f.file_name().unwrap().to_owned())
        .collect();
    produced.sort();
    assert_eq!(produced, goldens, "fig{fig}: output file set changed");

    for name in goldens {
        let got = fs::read_to_string(dir.path().join(&name)).unwrap();
        let want = fs::read_to_string(golden_dir.join(&name)).unwrap();
        assert!(got == want, "fig{fig}/{}: differs from golden", name.to_string_lossy());
    }
}

#[test]
fn fig2_resonance() {
    check(2);
}

#[test]
fn fig3_alpha_scan_cw() {
    check(3);
}

#[test]
fn fig4_optimal_pulse() {
    check(4);
}

#[test]
fn fig5_alpha_scan_pulse() {
    check(5);
}

#[test]
fn fig6_sigma_sweep() {
    check(6);
}

#[test]
fn fig7_cw_against_pulse() {
    check(7);
}

#[test]
fn fig9_filter_truncation() {
    check(9);
}

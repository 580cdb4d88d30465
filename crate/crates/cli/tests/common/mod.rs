//! Helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_lfcurve")
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Artifacts checked against the committed golden files: name and bytes.
/// Each call runs the binary afresh.
pub fn golden_artifacts() -> Vec<(&'static str, Vec<u8>)> {
    let registry = run(&["registry"]);
    assert_eq!(registry.code, 0, "{}", registry.stderr);

    let dir = tempfile::tempdir().expect("temp dir");
    let out_dir = dir.path().to_str().expect("utf-8 path");
    let lf = fixture("lf.csv");
    let predict = run(&[
        "predict",
        "--country",
        "Italy",
        "--lf",
        lf.to_str().expect("utf-8 path"),
        "--out-dir",
        out_dir,
        "--svg",
    ]);
    assert_eq!(predict.code, 0, "{}", predict.stderr);
    let csv = fs::read(dir.path().join("predicted.csv")).expect("predicted.csv");
    assert_eq!(csv, predict.stdout.as_bytes());
    let svg = fs::read(dir.path().join("predicted.svg")).expect("predicted.svg");

    let measured = lfcurve::app::load_csv(&fixture("ue.csv"), lfcurve::Unit::RatePerYear)
        .expect("fixture loads")
        .series
        .with_label("measured");
    let predicted = lfcurve::app::load_csv(
        &dir.path().join("predicted.csv"),
        lfcurve::Unit::RatePerYear,
    )
    .expect("prediction loads")
    .series
    .slice(measured.start_year(), measured.end_year())
    .expect("prediction covers the measured years")
    .with_label("predicted");
    let plot = dir.path().join("plot.svg");
    lfcurve::app::emit_plot("Italy unemployment", &[measured, predicted], &plot).expect("plot");
    let plot = fs::read(plot).expect("plot.svg");

    vec![
        ("registry.txt", registry.stdout.into_bytes()),
        ("predict_italy.csv", csv),
        ("predict_italy.svg", svg),
        ("plot_two_series.svg", plot),
    ]
}

/// Compares against the golden files; `LFCURVE_BLESS=1` rewrites them.
/// Returns the names that differ.
pub fn check_golden(artifacts: &[(&str, Vec<u8>)]) -> Vec<String> {
    let bless = std::env::var("LFCURVE_BLESS").is_ok_and(|v| v == "1");
    let mut mismatched = Vec::new();
    for (name, bytes) in artifacts {
        let path = golden(name);
        if bless {
            fs::create_dir_all(path.parent().expect("parent")).expect("golden dir");
            fs::write(&path, bytes).expect("write golden");
            continue;
        }
        match fs::read(&path) {
            Ok(expected) if &expected == bytes => {}
            _ => mismatched.push(name.to_string()),
        }
    }
    mismatched
}

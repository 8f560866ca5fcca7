//! End-to-end tests of the `magcx` binary: exit codes, report files, and
//! determinism of the emitted artifacts.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_magcx")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("failed to spawn magcx")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Fresh scratch directory under the target-specific temp root.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("magcx-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn eig_matches_closed_form() {
    let out = run(&["eig", "--k", "1", "--c", "2"]);
    let text = stdout(&out);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(text.contains("2.828427"), "stdout: {text}");
    assert!(text.contains("PASS"), "stdout: {text}");
}

#[test]
fn eig_rejects_zero_blocks() {
    let out = run(&["eig", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
}

#[test]
fn verify_potential_rejects_low_dimension() {
    let out = run(&["verify-potential", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
}

#[test]
fn verify_potential_passes_and_writes_report() {
    let dir = scratch("potential");
    let out = run(&[
        "verify-potential",
        "--samples",
        "200",
        "--out",
        dir.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(out.status.success(), "stdout: {text}\nstderr: {}", stderr(&out));
    assert!(text.contains("seed = 42"), "stdout: {text}");
    assert!(dir.join("potential.json").is_file());
}

#[test]
fn residual_writes_errata_and_flags_one_coefficient() {
    let dir = scratch("residual");
    let out = run(&[
        "residual",
        "--samples",
        "50",
        "--r",
        "6",
        "--n",
        "4",
        "--out",
        dir.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(out.status.success(), "stdout: {text}\nstderr: {}", stderr(&out));
    assert_eq!(text.matches("<- discrepant").count(), 1, "stdout: {text}");
    let errata = fs::read_to_string(dir.join("errata.json")).unwrap();
    assert!(errata.contains("g_const"), "errata: {errata}");
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = scratch("badkey");
    let path = dir.join("bad.conf");
    fs::write(&path, "not_a_key = 1\n").unwrap();
    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not_a_key"), "stderr: {}", stderr(&out));
}

#[test]
fn malformed_pair_is_a_usage_error() {
    let out = run(&["norms", "--pair", "6"]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
}

#[test]
fn sweep_report_roundtrip_is_deterministic() {
    let dir = scratch("sweep");
    let conf = dir.join("run.conf");
    fs::write(
        &conf,
        format!(
            "# coarse but converged: five radii over two decades\n\
             r_min = 32\nr_max = 4096\nr_points = 5\n\
             radial_nodes = 24\nz_nodes = 12\nt_nodes = 12\n\
             tolerance = 0.02\nslope_tol = 0.04\n\
             out_dir = {}\n",
            dir.display()
        ),
    )
    .unwrap();

    let out = run(&["sweep", "--config", conf.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(
        out.status.success(),
        "stdout: {text}\nstderr: {}",
        stderr(&out)
    );
    assert!(text.contains("overall: PASS"), "stdout: {text}");
    for file in [
        "sweep.csv",
        "verdict.json",
        "errata.json",
        "plot_ratio.dat",
        "plot_datum_l2.dat",
    ] {
        assert!(dir.join(file).is_file(), "missing {file}");
    }
    let verdict_first = fs::read(dir.join("verdict.json")).unwrap();
    let csv_first = fs::read(dir.join("sweep.csv")).unwrap();

    // re-judging from the stored CSV must reproduce the verdict byte for byte
    let out2 = run(&["report", "--config", conf.to_str().unwrap()]);
    assert!(
        out2.status.success(),
        "stdout: {}\nstderr: {}",
        stdout(&out2),
        stderr(&out2)
    );
    assert_eq!(fs::read(dir.join("sweep.csv")).unwrap(), csv_first);
    assert_eq!(fs::read(dir.join("verdict.json")).unwrap(), verdict_first);

    let verdict: serde_json::Value =
        serde_json::from_slice(&verdict_first).unwrap();
    assert_eq!(verdict["overall"], "PASS");
    assert_eq!(verdict["seed"], 42);
}

#[test]
fn report_without_sweep_csv_fails_cleanly() {
    let dir = scratch("noreport");
    let out = run(&["report", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
}

//! End-to-end tests of the `dirac-pt` binary: determinism, config round
//! trips and exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-pt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Data rows of a CSV dump: skip `#` headers and the column-name row.
fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().expect("float cell")).collect())
        .collect()
}

const FIG1: &[&str] = &["--cs", "-5", "--cv", "5", "--a", "2", "--b", "1"];

#[test]
fn identical_runs_are_byte_identical() {
    let args: Vec<&str> = ["sweep"]
        .iter()
        .chain(FIG1)
        .chain(&["--points", "40"])
        .copied()
        .collect();
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let base: Vec<&str> = ["sweep"]
        .iter()
        .chain(FIG1)
        .chain(&["--points", "20"])
        .copied()
        .collect();
    let to_stdout = run(&base);
    let mut to_file = base.clone();
    let path_str = path.to_str().unwrap();
    to_file.extend(["--out", path_str]);
    assert!(run(&to_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn free_particle_sweep_is_trivial() {
    let out = run(&["sweep", "--points", "12", "--emin", "1.5", "--emax", "5"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout_str(&out));
    assert_eq!(rows.len(), 12);
    for row in rows {
        // columns: e_over_m, t_lr_sq, r_lr_sq, r_rl_sq, ...
        assert!((row[1] - 1.0).abs() < 1e-12, "t_lr_sq = {}", row[1]);
        assert!(row[2].abs() < 1e-12 && row[3].abs() < 1e-12);
    }
}

#[test]
fn echoed_header_reproduces_the_run() {
    let args: Vec<&str> = ["sweep"]
        .iter()
        .chain(FIG1)
        .chain(&["--points", "25", "--emin", "-3", "--emax", "4"])
        .copied()
        .collect();
    let direct = run(&args);
    assert!(direct.status.success());
    let text = stdout_str(&direct);

    // feed the echoed `# key = value` block back in as the config file
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("replay.conf");
    let mut file = std::fs::File::create(&path).unwrap();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        writeln!(file, "{line}").unwrap();
    }
    drop(file);

    let replay = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert!(replay.status.success());
    assert_eq!(replay.stdout, direct.stdout);
}

#[test]
fn flags_override_config_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("base.conf");
    std::fs::write(&path, "cv = 5\ncs = -5\na = 2\nb = 1\npoints = 10\n").unwrap();
    let cfg = path.to_str().unwrap();
    let base = run(&["sweep", "--config", cfg]);
    let overridden = run(&["sweep", "--config", cfg, "--a", "-2"]);
    assert!(base.status.success() && overridden.status.success());
    assert!(stdout_str(&base).contains("# a = 2"));
    assert!(stdout_str(&overridden).contains("# a = -2"));
}

#[test]
fn bound_reports_the_known_state() {
    let args: Vec<&str> = ["bound"].iter().chain(FIG1).copied().collect();
    let out = run(&args);
    assert!(out.status.success());
    let rows = data_rows(&stdout_str(&out));
    assert_eq!(rows.len(), 1);
    assert!((rows[0][0] - 0.383849).abs() < 1e-4, "E/m = {}", rows[0][0]);
}

#[test]
fn check_passes_on_a_pt_spec() {
    let args: Vec<&str> = ["check"]
        .iter()
        .chain(FIG1)
        .chain(&["--energy", "2.5"])
        .copied()
        .collect();
    let out = run(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_str(&out).contains("pass"));
}

#[test]
fn check_rejects_gap_energies() {
    let args: Vec<&str> = ["check"]
        .iter()
        .chain(FIG1)
        .chain(&["--energy", "0.5"])
        .copied()
        .collect();
    let out = run(&args);
    assert!(!out.status.success());
}

#[test]
fn json_output_is_well_formed() {
    let out = run(&[
        "sweep", "--points", "6", "--emin", "2", "--emax", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 6);
    assert_eq!(value["config"]["points"], 6);
}

#[test]
fn solve_strength_returns_roots() {
    let out = run(&[
        "solve-strength",
        "--a",
        "2",
        "--b",
        "1",
        "--energy",
        "0.383849",
    ]);
    assert!(out.status.success());
    let rows = data_rows(&stdout_str(&out));
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert!(row[1].abs() < 1e-9, "round-trip residual {}", row[1]);
    }
    // the positive root must actually bind a state at the requested energy
    let cv = rows.iter().map(|r| r[0]).find(|&v| v > 0.0).unwrap();
    let cv_arg = format!("{cv}");
    let bound = run(&["bound", "--cv", &cv_arg, "--a", "2", "--b", "1"]);
    assert!(bound.status.success());
    let states = data_rows(&stdout_str(&bound));
    assert!(states.iter().any(|s| (s[0] - 0.383849).abs() < 1e-4));
}

#[test]
fn detscan_brackets_the_root() {
    let args: Vec<&str> = ["detscan"]
        .iter()
        .chain(FIG1)
        .chain(&["--points", "64"])
        .copied()
        .collect();
    let out = run(&args);
    assert!(out.status.success());
    let rows = data_rows(&stdout_str(&out));
    assert_eq!(rows.len(), 64);
    let signs: Vec<bool> = rows.iter().map(|r| r[1] > 0.0).collect();
    assert!(signs.windows(2).any(|w| w[0] != w[1]), "no sign change");
}

#[test]
fn nrlimit_gap_shrinks_with_momentum() {
    let out = run(&[
        "nrlimit",
        "--case",
        "spin",
        "--cv",
        "5",
        "--a",
        "2",
        "--b",
        "1",
        "--kmin",
        "0.05",
        "--kmax",
        "0.4",
        "--points",
        "8",
    ]);
    assert!(out.status.success());
    let rows = data_rows(&stdout_str(&out));
    assert_eq!(rows.len(), 8);
    let gaps: Vec<f64> = rows.iter().map(|r| *r.last().unwrap()).collect();
    assert!(gaps.first().unwrap() < gaps.last().unwrap());
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "coupling = 3\n").unwrap();
    let out = run(&["sweep", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
}

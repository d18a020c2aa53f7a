use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn milne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milne"))
        .args(args)
        .output()
        .unwrap()
}

fn default_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/default.json")
}

#[test]
fn spectrum_to_stdout() {
    let out = milne(&["spectrum", "--wind-speed", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,S");
    assert_eq!(lines.len(), 513);
    assert!(lines[1].starts_with("1.0000000000000000e-3,"));
}

#[test]
fn spectrum_rejects_bad_wind() {
    let out = milne(&["spectrum", "--wind-speed=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wind_speed"));
}

#[test]
fn bathymetry_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = milne(&[
        "bathymetry",
        "--zeta-max",
        "30",
        "--lh",
        "200",
        "--length",
        "1000",
        "--dx",
        "0.5",
        "--seed",
        "42",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 2001);
    assert!(text.starts_with("x,zeta\n"));
}

#[test]
fn envelope_with_time_override() {
    let out = milne(&[
        "envelope",
        "--em",
        "1",
        "--tau",
        "1",
        "--config",
        default_config().to_str().unwrap(),
        "--t0",
        "0.5",
        "--t1",
        "1.5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("t,q_squared,magnitude,imaginary_branch")
    );
    assert_eq!(text.lines().count(), 1 + 101);
}

#[test]
fn envelope_singularity_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"signal": {"amplitude": 1.0, "wave_number": 0.1}, "time": {"t1": 1.0}}"#,
    )
    .unwrap();
    let out = milne(&[
        "envelope",
        "--em",
        "1",
        "--tau",
        "1",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn transition_prints_both_forms() {
    let out = milne(&[
        "transition",
        "--em",
        "1",
        "--delta",
        "0",
        "--tau",
        "0.7853981633974483",
        "--t",
        "1",
        "--config",
        default_config().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("composed:") && text.contains("expanded:"));
    assert!(text.contains("discrepancy: 7.071067811865"), "{text}");
}

#[test]
fn simulate_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"signal": {"amplitude": -1.0, "wave_number": 0.1, "wavelength": 1.0}, "time": {"t1": 1.0}}"#,
    )
    .unwrap();
    let out = milne(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("amplitude") && err.contains("wavelength"),
        "{err}"
    );
    assert!(!dir.path().join("o").exists());
}

#[test]
fn simulate_success_and_partial() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("ok.json");
    fs::write(
        &ok,
        r#"{"signal": {"amplitude": 1.0, "sound_speed": 1.0, "wave_number": 1.0},
            "time": {"t0": -30.0, "t1": -1.0},
            "initial_condition": {"p0": 0.1, "p_dot0": 0.0}}"#,
    )
    .unwrap();
    let out = milne(&[
        "simulate",
        "--config",
        ok.to_str().unwrap(),
        "--out-dir",
        dir.path().join("a").to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in [
        "trajectory.csv",
        "envelope.csv",
        "transition.csv",
        "summary.json",
    ] {
        assert!(dir.path().join("a").join(f).exists(), "{f}");
    }

    let out = milne(&[
        "simulate",
        "--config",
        default_config().to_str().unwrap(),
        "--out-dir",
        dir.path().join("b").to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("aborted-blowup"));
    let json = fs::read_to_string(dir.path().join("b/summary.json")).unwrap();
    assert!(json.contains("\"seed\": 3"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(milne(&["spectrum"]).status.code(), Some(1));
    assert_eq!(milne(&["nonsense"]).status.code(), Some(1));
    assert_eq!(milne(&["--help"]).status.code(), Some(0));
}

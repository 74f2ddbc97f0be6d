use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn atomshift() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_atomshift"));
    c.env_remove("ATOMSHIFT_OUT_DIR");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    atomshift()
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .unwrap()
}

fn summary(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.json"))).unwrap()).unwrap()
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn plan_headline() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["plan", "--target-shift", "1.88", "--p-budget", "0.1", "--variant", "printed"],
        dir.path(),
    );
    assert!(out.status.success());
    let s = summary(dir.path(), "plan");
    assert!((s["gammaT"].as_f64().unwrap() - 999.4).abs() < 0.5);
    assert_eq!(s["variant"], "printed");
    assert_eq!(s["jump_probability"]["variant"], "printed");
    let stdout: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout, s);
}

#[test]
fn shift_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["shift", "--gamma", "1", "--detuning", "100", "--beta0", "1", "--duration", "100"],
        dir.path(),
    );
    assert!(out.status.success());
    let s = summary(dir.path(), "shift");
    let (re, im) = pair(&s["delta_alpha"]);
    assert!(re.abs() < 1e-15 && (im + 0.2).abs() < 1e-15);
    for v in ["printed", "hamiltonian"] {
        assert_eq!(s["variant_probabilities"][v]["variant"], v);
        assert_eq!(s["instantaneous_rate"][v]["variant"], v);
    }
}

#[test]
fn domain_error_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["shift", "--detuning", "0", "--beta0", "1", "--duration", "10"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("domain error"), "{err}");
    assert!(!dir.path().join("shift.json").exists());
}

#[test]
fn argument_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad: &[&[&str]] = &[
        &["shift", "--detuning", "1", "--beta0", "1", "--duration", "1", "--frobnicate", "3"],
        &["shift", "--detuning", "1", "--duration", "1"],
        &["plan", "--target-shift", "x", "--p-budget", "0.1"],
        &["teleport"],
        &["trajectory", "--detuning", "50", "--beta0", "1", "--theta", "0.2", "--duration", "10"],
    ];
    for args in bad {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("Usage") || err.contains("--help"), "{args:?}: {err}");
    }
}

#[test]
fn help_documents_every_flag() {
    for sub in ["dressed", "shift", "plan", "trajectory", "pairs", "cat", "oracle", "sweep"] {
        let out = atomshift().args([sub, "--help"]).output().unwrap();
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        for flag in ["--format", "--out-dir", "--config"] {
            assert!(text.contains(flag), "{sub} help lacks {flag}");
        }
    }
    let out = atomshift().args(["trajectory", "--help"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    for flag in ["--seed", "--runs", "--threads", "--theta", "--beta0", "--rise", "--bins", "--t-max"] {
        assert!(text.contains(flag), "trajectory help lacks {flag}");
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# shift run\ngamma = 1\ndetuning = 100\nbeta0 = 1, 0\nduration = 100\n").unwrap();
    let out = run(&["shift", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!((pair(&summary(dir.path(), "shift")["delta_alpha"]).1 + 0.2).abs() < 1e-15);

    let out = run(&["shift", "--config", cfg.to_str().unwrap(), "--duration", "400"], dir.path());
    assert!(out.status.success());
    let s = summary(dir.path(), "shift");
    assert_eq!(s["config"]["duration"], 400.0);
    assert!((pair(&s["delta_alpha"]).1 + 0.4).abs() < 1e-15);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "detuning = 100\nbeta0 = 1\nduration = 1\nwavelength = 780\n").unwrap();
    let out = run(&["shift", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap()
}

#[test]
fn summaries_round_trip_byte_identical() {
    let cases: &[(&str, &[&str])] = &[
        ("plan", &["plan", "--target-shift", "1.88", "--p-budget", "0.1", "--variant", "hamiltonian"]),
        ("shift", &["shift", "--detuning", "100", "--beta0", "0.5,-0.25", "--duration", "30", "--dt", "0.5"]),
        ("dressed", &["dressed", "--gamma", "0.3", "--detuning", "7", "--beta0", "2,1"]),
        ("cat", &["cat", "--alpha", "20", "--chi", "0.1", "--p-jump", "0.05"]),
        ("oracle", &["oracle", "--detuning", "50", "--beta0", "1", "--duration", "2"]),
        ("sweep", &["sweep", "--detunings", "50,100", "--betas", "0.1,1,-1"]),
        (
            "trajectory",
            &["trajectory", "--detuning", "50", "--theta", "0.9", "--duration", "300", "--runs", "6", "--seed", "41"],
        ),
        ("pairs", &["pairs", "--detuning", "50", "--theta", "0.3", "--domain", "time", "--intervals", "2000"]),
    ];
    for (name, args) in cases {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut args = args.to_vec();
        args.extend(["--format", "csv"]);
        assert!(run(&args, a.path()).status.success(), "{name}");
        let cfg = a.path().join(format!("{name}.json"));
        let out = run(&[name, "--config", cfg.to_str().unwrap()], b.path());
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        for file in [format!("{name}.json"), format!("{name}.csv")] {
            assert_eq!(read(a.path(), &file), read(b.path(), &file), "{file} differs");
        }
    }
}

#[test]
fn thread_count_does_not_change_artifacts() {
    let args = ["trajectory", "--detuning", "50", "--theta", "0.8", "--duration", "500", "--runs", "24", "--seed", "5", "--format", "csv"];
    let dirs: Vec<_> = ["1", "4"]
        .iter()
        .map(|t| {
            let d = tempfile::tempdir().unwrap();
            let mut a = args.to_vec();
            a.extend(["--threads", t]);
            assert!(run(&a, d.path()).status.success());
            d
        })
        .collect();
    for f in ["trajectory.json", "trajectory.csv"] {
        assert_eq!(read(dirs[0].path(), f), read(dirs[1].path(), f));
    }
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = atomshift()
        .env("ATOMSHIFT_OUT_DIR", dir.path())
        .args(["plan", "--target-shift", "1", "--p-budget", "0.1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(summary(dir.path(), "plan")["gammaT"], 80.0);
}

#[test]
fn csv_uses_header_and_plain_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["dressed", "--detuning", "100", "--beta0", "1", "--format", "csv"], dir.path());
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("dressed.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theta,phi,omega_beta,rate_up,rate_down,gamma_prime");
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row.len(), 6);
    assert!((row[2] - 100.039_992).abs() < 1e-6);
}

#[test]
fn cat_values() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["cat", "--alpha", "20", "--chi", "0.1"], dir.path()).status.success());
    let s = summary(dir.path(), "cat");
    assert!((s["overlap_abs"].as_f64().unwrap() - 0.13558).abs() < 1e-4);
    assert!((s["cat_norm_sqr"].as_f64().unwrap() - 1.833).abs() < 0.002);

    assert!(run(&["cat", "--beta0", "1", "--duration", "100", "--detuning", "100"], dir.path()).status.success());
    let s = summary(dir.path(), "cat");
    assert_eq!(s["fidelity_bound"]["printed"]["variant"], "printed");
    assert!((s["chi"].as_f64().unwrap() - 0.02).abs() < 1e-15);
}

#[test]
fn pairs_report_flags_width_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["pairs", "--detuning", "50", "--theta", "0.2", "--intervals", "32768"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "pairs");
    assert_eq!(s["report"]["closed_width_discrepancy"], true);
    assert!(s["report"]["summary"].as_str().unwrap().contains("DISCREPANCY"));
}

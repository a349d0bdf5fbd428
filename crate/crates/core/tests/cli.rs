//! End-to-end checks of the `owc-dmt` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_owc-dmt"));
    c.env_remove("OWC_DMT_LOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn outage_sim_is_byte_deterministic() {
    let args = [
        "outage-sim",
        "--nt",
        "2",
        "--nr",
        "1",
        "--r",
        "0.5",
        "--osnr-db",
        "10,20",
        "--samples",
        "20000",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[&args[..], &["--workers", "1"]].concat());
    assert_eq!(a.stdout, c.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# owc-dmt "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 2 * 2);
}

#[test]
fn out_file_gets_manifest() {
    let out = scratch("curve.csv");
    let o =
        run(&["dmt-curve", "--nt", "3", "--nr", "2", "--r", "0:0.5:2", "--seed", "17", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("r,d_lower,d_upper"));
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(scratch("curve.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "dmt-curve");
    assert_eq!(m["seed"], 17);
    assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(m["args"].as_array().unwrap().iter().any(|a| a == "--nt"));
    assert!(m["timestamp"].as_str().unwrap().ends_with('Z'));
    assert!(m["config_path"].is_null());
}

#[test]
fn exponent_check_exit_codes() {
    let small = ["exponent-check", "--max-nt", "2", "--step", "0.1", "--r-step", "0.5", "--nt", "4", "--nr", "2"];
    let ok = run(&small);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(stdout(&ok).contains("kind,objective,domain,cases"));
    let bad = run(&[&small[..], &["--corrupt", "100"]].concat());
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn help_lists_subcommands() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for sub in ["dmt-curve", "outage-sim", "coding-sim", "exponent-check", "ardo"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
    assert!(!stdout(&run(&["exponent-check", "--help"])).contains("--corrupt"));
}

#[test]
fn log_level_from_environment() {
    let args = ["exponent-check", "--max-nt", "1", "--step", "0.1", "--r-step", "0.5", "--nt", "2", "--nr", "1"];
    let quiet = run(&args);
    assert!(quiet.stderr.is_empty());
    let loud = bin().args(args).env("OWC_DMT_LOG", "debug").output().unwrap();
    assert!(String::from_utf8_lossy(&loud.stderr).contains("audit table"));
    assert_eq!(quiet.stdout, loud.stdout);
}

#[test]
fn invalid_arguments_exit_two() {
    for args in [
        &["outage-sim", "--kind", "rayleigh"][..],
        &["outage-sim", "--samples", "0"],
        &["dmt-curve", "--nt", "1", "--nr", "2"],
        &["ardo", "--r", "0:0:1"],
        &["outage-sim", "--workers", "0"],
        &["dmt-curve", "--config", "/nonexistent/cfg.json"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn config_file_overrides_channel_flags() {
    let cfg = scratch("gg.json");
    fs::write(
        &cfg,
        r#"{"n_t": 2, "n_r": 2, "amp": 1.0, "avg_power": 0.5, "noise_sigma": 1.0,
            "fading": {"kind": "gg", "rho1": 4.2, "rho2": 1.4}}"#,
    )
    .unwrap();
    let base = ["outage-sim", "--r", "0.5", "--osnr-db", "15", "--samples", "5000", "--bound", "lower"];
    let from_file = run(&[&base[..], &["--config", cfg.to_str().unwrap()]].concat());
    let from_flags = run(&[&base[..], &["--kind", "gg", "--nt", "2", "--nr", "2", "--avg-power", "0.5"]].concat());
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, from_flags.stdout);

    fs::write(&cfg, r#"{"n_t": 2, "n_r": 2, "bogus": 1}"#).unwrap();
    assert_eq!(run(&[&base[..], &["--config", cfg.to_str().unwrap()]].concat()).status.code(), Some(2));
}

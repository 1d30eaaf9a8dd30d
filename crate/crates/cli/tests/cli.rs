use std::path::Path;
use std::process::{Command, Output};

use formsums::report::csv_body;
use formsums_cli::config::{CommandKind, ExperimentConfig, HSpec};
use serde_json::Value;

fn formsums(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formsums")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn rho_of_sum_of_squares_at_65() {
    let o = formsums(&["rho", "--poly", "1 0 1", "--modulus", "65"]);
    assert!(o.status.success());
    assert_eq!(csv_body(&stdout(&o)), "modulus,count,method\n65,4,crt-combined\n");
}

#[test]
fn reduce_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reduce");
    let o = formsums(&["reduce", "--poly", "0 -1 0 1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["passed"], true);
    assert_eq!(s["assertions"].as_array().unwrap().len(), 5);

    let cert = out.join("certificate.json");
    let o = formsums(&["verify-cert", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    // lower one recorded mu; the replay is no longer integral
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let mu = doc["leaves"][0]["steps"][0]["mus"][0].as_u64().unwrap();
    doc["leaves"][0]["steps"][0]["mus"][0] = (mu - 1).into();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();
    let vout = dir.path().join("verify");
    let o = formsums(&[
        "verify-cert",
        "--certificate",
        tampered.to_str().unwrap(),
        "--out",
        vout.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let s = summary(&vout);
    assert_eq!(s["passed"], false);
    assert_eq!(s["assertions"][0]["passed"], false);
}

#[test]
fn empty_grid_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sum.toml");
    std::fs::write(&cfg, "command = \"sum\"\npoly = \"1 0 1\"\nh = \"tau\"\n").unwrap();
    let o = formsums(&["sum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`grid`"));
}

#[test]
fn config_for_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("rho.toml");
    std::fs::write(&cfg, "command = \"rho\"\npoly = \"1 0 1\"\nmoduli = [5]\n").unwrap();
    let o = formsums(&["disc", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn precondition_failures_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args, kind) in [
        ("nonprimitive", vec!["nair-check", "--poly", "2 0 2", "--h", "tau", "--grid", "50", "--threshold", "2"], "NotPrimitive"),
        ("fpd", vec!["nair-check", "--poly", "0 1 1", "--h", "tau", "--grid", "50", "--threshold", "2"], "HasFixedPrimeDivisor"),
        ("repeated", vec!["shape", "--form", "3; 1 1 0 0"], "VanishingDiscriminant"),
    ] {
        let out = dir.path().join(name);
        let mut a = args.clone();
        a.extend(["--out", out.to_str().unwrap()]);
        let o = formsums(&a);
        assert_eq!(o.status.code(), Some(1), "{name}");
        let s = summary(&out);
        assert_eq!(s["error"]["kind"], kind, "{name}: {s}");
        assert_eq!(s["passed"], false);
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let run = |jobs: &str| {
        let o = formsums(&["sum", "--form", "3; 1 0 0 2", "--h", "tau", "--grid", "40,80", "--jobs", jobs]);
        assert!(o.status.success());
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("8"));
    assert!(csv_body(&one).starts_with("X1,X2,sum,zeros_skipped\n"));
}

#[test]
fn toml_config_round_trips_through_the_binary() {
    let mut c = ExperimentConfig::new(CommandKind::BoundCheck);
    c.form = Some("2; 1 0 1".into());
    c.h = Some(HSpec::Builtin("tau".into()));
    c.grid = vec![20, 40];
    c.mode = Some(formsums_cli::BoundMode::Euler);
    c.threshold = Some("2".into());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.toml");
    std::fs::write(&path, c.to_toml()).unwrap();
    assert_eq!(ExperimentConfig::load(&path).unwrap(), c);
    let o = formsums(&["bound-check", "--config", path.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["provenance"]["config_sha256"], c.digest());
    assert_eq!(doc["records"]["rows"].as_array().unwrap().len(), 2);
}

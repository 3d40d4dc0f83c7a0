use std::process::Command;

use loewner_core::{random_instance, FamilySpec, MapFamily, ResultId, SpectrumBound};

fn lab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_loewner-lab"));
    c.env_remove("LOEWNER_LAB_SEED");
    c
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("loewner-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn small_verify_exits_zero_and_emits_json() {
    let out = lab()
        .args(["verify", "--results", "mond_pecaric", "--dims", "2", "--trials", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn seed_comes_from_env_and_flags_win() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = lab();
        c.args(["verify", "--results", "inverse_reverse", "--dims", "1", "--trials", "1"]);
        if let Some(s) = env {
            c.env("LOEWNER_LAB_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        let out = c.output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(Some("7"), None), 7);
    assert_eq!(run(Some("7"), Some("9")), 9);
}

#[test]
fn config_errors_exit_three() {
    let bad = tmp("bad.conf");
    std::fs::write(&bad, "trials = 0\n").unwrap();
    for args in [
        vec!["verify".to_string(), "--config".into(), bad.display().to_string()],
        vec!["verify".into(), "--dims".into(), "0".into()],
        vec!["verify".into(), "--bounds".into(), "0:4".into()],
        vec!["oracle".into(), "--functions".into(), "nope:1".into()],
    ] {
        let out = lab().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
    }
    let out = lab()
        .args(["verify", "--results", "mond_pecaric", "--dims", "1", "--trials", "1"])
        .env("LOEWNER_LAB_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn replay_reports_holding_and_broken_instances() {
    let bounds = SpectrumBound::new(1.0, 4.0).unwrap();
    let inst = random_instance(ResultId::MondPecaric, FamilySpec::Power(-1.0), bounds, MapFamily::Mixture, 3, 11);
    let good = tmp("good.json");
    std::fs::write(&good, serde_json::to_vec(&inst).unwrap()).unwrap();
    let out = lab().arg("replay").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let mut broken = inst.clone();
    broken.bounds = SpectrumBound::new(1.0, 1.01).unwrap();
    let bad = tmp("broken.json");
    std::fs::write(&bad, serde_json::to_vec(&broken).unwrap()).unwrap();
    let out = lab().arg("replay").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constants_csv_has_header_and_rows() {
    let out = lab()
        .args(["constants", "--bounds", "1:4", "--t", "-1,-2", "--functions", "power:-1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,4,-1,1.5625,"));
}

use std::path::Path;
use std::process::{Command, Output};

fn ddspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddspin")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

const XY3: &str = r#"{
  "chain": {"n_sites": 3, "couplings": [1, 1, 0]},
  "field": {"n_x": 1, "m_x": 2, "t_c": 0.05},
  "noise": {"tau_c": 0.5, "sigma": 2.0, "trajectories": 3, "seed": 5},
  "scheme": {"from": 1, "to": 3},
  "run": {"pictures": ["effective", "complete", "free"], "record_stride": 100, "record_pairs": [[1, 2]]}
}"#;

#[test]
fn schedule_writes_json_and_prints_durations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "xy5.json", r#"{"chain": {"n_sites": 5, "couplings": [1, 1, 0]}}"#);
    let out = dir.path().join("out");
    let o = ddspin(&["schedule", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("tau = 1.404963"), "{stdout}");
    assert!(stdout.contains("predicted |c00 c11| = 0.499"), "{stdout}");
    let schedule = ddspin::scheme::Schedule::from_json(&std::fs::read_to_string(out.join("schedule.json")).unwrap()).unwrap();
    assert_eq!(schedule.target, (1, 5));
    assert_eq!(schedule.steps.len(), 4);
}

#[test]
fn simulate_is_byte_identical_and_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "xy3.json", XY3);
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = ddspin(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        files.push(["effective", "complete", "free"].map(|p| std::fs::read(out.join(format!("{p}.csv"))).unwrap()));
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files[0][0].clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,concurrence,pair,picture"));
    assert!(text.contains(",1-3,effective"));
    assert!(text.contains(",1-2,effective"));

    // A different seed changes the noisy picture only.
    let out = dir.path().join("c");
    let o = ddspin(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "6", "--trajectories", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(std::fs::read(out.join("complete.csv")).unwrap(), files[0][1]);
    assert_eq!(std::fs::read(out.join("effective.csv")).unwrap(), files[0][0]);
}

#[test]
fn free_noiseless_column_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let json = XY3.replace(r#""sigma": 2.0"#, r#""sigma": 0.0"#).replace(r#"["effective", "complete", "free"]"#, r#"["free"]"#);
    let cfg = write_config(dir.path(), "free.json", &json);
    let out = dir.path().join("out");
    let o = ddspin(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(out.join("free.csv")).unwrap();
    let mut rows = 0;
    for rec in reader.records() {
        let value: f64 = rec.unwrap()[1].parse().unwrap();
        assert!(value < 1e-12);
        rows += 1;
    }
    assert!(rows > 10);
}

#[test]
fn verify_passes_by_default_and_probes_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "xy5.json", r#"{"chain": {"n_sites": 5, "couplings": [1, 1, 0]}}"#);
    let out = dir.path().join("out");
    let o = ddspin(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 5);

    let cfg = write_config(dir.path(), "probe.json", r#"{"chain": {"n_sites": 5, "couplings": [1, 1, 0]}, "field": {"n_x": 1, "m_x": 3, "t_c": 0.05}}"#);
    let o = ddspin(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("staggered (1, 3) N=3: |H_avg|/|H0| ="), "{stdout}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    let norms = report["staggered_probe"]["relative_norms"].as_array().unwrap();
    assert!(norms.iter().any(|e| e[1].as_f64().unwrap() > 1e-3), "{norms:?}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let same = write_config(dir.path(), "same.json", r#"{"chain": {"n_sites": 5, "couplings": [1, 1, 0]}, "scheme": {"from": 2, "to": 2}}"#);
    assert_eq!(ddspin(&["schedule", "--config", &same, "--out", out]).status.code(), Some(2));

    let fxfy = write_config(dir.path(), "fxfy.json", r#"{"chain": {"n_sites": 3, "couplings": [1, 1, 0]}, "field": {"n_x": 1, "m_x": 2, "t_c": 0.05, "n_y": 1}}"#);
    assert_eq!(ddspin(&["verify", "--config", &fxfy, "--out", out]).status.code(), Some(2));

    let garbage = write_config(dir.path(), "garbage.json", "{ not json");
    assert_eq!(ddspin(&["simulate", "--config", &garbage, "--out", out]).status.code(), Some(2));

    // An uncoupled bond never entangles |00>, so the duration search fails.
    let zz = write_config(dir.path(), "zz.json", r#"{"chain": {"n_sites": 2, "couplings": [0, 0, 0]}, "scheme": {"from": 1, "to": 2, "t_max": 5}}"#);
    assert_eq!(ddspin(&["schedule", "--config", &zz, "--out", out]).status.code(), Some(3));

    assert_eq!(ddspin(&["schedule", "--config", "/nonexistent/config.json"]).status.code(), Some(4));

    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "file in the way").unwrap();
    let ok = write_config(dir.path(), "ok.json", r#"{"chain": {"n_sites": 3, "couplings": [1, 1, 0]}, "scheme": {"from": 1, "to": 3}}"#);
    let o = ddspin(&["simulate", "--config", &ok, "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

use std::process::{Command, Output};

fn locmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locmod")).args(args).env_remove("LOCMOD_OUT_DIR").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn check_torus_prints_true() {
    let o = locmod(&["toric", "check-torus", "--n", "2", "--r", "1", "--N", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true");
}

#[test]
fn sigma_fiber_counts() {
    for (g, want) in [("1", "1"), ("2", "5"), ("3", "12")] {
        let o = locmod(&["res", "sigma-fiber", "--g", g]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), want);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(locmod(&["toric", "s-set", "--n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(locmod(&["toric", "s-set", "--n", "2", "--r", "1"]).status.code(), Some(2));
    assert_eq!(locmod(&["mu", "build", "--n", "2", "--r", "2", "--N", "1"]).status.code(), Some(2));
    assert_eq!(locmod(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn index_set_sizes() {
    assert_eq!(stdout(&locmod(&["toric", "s-set", "--n", "2", "--r", "1", "--N", "1"])), "7");
    assert_eq!(stdout(&locmod(&["toric", "s-set", "--n", "3", "--r", "1", "--N", "1"])), "16");
}

#[test]
fn artifacts_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = locmod(&["mu", "build", "--n", "2", "--r", "1", "--N", "2", "--no-timestamp", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    locmod(&["mu", "build", "--n", "2", "--r", "1", "--N", "2", "--out", c.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&c).unwrap().contains("generated_at"));
}

#[test]
fn output_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_locmod"))
        .args(["toric", "chi", "--n", "2", "--r", "1", "--N", "1", "--out", "chi.json"])
        .env("LOCMOD_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("chi.json").exists());
}

#[test]
fn verify_run_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    std::fs::write(
        &cfg,
        r#"{"checks": [
            {"check": "sigma_fiber", "params": {"g": 2}},
            {"check": "index_set", "params": {"n": 2, "r": 1, "N": 1}},
            {"check": "chain_normal_form", "params": {"n": 2, "r": 1, "d": [1, 1], "q": 5, "trials": 10}, "seed": 7}
        ]}"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let run = || {
        locmod(&["verify", "run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--no-timestamp", "--jobs", "2"])
    };
    let o = run();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(&out).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let checks: Vec<&str> = entries.iter().map(|e| e["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["chain_normal_form", "index_set", "sigma_fiber"]);
    for e in entries {
        for key in ["check", "spec", "verdict", "witness_digest", "runtime_ms"] {
            assert!(e.get(key).is_some());
        }
    }
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("check,spec,verdict,witness_digest,runtime_ms"));
    run();
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn verify_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"checks": [{"check": "no_such_check"}]}"#).unwrap();
    assert_eq!(locmod(&["verify", "run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"checks": [{"check": "chain_normal_form", "params": {"n": 2, "r": 1, "d": [1, 1], "q": 5}}]}"#).unwrap();
    assert_eq!(locmod(&["verify", "run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"checks": []}"#).unwrap();
    let o = locmod(&["verify", "run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    // g = 0 is not a valid symplectic spec: the entry fails, the report completes
    std::fs::write(&cfg, r#"{"checks": [{"check": "sigma_fiber", "params": {"g": 0}}, {"check": "sigma_fiber", "params": {"g": 1}}]}"#).unwrap();
    let o = locmod(&["verify", "run", "--config", cfg.to_str().unwrap(), "--json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
}

#[test]
fn ideal_files_round_trip_through_res() {
    let dir = tempfile::tempdir().unwrap();
    let ideal = dir.path().join("i.json");
    std::fs::write(&ideal, r#"{"field": "QQ", "vars": ["x", "y", "t"], "generators": ["t*x", "t*y^2"]}"#).unwrap();
    let o = locmod(&["res", "kill-torsion", "--ideal", ideal.to_str().unwrap(), "--json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["basis"], serde_json::json!(["x", "y^2"]));

    std::fs::write(&ideal, r#"{"field": "QQ", "vars": ["x", "y"], "generators": []}"#).unwrap();
    let o = locmod(&["res", "blowup", "--ideal", ideal.to_str().unwrap(), "--center", "x,y", "--chart", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("principal: true"));
}

#[test]
fn chain_and_symmetry_commands() {
    let o = locmod(&["chain", "normal-form", "--r", "1", "--d", "1,2", "--q", "7", "--seed", "11", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "20/20 normal forms recovered");
    assert_eq!(locmod(&["chain", "normal-form", "--r", "1", "--d", "1,1", "--q", "5"]).status.code(), Some(2));
    assert_eq!(stdout(&locmod(&["sym", "check-shift", "--n", "2", "--r", "1", "--N", "2", "--s", "-1"])), "true");
    assert_eq!(stdout(&locmod(&["sym", "check-involution", "--g", "1", "--N", "2"])), "true");
}

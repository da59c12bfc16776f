//! End-to-end checks of the `conegeo` binary: output formats and the
//! 0/2/1 exit-status convention.

use std::process::Command;

fn conegeo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conegeo"))
}

#[test]
fn metric_prints_fifteen_significant_digits() {
    let out = conegeo()
        .args([
            "metric",
            "--cone",
            r#"{"kind":"orthant","n":2}"#,
            "--kind",
            "hilbert",
            "--x",
            "1,2",
            "--y",
            "2,1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // log 4 with 15 significant digits
    assert_eq!(text.trim(), "1.38629436111989e0");
}

#[test]
fn spectral_report_has_wire_format_fields() {
    let out = conegeo()
        .args([
            "spectral",
            "--map",
            r#"{"kind":"linear","matrix":[[1.0,1.0],[1.0,1.0]]}"#,
            "--cone",
            r#"{"kind":"orthant","n":2}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["r_hat"].as_f64().unwrap(), 2.0);
    let step = &v["eps_trace"][0];
    for field in ["eps", "r_eps", "iters", "contraction"] {
        assert!(step.get(field).is_some(), "missing field {field}");
    }
    assert!(v["interior_eigenvector_found"].as_bool().unwrap());
    assert!(v.get("cw_upper").is_some() && v.get("cw_lower").is_some());
    assert!(v.get("boundary_drift").is_some());
}

#[test]
fn orbit_csv_has_documented_columns() {
    let out = conegeo()
        .args([
            "orbit",
            "--map",
            r#"{"kind":"linear","matrix":[[1.0,0.5],[0.0,1.0]]}"#,
            "--cone",
            r#"{"kind":"orthant","n":2}"#,
            "--x0",
            "1,1",
            "--mode",
            "thompson",
            "--kmax",
            "50",
            "--horo-y",
            "1,0",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,x0,x1,log_gauge,thompson_step,hilbert_step,interior_gap,hF,hR,hH"
    );
    assert_eq!(lines.count(), 51);
    // hF and hH stay blank when only y was supplied
    let second = text.lines().nth(2).unwrap();
    let cells: Vec<&str> = second.split(',').collect();
    assert!(cells[7].is_empty() && cells[9].is_empty());
    assert!(!cells[8].is_empty());
}

#[test]
fn dw_report_exits_two_when_hypotheses_unmet() {
    let dir = tempfile::tempdir().unwrap();
    let starts = dir.path().join("starts.json");
    std::fs::write(&starts, "[[1.0, 2.0]]").unwrap();
    let out = conegeo()
        .args([
            "report",
            "dw",
            "--map",
            r#"{"kind":"linear","matrix":[[1.0,1.0],[1.0,1.0]]}"#,
            "--cone",
            r#"{"kind":"orthant","n":2}"#,
            "--starts",
            starts.to_str().unwrap(),
            "--kmax",
            "200",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["hypotheses_met"].as_bool().unwrap());
    assert!(v["interior_eigenvector_found"].as_bool().unwrap());
}

#[test]
fn malformed_input_exits_one() {
    // empty config
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, "{}").unwrap();
    let out = conegeo().args(["run", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    // dimension mismatch
    let out = conegeo()
        .args([
            "metric",
            "--cone",
            r#"{"kind":"orthant","n":2}"#,
            "--kind",
            "funk",
            "--x",
            "1,2,3",
            "--y",
            "2,1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // unknown cone kind
    let out = conegeo()
        .args([
            "metric",
            "--cone",
            r#"{"kind":"moebius","n":2}"#,
            "--kind",
            "funk",
            "--x",
            "1,2",
            "--y",
            "2,1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_config_produces_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(
        &cfg,
        r#"{
            "cone": { "kind": "psd", "n": 2 },
            "map": { "kind": "congruence", "m": [[1.0,1.0],[0.0,1.0]] },
            "task": "dw-report",
            "params": {
                "starts": [[1.0, 0.0, 1.0]],
                "k_max": 1000,
                "gauge": { "kind": "dual", "phi": [1.0, 0.0, 1.0] }
            },
            "output": "out/dw.json",
            "seed": 3
        }"#,
    )
    .unwrap();
    let out = conegeo().args(["run", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("out/dw.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!(v["hypotheses_met"].as_bool().unwrap());
    assert!(v["common_functional"].is_object());
}

#[test]
fn shipped_configs_run() {
    // the repository configs stay valid; outputs are redirected to a
    // temporary directory
    let repo_configs = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs");
    for (name, check) in [
        ("perron.json", "r_hat"),
        ("parabolic.json", "common_functional"),
    ] {
        let text = std::fs::read_to_string(repo_configs.join(name)).unwrap();
        let mut cfg: conegeo_cli::ExperimentConfig = serde_json::from_str(&text).unwrap();
        cfg.output = Some("artifact.json".into());
        let dir = tempfile::tempdir().unwrap();
        let code = conegeo_cli::run(&cfg, dir.path()).unwrap();
        assert_eq!(code, 0, "{name}");
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("artifact.json")).unwrap())
                .unwrap();
        assert!(v.get(check).is_some(), "{name}: missing {check}");
        if name == "perron.json" {
            assert!((v["r_hat"].as_f64().unwrap() - 2.0).abs() < 1e-8);
        }
        if name == "parabolic.json" {
            // phi(X) = X_22 annihilates the common omega-limit
            let phi = v["common_functional"]["coords"].as_array().unwrap();
            let dir_z = phi[2].as_f64().unwrap();
            assert!((dir_z - 1.0).abs() < 1e-2);
        }
    }
    // the orbit config emits a CSV trace
    let text = std::fs::read_to_string(repo_configs.join("parabolic-orbit.json")).unwrap();
    let mut cfg: conegeo_cli::ExperimentConfig = serde_json::from_str(&text).unwrap();
    cfg.output = Some("trace.csv".into());
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(conegeo_cli::run(&cfg, dir.path()).unwrap(), 0);
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.starts_with("k,x0,x1,x2,log_gauge"));
}

#[test]
fn horo_eval_matches_closed_form() {
    // h_R on Psd(2) with base I at X = diag(2,1): log(c/det X) = log(1/2)
    let out = conegeo()
        .args([
            "horo",
            "--cone",
            r#"{"kind":"psd","n":2}"#,
            "--kind",
            "hR",
            "--param-y",
            "1,0,0",
            "--x",
            "2,0,1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 0.5f64.ln()).abs() < 1e-12);
}

#[test]
fn env_seed_overrides_config_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(
        &cfg,
        r#"{
            "cone": { "kind": "psd", "n": 2 },
            "map": { "kind": "congruence", "m": [[1.0,1.0],[0.0,1.0]] },
            "task": "horo",
            "params": {
                "kind": "hH",
                "y": [1.0, 0.0, 0.0],
                "z": [0.0, 0.0, 1.0],
                "check_wolff": true,
                "r_hat": 1.0,
                "samples": 5
            },
            "output": "wolff.json",
            "seed": 3
        }"#,
    )
    .unwrap();
    let run_with = |seed: Option<&str>| {
        let mut cmd = conegeo();
        cmd.args(["run", cfg.to_str().unwrap()]);
        match seed {
            Some(s) => cmd.env("CONEGEO_SEED", s),
            None => cmd.env_remove("CONEGEO_SEED"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        std::fs::read(dir.path().join("wolff.json")).unwrap()
    };
    let base = run_with(None);
    let same = run_with(Some("3"));
    let other = run_with(Some("99"));
    assert_eq!(base, same);
    assert_ne!(base, other);
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hyperlab(dir: &Path, config: &str, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_hyperlab"))
        .arg("--config")
        .arg(&path)
        .args(extra)
        .env_remove("HYPERLAB_OUT")
        .current_dir(dir)
        .output()
        .unwrap()
}

fn out_arg(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn lists_all_experiments() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperlab")).arg("--list-experiments").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "approximate",
        "isolate",
        "mz-probe",
        "turing-gap",
        "myers",
        "h2-table",
        "minimal-classes",
        "example-3-1",
        "functorial-probe",
    ] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name} missing");
    }
}

#[test]
fn approximate_csv_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"experiment":"approximate","group":"G_alpha","ns":[2,4,8,16],"eps":0.02}"#;
    let a = hyperlab(dir.path(), config, &["--out", &out_arg(dir.path(), "a"), "--seed", "5"]);
    let b = hyperlab(dir.path(), config, &["--out", &out_arg(dir.path(), "b"), "--seed", "5"]);
    assert!(a.status.success() && b.status.success());
    let first = fs::read_to_string(dir.path().join("a/approximate.csv")).unwrap();
    let second = fs::read_to_string(dir.path().join("b/approximate.csv")).unwrap();
    assert_eq!(first, second);
    assert!(first.contains("# seed: 5\n"));
    assert!(first.contains("# config_sha256: "));
    let rows: Vec<&str> = first.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,estimate,error_bound,lower_bound,decreasing");
    assert_eq!(rows.len(), 5);
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));
}

#[test]
fn config_hash_tracks_config_bytes() {
    let dir = TempDir::new().unwrap();
    let hash = |config: &str, sub: &str| {
        assert!(hyperlab(dir.path(), config, &["--out", &out_arg(dir.path(), sub)]).status.success());
        read_json(&dir.path().join(sub).join("example-3-1.json"))["provenance"]["config_sha256"].clone()
    };
    let a = hash(r#"{"experiment":"example-3-1"}"#, "a");
    let b = hash(r#"{"experiment": "example-3-1"}"#, "b");
    assert_ne!(a, b);
}

#[test]
fn search_is_deterministic_given_seed() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"experiment":"mz-probe","h":{"kind":"conjugate","inner":{"kind":"rotations","name":"C6"},"coords":[0.3,0.1,0]},"k":{"kind":"rotations","name":"C6"},"budget":60,"restarts":3,"seed":11}"#;
    let run = |sub: &str| {
        assert!(hyperlab(dir.path(), config, &["--out", &out_arg(dir.path(), sub)]).status.success());
        fs::read_to_string(dir.path().join(sub).join("mz-probe.json")).unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["provenance"]["seed"], 11);
    assert!(v["result"]["residual"].as_f64().unwrap() <= v["result"]["baseline"].as_f64().unwrap());
}

#[test]
fn example_reproduces_quotients_and_centers() {
    let dir = TempDir::new().unwrap();
    assert!(hyperlab(dir.path(), r#"{"experiment":"example-3-1","output":"res"}"#, &[]).status.success());
    let v = read_json(&dir.path().join("res/example-3-1.json"));
    let r = &v["result"];
    assert_eq!(r["alpha_lattice"]["equals_beta"], true);
    assert_eq!(r["beta_lattice"]["induced"], serde_json::json!([[1, 2], [0, -1]]));
    assert_eq!(r["beta_lattice"]["is_diag_1_minus_1"], true);
    assert_eq!(r["centers"]["G_alpha"]["components"], 2);
    assert_eq!(r["centers"]["G_beta"]["components"], 1);
}

#[test]
fn myers_for_so3() {
    let dir = TempDir::new().unwrap();
    let out = hyperlab(dir.path(), r#"{"experiment":"myers","algebra":"so3","mesh":0.1}"#, &["--out", "res"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &read_json(&dir.path().join("res/myers.json"))["result"];
    assert_eq!(r["ric_min"], 0.5);
    assert!((r["delta"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(r["coverage"], true);
}

#[test]
fn output_directory_precedence() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, r#"{"experiment":"isolate","output":"from-config"}"#).unwrap();
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_hyperlab"))
            .arg("--config")
            .arg(&path)
            .args(args)
            .env("HYPERLAB_OUT", "from-env")
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
    };
    run(&[]);
    assert!(dir.path().join("from-env/isolate.csv").exists());
    assert!(!dir.path().join("from-config").exists());
    run(&["--out", "from-flag"]);
    assert!(dir.path().join("from-flag/isolate.csv").exists());
}

#[test]
fn schema_violations_exit_2() {
    let dir = TempDir::new().unwrap();
    for config in [
        "not json",
        "[1, 2]",
        r#"{"experiment":"nope"}"#,
        r#"{"ns":[2]}"#,
        r#"{"experiment":"approximate","group":"T","ns":[2],"extra":true}"#,
        r#"{"experiment":"approximate","group":"Q8","ns":[2]}"#,
        r#"{"experiment":"approximate","group":"SO3","ns":[2]}"#,
        r#"{"experiment":"approximate","group":"T","ns":[0]}"#,
        r#"{"experiment":"myers","algebra":"so3","seed":"x"}"#,
        r#"{"experiment":"turing-gap","candidates":["C1","X9"]}"#,
        r#"{"experiment":"mz-probe","h":{"kind":"grid","n":3},"k":{"kind":"full"}}"#,
    ] {
        let out = hyperlab(dir.path(), config, &["--out", "res"]);
        assert_eq!(out.status.code(), Some(2), "{config}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(!dir.path().join("res").exists());
}

#[test]
fn experiment_failures_exit_1_with_record() {
    let dir = TempDir::new().unwrap();
    let out = hyperlab(dir.path(), r#"{"experiment":"myers","algebra":"u2","seed":4}"#, &["--out", "res"]);
    assert_eq!(out.status.code(), Some(1));
    let record = read_json(&dir.path().join("res/myers.error.json"));
    assert_eq!(record["provenance"]["seed"], 4);
    assert_eq!(record["error"]["experiment"], "myers");
    assert!(record["error"]["message"].as_str().unwrap().contains("semisimple"));
    assert!(!dir.path().join("res/myers.json").exists());
}

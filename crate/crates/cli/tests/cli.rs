use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_walker-env")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn walker_env(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const EXPANSION: &str = r#"
experiment = "expansion-check"
master_seed = 3

[geometry]
dim = 1

[env]
kind = "site-chain"
transition = [[0.7, 0.3], [0.4, 0.6]]

[kernel]
radius = 0
rows = [[0.4, 0.4, 0.2], [0.1, 0.3, 0.6]]

[expansion]
k = 3
"#;

#[test]
fn expansion_check_reports_tiny_residual() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", EXPANSION);
    let out = dir.path().join("out");
    let o = walker_env(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("expansion-check.json")).unwrap()).unwrap();
    let residual: f64 = json["metrics"]["partition_residual"].as_f64().unwrap();
    assert!(residual < 1e-9);
    assert_eq!(json["master_seed"], 3);
    assert_eq!(json["config_digest"].as_str().unwrap().len(), 64);
    assert_eq!(json["checks"]["partition_residual_below_1e-9"], true);
}

#[test]
fn budget_exceeded_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", &EXPANSION.replace("k = 3", "k = 3\nbudget = 10"));
    let o = walker_env(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn short_row_is_a_config_error_naming_the_patch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", &EXPANSION.replace("[0.1, 0.3, 0.6]", "[0.1, 0.3, 0.5]"));
    for sub in ["run", "validate"] {
        let o = walker_env(&[sub, "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("kernel row for patch 1 sums to 0.900000000000"), "{}", stderr(&o));
    }
    assert!(!dir.path().join("expansion-check.csv").exists());
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", &EXPANSION.replace("k = 3", "k = 3\ndepth = 4"));
    let o = walker_env(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("depth"), "{}", stderr(&o));
}

#[test]
fn undersized_torus_names_required_side() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.toml", &EXPANSION.replace("dim = 1", "dim = 1\nside = 9"));
    let o = walker_env(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("need L >= 15"), "{}", stderr(&o));
}

#[test]
fn ising_above_threshold_only_warns() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("dp-check.toml")).unwrap().replace("beta = 0.1", "beta = 0.3");
    let cfg = write(dir.path(), "dp.toml", &text);
    let o = walker_env(&["validate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("pca.p_star"));
}

#[test]
fn rows_csv_matches_inline_rows() {
    let dir = tempfile::tempdir().unwrap();
    let inline = std::fs::read_to_string(configs().join("rn-table.toml"))
        .unwrap()
        .replace("rows_csv = \"rn-kernel.csv\"", "rows = [[0.6, 0.3, 0.1], [0.1, 0.3, 0.6]]");
    let cfg = write(dir.path(), "rn.toml", &inline);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let csv_cfg = configs().join("rn-table.toml");
    assert!(walker_env(&["run", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.success());
    assert!(walker_env(&["run", "--config", csv_cfg.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.success());
    for f in ["rn-table.csv", "rn-table.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_override_changes_results_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("lln.toml");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(walker_env(&["run", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.success());
    assert!(walker_env(&["run", "--config", cfg.to_str().unwrap(), "--seed", "99", "--out", b.to_str().unwrap()]).status.success());
    assert_ne!(std::fs::read(a.join("lln.csv")).unwrap(), std::fs::read(b.join("lln.csv")).unwrap());
    let ja: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("lln.json")).unwrap()).unwrap();
    let jb: serde_json::Value = serde_json::from_slice(&std::fs::read(b.join("lln.json")).unwrap()).unwrap();
    assert_ne!(ja["config_digest"], jb["config_digest"]);
    assert_eq!(jb["master_seed"], 99);
}

#[test]
fn thread_count_does_not_change_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("sdp-check.toml");
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    assert!(walker_env(&["run", "--config", cfg.to_str().unwrap(), "--threads", "1", "--out", one.to_str().unwrap()]).status.success());
    assert!(walker_env(&["run", "--config", cfg.to_str().unwrap(), "--threads", "4", "--out", four.to_str().unwrap()]).status.success());
    for f in ["sdp-check.csv", "sdp-check.json"] {
        assert_eq!(std::fs::read(one.join(f)).unwrap(), std::fs::read(four.join(f)).unwrap(), "{f}");
    }
}

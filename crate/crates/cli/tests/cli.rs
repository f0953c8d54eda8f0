use std::path::Path;
use std::process::{Command, Output};

fn cogs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogs")).args(args).env("COGS_THREADS", "1").output().expect("spawn cogs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_f6_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f6");
    let o = cogs(&["construct", "--kind", "f6", "--group", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&out.join("report.json"));
    assert!(report["analytic_loss"].as_f64().unwrap() <= 1e-10);
    assert!(report["forward_loss"].as_f64().unwrap() <= 1e-10);
    assert_eq!(report["accuracy"].as_f64(), Some(1.0));
    assert_eq!(report["global_check"].as_bool(), Some(true));
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["command"], "construct");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn construct_memorization_has_order_d_squared() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mem");
    let o = cogs(&["construct", "--kind", "mem", "--group", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("order 9"));
    assert_eq!(json(&out.join("report.json"))["order"], 9);
}

#[test]
fn construct_even_group_notes_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let o = cogs(&["construct", "--kind", "f6", "--group", "6", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("note: even-order"));
    assert!(json(&dir.path().join("report.json"))["analytic_loss"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn analyze_f46_finds_one_order_six_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f46");
    let o = cogs(&["construct", "--kind", "f46", "--group", "11", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&out.join("report.json"))["global_check"].as_bool(), Some(false));
    let rep = dir.path().join("report.json");
    let o = cogs(&[
        "analyze",
        "--weights",
        out.join("weights.json").to_str().unwrap(),
        "--out",
        rep.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("{4:4, 6:1}"), "{}", stdout(&o));
    let report = json(&rep);
    assert_eq!(report["summary"]["matched"], 5);
    assert!(!report["parameter_samples"].as_array().unwrap().is_empty());
}

#[test]
fn table1_prints_every_generator() {
    let o = cogs(&["table1", "--group", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["one_k", "pseudo_one", "u_one", "u_syn", "u_3c", "u_3a", "u_4c", "u_4a", "u_nu"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "missing {name}");
    }
}

#[test]
fn train_writes_artifacts_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = cogs(&["train", "--group", "5", "--q", "6", "--epochs", "60", "--snapshot-every", "20", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["weights.json", "trace.csv", "sp_trace.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_eq!(json(&a.join("manifest.json"))["input_hash"], json(&b.join("manifest.json"))["input_hash"]);

    let dyn_csv = dir.path().join("dyn.csv");
    let o = cogs(&["dynamics", "--trace", a.join("sp_trace.csv").to_str().unwrap(), "--out", dyn_csv.to_str().unwrap()]);
    assert!(o.status.success());
    // snapshots at 0, 20, 40, 60
    assert_eq!(std::fs::read_to_string(&dyn_csv).unwrap().lines().count(), 5);

    let svg = dir.path().join("loss.svg");
    let o = cogs(&["plot", "--in", a.join("trace.csv").to_str().unwrap(), "--svg", svg.to_str().unwrap(), "--y", "train_loss,test_loss"]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn sweep_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = cogs(&[
        "sweep", "--group", "5", "--q", "6", "--wd", "1e-4,1e-3", "--seeds", "2", "--epochs", "40", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert_eq!(std::fs::read_dir(dir.path().join("runs")).unwrap().count(), 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(cogs(&["construct", "--kind", "f6", "--group", "0", "--out", d]).status.code(), Some(2));
    assert_eq!(cogs(&["train", "--group", "5", "--q", "0", "--out", d]).status.code(), Some(2));
    assert_eq!(cogs(&["analyze", "--weights", "/nonexistent/w.json", "--out", d]).status.code(), Some(4));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(cogs(&["analyze", "--weights", bad.to_str().unwrap(), "--out", d]).status.code(), Some(2));
    let dv = dir.path().join("dv");
    let o = cogs(&["train", "--group", "5", "--q", "4", "--epochs", "5", "--init-std", "1e80", "--out", dv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(dv.join("trace.csv").exists());
    let o = Command::new(env!("CARGO_BIN_EXE_cogs"))
        .args(["sweep", "--group", "5", "--q", "4", "--wd", "0", "--seeds", "1", "--epochs", "1", "--out", d])
        .env("COGS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

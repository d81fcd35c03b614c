use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mavar() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mavar"));
    cmd.env_remove("MAVAR_OUT_DIR");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn mavar")
}

fn generate(dir: &Path, name: &str, spec: &str, contaminants: Option<&str>) -> PathBuf {
    let out = dir.join(name);
    let mut cmd = mavar();
    cmd.args(["generate", "--spec", spec, "--out"]).arg(&out);
    if let Some(c) = contaminants {
        cmd.args(["--contaminants", c]);
    }
    let o = run(&mut cmd);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn read_values(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"H":0.75,"N":1024,"seed":7}"#;
    let a = generate(dir.path(), "a.txt", spec, None);
    let b = generate(dir.path(), "b.txt", spec, None);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_values(&a).len(), 1024);

    let meta = read_json(&dir.path().join("a.txt.meta.json"));
    assert_eq!(meta["spec"]["seed"], 7);
    assert!((meta["hurst"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn step_contaminant_shifts_the_tail_by_its_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"H":0.75,"N":1024,"seed":7}"#;
    let clean = read_values(&generate(dir.path(), "clean.txt", spec, None));
    let stepped = read_values(&generate(
        dir.path(),
        "step.txt",
        spec,
        Some(r#"{"kind":"step","A":1,"M":512}"#),
    ));
    for (k, (c, s)) in clean.iter().zip(&stepped).enumerate() {
        let expected = if k >= 512 { 1.0 } else { 0.0 };
        assert!((s - c - expected).abs() < 1e-9, "sample {k}: {c} -> {s}");
    }
}

#[test]
fn out_of_range_hurst_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(mavar()
        .args(["generate", "--spec", r#"{"H":1.2,"N":1024}"#, "--out"])
        .arg(dir.path().join("x.txt")));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[0.5, 1.0]"));
}

#[test]
fn constant_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.txt");
    std::fs::write(&input, "3.0\n".repeat(4096)).unwrap();
    let o = run(mavar()
        .args(["analyze", "--tau0", "1", "--out"])
        .arg(dir.path())
        .arg(&input));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate series"));
}

#[test]
fn unparsable_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    std::fs::write(&input, "1.0\nabc\n2.0\n").unwrap();
    let o = run(mavar()
        .args(["analyze", "--tau0", "1", "--out"])
        .arg(dir.path())
        .arg(&input));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn analyze_recovers_hurst_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let mut estimates = Vec::new();
    for seed in 0..4 {
        let spec = format!(r#"{{"H":0.8,"N":131072,"seed":{seed}}}"#);
        let input = generate(dir.path(), &format!("s{seed}.txt"), &spec, None);
        let o = run(mavar()
            .args(["analyze", "--tau0", "1", "--out"])
            .arg(dir.path())
            .arg(&input));
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let report = read_json(&dir.path().join(format!("s{seed}.estimate.json")));
        assert_eq!(report["method"], "mavar");
        assert_eq!(report["lrd_valid"], true);
        estimates.push(report["H"].as_f64().unwrap());
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    assert!((mean - 0.8).abs() < 0.02, "estimates {estimates:?}");
}

#[test]
fn analyze_writes_segments_and_baselines_to_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let input = generate(dir.path(), "trace.txt", r#"{"H":0.7,"N":16384,"seed":3}"#, None);
    let o = run(mavar()
        .env("MAVAR_OUT_DIR", &out)
        .args(["analyze", "--tau0", "0.008", "--segments", "2", "--methods", "mavar,vtp,periodogram,haarld", "--format", "json"])
        .arg(&input));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let curve = read_json(&out.join("trace.mavar.json"));
    assert!(!curve["points"].as_array().unwrap().is_empty());

    let seg = read_json(&out.join("trace.segments.json"));
    assert_eq!(seg["segments"].as_array().unwrap().len(), 2);
    assert_eq!(seg["breakpoints"].as_array().unwrap().len(), 1);

    let baselines = read_json(&out.join("trace.baselines.json"));
    let methods: Vec<&str> = baselines
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["vtp", "periodogram", "haarld"]);
}

#[test]
fn accuracy_command_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(mavar()
        .args(["accuracy", "--hurst", "0.6,0.9", "--lengths", "1024", "--seeds", "1", "--methods", "mavar,haarld", "--out"])
        .arg(dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines[0].starts_with("method,H_true,N,mean_err,std_err"));
    assert_eq!(lines.len(), 1 + 2 * 2);
    assert!(lines[1..].iter().all(|l| l.contains("single-seed")));
    assert!(dir.path().join("accuracy.csv").exists());
    assert!(dir.path().join("accuracy_replicates.csv").exists());
}

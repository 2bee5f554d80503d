use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nlrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlrd"))
        .args(args)
        .env("NLRD_LOG", "warn")
        .output()
        .unwrap()
}

fn preset_toml(name: &str) -> String {
    let o = nlrd(&["--preset", name, "--desk", "--print-config"]);
    assert!(o.status.success());
    String::from_utf8(o.stdout).unwrap()
}

/// A short σ = 3.4 free-boundary run.
fn small_config(dir: &Path) -> String {
    preset_toml("pulse-exp-free")
        .replace("m = 1024", "m = 256")
        .replace("horizon = 300.0", "horizon = 2.0")
        .replace("checkpoint_every = 1000", "checkpoint_every = 20")
        .replace("dir = \"out\"", &format!("dir = {:?}", dir.display().to_string()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn simulate_writes_profile_history_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let cfg = write(tmp.path(), "run.toml", &small_config(&out));
    let o = nlrd(&["--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let profile = fs::read_to_string(out.join("profile.csv")).unwrap();
    let history = fs::read_to_string(out.join("history.csv")).unwrap();
    assert!(profile.starts_with("x,u,v\n") && history.starts_with("step,t,max_update\n"));
    assert!(!profile.contains('\r'));
    assert_eq!(profile.lines().count(), 258);
    assert_eq!(history.lines().count(), 101);
    for line in profile.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 3);
        for c in cols {
            assert!(c.contains('e'), "{c}");
            c.parse::<f64>().unwrap();
        }
    }
    assert!(out.join("plot.py").exists() && out.join("checkpoint.csv").exists());

    let again = tmp.path().join("again");
    let cfg2 = write(tmp.path(), "again.toml", &small_config(&again));
    assert!(nlrd(&["--config", &cfg2]).status.success());
    assert_eq!(fs::read(out.join("profile.csv")).unwrap(), fs::read(again.join("profile.csv")).unwrap());
}

#[test]
fn invalid_config_exits_2_with_line() {
    let tmp = tempfile::tempdir().unwrap();
    let text = small_config(tmp.path()).replace("dt = 0.02", "dt = -0.02");
    let line = text.lines().position(|l| l.starts_with("dt =")).unwrap() + 1;
    let cfg = write(tmp.path(), "bad.toml", &text);
    let o = nlrd(&["--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(&format!("line {line}")), "{err}");

    let cfg = write(tmp.path(), "typo.toml", &small_config(tmp.path()).replace("[kernel]", "[kernel]\nwidth = 3"));
    let o = nlrd(&["--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    assert_eq!(nlrd(&["--preset", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(nlrd(&[]).status.code(), Some(2));
}

#[test]
fn divergence_exits_3_and_keeps_checkpoint() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("blowup");
    let text = small_config(&out)
        .replace("dt = 0.02", "dt = 5.0")
        .replace("horizon = 2.0", "horizon = 5000.0")
        .replace("checkpoint_every = 20", "checkpoint_every = 1");
    let cfg = write(tmp.path(), "blowup.toml", &text);
    let o = nlrd(&["--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let ckpt = fs::read_to_string(out.join("checkpoint.csv")).unwrap();
    assert!(ckpt.starts_with("x,u,v\n"));
    assert!(ckpt.lines().skip(1).all(|l| l.split(',').all(|c| c.parse::<f64>().unwrap().is_finite())));
}

#[test]
fn determinant_far_field_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("det");
    let text = small_config(&out).replace("kind = \"simulate\"", "kind = \"determinant\"");
    let cfg = write(tmp.path(), "det.toml", &text);
    let o = nlrd(&["--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let det = fs::read_to_string(out.join("determinant.csv")).unwrap();
    let e2 = 1.0 / (3.4f64 * 3.4);
    let expected = (1.0 + e2 * 0.01) * (0.01 + e2 * 0.10772173450159418);
    let rows: Vec<f64> = det.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for r in rows.iter().take(5).chain(rows.iter().rev().take(5)) {
        assert!(((r - expected) / expected).abs() < 1e-12, "{r} vs {expected}");
    }
}

#[test]
fn mms_preset_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("mms");
    let o = nlrd(&["--preset", "mms-benchmark", "--desk", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(report.starts_with("M,h,dt,error_u,order_u,error_v,order_v\n"));
    assert_eq!(report.lines().count(), 5);
}

#[test]
fn seed_check_and_listing() {
    let o = nlrd(&["--seed-check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    let o = nlrd(&["--list-presets"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("pulse-alg039-free"));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            let cfg = nonlocal_rd::config::RunConfig::from_file(&p).unwrap();
            cfg.validate().unwrap();
            n += 1;
        }
    }
    assert!(n >= 5);
}

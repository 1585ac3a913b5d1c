use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn diffeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffeo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fill_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let horn = dir.path().join("horn.json");
    let filler = dir.path().join("filler.json");
    assert!(diffeo(&["example", "horn", "--n", "3", "--output", path(&horn), "--seed", "4"]).status.success());
    let out =
        diffeo(&["fill", "abelian", "--n", "3", "--input", path(&horn), "--output", path(&filler), "--budget", "300"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = json(&out);
    assert_eq!(rep["pass"], true);
    assert!(rep["samples_used"].as_u64().unwrap() >= 300);
    assert!(fs::read_to_string(&filler).unwrap().contains("outputs"));

    let wrong_n = diffeo(&["fill", "abelian", "--n", "2", "--input", path(&horn)]);
    assert_eq!(wrong_n.status.code(), Some(2));
}

#[test]
fn lift_and_realize_from_examples() {
    let dir = tempfile::tempdir().unwrap();
    let horn = dir.path().join("s1.json");
    assert!(diffeo(&["example", "s1-horn", "--n", "2", "--output", path(&horn)]).status.success());
    let out = diffeo(&["lift", "s1-horn", "--input", path(&horn), "--budget", "500"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pass"], true);

    let sset = dir.path().join("square.json");
    assert!(diffeo(&["example", "sset", "square", "--output", path(&sset)]).status.success());
    let seams = json(&diffeo(&["realize", "--input", path(&sset), "--report", "seams"]));
    assert_eq!(seams["by_dim"]["1"], 1);
    let cells = json(&diffeo(&["realize", "--input", path(&sset), "--report", "cells"]));
    assert_eq!(cells["dim"], 2);

    let horn31 = dir.path().join("horn.json");
    assert!(diffeo(&["example", "sset", "horn3_1", "--output", path(&horn31)]).status.success());
    let probe = diffeo(&["realize", "--input", path(&horn31), "--report", "product-probe", "--budget", "300"]);
    assert!(probe.status.success(), "{}", String::from_utf8_lossy(&probe.stdout));
    let ids = diffeo(&["verify", "identities", "--input", path(&horn31)]);
    assert!(ids.status.success());
}

#[test]
fn verify_and_obstruction_commands() {
    let eq = diffeo(&["verify", "equidef", "--pair", "5,6", "--n", "2", "--eps", "0.2", "--budget", "200"]);
    assert!(eq.status.success());
    assert!(json(&eq)["recorded"]["positivity_guard.delta"].as_f64().unwrap() > 0.0);

    let circle = diffeo(&["verify", "circle-retract", "--eps", "0.2", "--budget", "2000"]);
    assert!(circle.status.success());
    let kinked = diffeo(&["verify", "circle-retract", "--eps", "0.2", "--budget", "2000", "--unblended"]);
    assert_eq!(kinked.status.code(), Some(1));

    let half = json(&diffeo(&["obstruction", "halfline"]));
    assert_eq!(half["h2_exact"], serde_json::json!([-6, 1]));
    let rank = diffeo(&["obstruction", "rank", "--n", "3", "--m", "2"]);
    assert!(rank.status.success());
    assert_eq!(json(&rank)["jacobian_rank"], 2);

    let dopen = diffeo(&["retract", "dopen", "--n", "2", "--delta", "0.5", "--budget", "2000"]);
    assert!(dopen.status.success());
    let bad = diffeo(&["retract", "dopen", "--n", "2", "--delta", "-1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn tolerance_flag_rejudges_reports() {
    // 1e-20 is below the circle retract's floating-point residual
    let out = diffeo(&["verify", "circle-retract", "--budget", "500", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["tolerance"], 1e-20);
}

#[test]
fn plots_written_to_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    for curve in ["cutoff", "r-theta", "section", "obstruction"] {
        assert!(diffeo(&["plot", curve, "--out", path(dir.path())]).status.success(), "{curve}");
    }
    let csv = fs::read_to_string(dir.path().join("r_theta.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1002);
    assert_eq!(lines[1], "-0.5,0.5");
    assert_eq!(lines[1001], "0.5,0.5");
    assert!(fs::read_to_string(dir.path().join("section.svg")).unwrap().starts_with("<svg"));
    assert!(diffeo(&["plot", "spiral"]).status.code() == Some(2));
}

#[test]
fn suite_fault_names_failing_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = diffeo(&["suite", "fibrancy", "--fault", "filler-signs", "--out", path(dir.path()), "--budget", "500"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("failing: fibrancy.filler.n1"), "{stdout}");
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], false);
    assert!(summary["failed"].as_array().unwrap().iter().any(|v| v == "fibrancy.filler.n3"));
    assert_eq!(summary["fault"], "filler-signs");
}

#[test]
fn suite_records_config_in_every_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "seed = 17\nbudget = 123\n[budgets]\nequidef = 80\n").unwrap();
    let out = diffeo(&["suite", "realization", "--config", path(&cfg), "--seed", "5", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    for entry in fs::read_dir(dir.path()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") {
            let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
            assert_eq!(v["seed"], 5, "{}", p.display());
            assert_eq!(v["budgets"]["equidef"], 80);
            assert_eq!(v["budgets"]["samples"], 123);
        }
    }
}

#[test]
fn suite_errors() {
    assert_eq!(diffeo(&["suite", "homotopy"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = diffeo(&["suite", "simplicial", "--out", path(&blocker.join("sub"))]);
    assert_eq!(out.status.code(), Some(2));
}

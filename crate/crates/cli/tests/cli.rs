use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use ugame_core::discrimination::pguess_phi_jl_closed_form;
use ugame_core::game::phi_jl;
use ugame_core::PureState;

fn ugame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ugame"))
        .args(args)
        .env_remove("UGAME_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = ugame(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    ugame(args).status.code().unwrap()
}

/// Rows of a CSV as header-keyed cells.
fn rows(csv: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = csv.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn num(row: &[(String, String)], key: &str) -> f64 {
    row.iter().find(|(k, _)| k == key).unwrap().1.parse().unwrap()
}

fn d2_curve(gamma: f64) -> f64 {
    0.5 * (1.0 + (2.0 + 2.0 * gamma * gamma).sqrt() / 2.0)
}

fn classical(d: usize) -> f64 {
    0.5 * (1.0 + 1.0 / (d as f64).sqrt())
}

fn write_state(dir: &Path, name: &str, phi: &PureState) -> String {
    let amps: Vec<[f64; 2]> = phi.amplitudes().iter().map(|a| [a.re, a.im]).collect();
    let json = serde_json::json!({ "d": phi.dim(), "amplitudes": amps });
    let path = dir.join(name);
    std::fs::write(&path, json.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analytic_d2_curve_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    ok(&["curve", "--d", "2", "--mode", "analytic", "--steps", "11", "--out", out.to_str().unwrap()]);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("gamma,p_guess,mode,d\n"));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 11);
    for r in &rows {
        let g = num(r, "gamma");
        assert!((num(r, "p_guess") - d2_curve(g)).abs() < 1e-8);
        assert_eq!(r[2].1, "analytic");
        assert_eq!(r[3].1, "2");
    }
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "curve");
    assert_eq!(manifest["parameters"]["steps"], 11);
    assert_eq!(manifest["seed"], 0);
    assert!(manifest["tool_version"].is_string() && manifest["timestamp"].is_string());
}

#[test]
fn single_point_curves() {
    let r = rows(&ok(&["curve", "--steps", "1", "--gamma-start", "0", "--gamma-end", "0", "--d", "2", "--mode", "analytic"]));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][1].1, "0.853553391");

    let r = rows(&ok(&["curve", "--d", "3", "--mode", "numeric", "--steps", "1", "--gamma-start", "0", "--restarts", "16"]));
    assert!((num(&r[0], "p_guess") - 0.788675).abs() < 1e-4);
    assert_eq!(r[0][2].1, "numeric");

    let r = rows(&ok(&["curve", "--d", "5", "--mode", "analytic", "--gamma-end", "0", "--steps", "2"]));
    assert!(r.iter().all(|row| (num(row, "p_guess") - classical(5)).abs() < 1e-9));
}

#[test]
fn analytic_curve_rejects_unsupported_inputs() {
    assert_eq!(code(&["curve", "--d", "3", "--mode", "analytic", "--steps", "3"]), 2);
    assert_eq!(code(&["curve", "--d", "1", "--mode", "analytic"]), 2);
    assert_eq!(code(&["curve", "--gamma-start", "0.6", "--gamma-end", "0.2", "--mode", "analytic"]), 2);
    assert_eq!(code(&["curve", "--mode", "sideways"]), 2);
}

#[test]
fn numeric_curve_is_reproducible_and_honours_seed_env() {
    let args = ["curve", "--d", "3", "--steps", "3", "--restarts", "4"];
    let run = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_ugame")).args(args).env("UGAME_SEED", seed).output().unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run("11"), run("11"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_ugame"))
        .args(args)
        .args(["--out", out.to_str().unwrap()])
        .env("UGAME_SEED", "11")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), run("11"));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 11);
}

#[test]
fn fig3_writes_one_csv_per_dimension_and_a_chart() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    ok(&["fig3", "--dims", "2,3", "--steps", "5", "--restarts", "8", "--out-dir", out.to_str().unwrap()]);
    for d in [2usize, 3] {
        let csv = std::fs::read_to_string(out.join(format!("fig3_d{d}.csv"))).unwrap();
        let rows = rows(&csv);
        assert_eq!(rows.len(), 5);
        assert!((num(&rows[0], "p_guess") - classical(d)).abs() < 1e-4);
        for r in &rows {
            let (g, p) = (num(r, "gamma"), num(r, "p_guess"));
            if d == 2 {
                assert!((p - d2_curve(g)).abs() < 1e-6);
            } else {
                assert!(p >= pguess_phi_jl_closed_form(3, g, 0, 1).unwrap() - 1e-6);
            }
        }
        assert!(out.join(format!("fig3_d{d}.csv.manifest.json")).exists());
    }
    let svg = std::fs::read_to_string(out.join("fig3.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains("d = 2") && svg.contains("d = 3"));
}

#[test]
fn fig3_reports_io_failure() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let o = ugame(&["fig3", "--dims", "2", "--steps", "2", "--restarts", "1", "--out-dir", file.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("error"));
    assert_eq!(code(&["fig3", "--dims", "1,2"]), 2);
}

#[test]
fn schmidt_rows() {
    let r = rows(&ok(&["schmidt", "--d", "2", "--restarts", "8"]));
    assert!((num(&r[0], "p_guess") - 1.0).abs() < 1e-6);
    for k in ["schmidt_1", "schmidt_2"] {
        assert!((num(&r[0], k) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3);
    }
    let r = rows(&ok(&["schmidt", "--d", "3"]));
    let p = num(&r[0], "p_guess");
    let matches = (num(&r[0], "schmidt_1") - 0.8122).abs() < 1e-3 && (num(&r[0], "schmidt_2") - 0.5834).abs() < 1e-3;
    assert!(matches || p > 0.979283 + 1e-6, "{r:?}");
}

#[test]
fn entropy_table_and_chart() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    ok(&["entropy", "--steps", "11", "--cross-check", "--out", out.to_str().unwrap()]);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("gamma,h_B_given_R,h_X_given_R,h_P_given_R_t1,h_P_given_R_t2\n"));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 11);
    let expect = |r: &[(String, String)], want: [f64; 4]| {
        for (k, w) in ["h_B_given_R", "h_X_given_R", "h_P_given_R_t1", "h_P_given_R_t2"].iter().zip(want) {
            assert!((num(r, k) - w).abs() < 1e-6, "{k}: {r:?}");
        }
    };
    expect(&rows[0], [0.0, 1.0 - (0.5f64.sqrt() + 1.0).log2(), -1.0, 0.0]);
    expect(&rows[10], [-1.0, 0.0, 0.0, 0.0]);
    assert!(rows.iter().all(|r| r[4].1 == "0"));
    let svg = std::fs::read_to_string(dir.path().join("h.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(dir.path().join("h.svg.manifest.json").exists());
    assert_eq!(code(&["entropy", "--steps", "1"]), 2);
}

#[test]
fn discriminate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let phi01 = write_state(dir.path(), "phi01.json", &phi_jl(2, 0, 1).unwrap());
    let v: Value = serde_json::from_str(&ok(&["discriminate", "--state-file", &phi01, "--gamma", "1"])).unwrap();
    assert!((v["p_guess"].as_f64().unwrap() - 1.0).abs() < 1e-8);

    let zero = write_state(dir.path(), "zero.json", &PureState::basis(2, 0).unwrap());
    let v: Value = serde_json::from_str(&ok(&["discriminate", "--state-file", &zero, "--gamma", "1"])).unwrap();
    assert!((v["p_guess"].as_f64().unwrap() - 0.933013).abs() < 1e-6);
    let probs: Vec<f64> = v["probabilities"].as_array().unwrap().iter().map(|p| p.as_f64().unwrap()).collect();
    assert!((probs[0] - 0.75).abs() < 1e-12 && (probs[1] - 0.25).abs() < 1e-12);
    assert!(v["gap"].as_f64().unwrap() >= 0.0);

    let uniform = dir.path().join("u.json");
    std::fs::write(&uniform, r#"{"d": 4, "amplitudes": [[1,0],[1,0],[1,0],[1,0]]}"#).unwrap();
    let o = ugame(&["discriminate", "--state-file", uniform.to_str().unwrap(), "--gamma", "0", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("normalising"));
    let r = rows(&stdout(&o));
    let p = num(&r[0], "p_guess");
    assert!((0.25..=0.75).contains(&p), "{p}");
    assert_eq!(r[0].len(), 10);
}

#[test]
fn malformed_state_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"d\": 2,\n\"amplitudes\": [[1, 0] [0, 0]]}").unwrap();
    let o = ugame(&["discriminate", "--state-file", bad.to_str().unwrap(), "--gamma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    std::fs::write(&bad, r#"{"d": 3, "amplitudes": [[1, 0], [0, 0]]}"#).unwrap();
    let o = ugame(&["discriminate", "--state-file", bad.to_str().unwrap(), "--gamma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`amplitudes`"));

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&["discriminate", "--state-file", missing.to_str().unwrap(), "--gamma", "0.5"]), 3);
}

#[test]
fn certify_examples() {
    for (args, want) in [
        (["2", "0", "0", "1"], Some(classical(2))),
        (["4", "0.8", "3", "1"], Some(0.75)),
        (["6", "0.5", "0", "2"], None),
    ] {
        let [d, gamma, j, l] = args;
        let r = rows(&ok(&["certify", "--d", d, "--gamma", gamma, "--j", j, "--l", l]));
        assert_eq!(r[0][8].1, "ok");
        let values = ["trace_certificate", "closed_form", "sdp_value"].map(|k| num(&r[0], k));
        let target = want.unwrap_or(values[1]);
        for v in values {
            assert!((v - target).abs() < 1e-7, "{r:?}");
        }
    }
    assert_eq!(code(&["certify", "--d", "3", "--gamma", "0.5", "--j", "1", "--l", "1"]), 2);
    assert_eq!(code(&["certify", "--d", "3", "--gamma", "1.5", "--j", "0", "--l", "1"]), 2);
}

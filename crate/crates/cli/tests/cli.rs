//! End-to-end runs of the `modatlas` binary.

use modatlas::locus::{canned_start, Interval};
use modatlas::polymorphic::MapKey;
use serde_json::Value;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modatlas")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn number(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn pair(v: &Value) -> (f64, f64) {
    (number(&v[0]), number(&v[1]))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    let _ = std::fs::remove_file(&path);
    path
}

#[test]
fn eval_e2_at_i() {
    let out = run(&["eval", "--form", "E2", "--tau", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "eval");
    let (re, im) = pair(&v["results"]["value"]);
    assert!((re - 3.0 / PI).abs() < 1e-12 && im.abs() < 1e-12);
    assert!(v["timing"]["elapsed_seconds"].is_number());
}

#[test]
fn map_s4_at_i() {
    let v = stdout_json(&run(&["map", "--fn", "s4", "--tau", "0,1"]));
    let (re, im) = pair(&v["results"]["value"]);
    assert!(re.abs() < 1e-12 && (im + 1.0).abs() < 1e-12);
}

#[test]
fn s2_pair_has_two_values() {
    let v = stdout_json(&run(&["map", "--fn", "s2pair", "--tau", "0.1,1.2"]));
    assert_eq!(v["results"]["values"].as_array().map(|a| a.len()), Some(2));
}

#[test]
fn output_round_trips_byte_for_byte() {
    for args in [
        &["eval", "--form", "J", "--tau", "0.3,0.9"][..],
        &["map", "--fn", "s6", "--tau", "-0.2,1.1"][..],
        &["critical", "--form", "E2", "--tile", "ad"][..],
    ] {
        let out = run(args);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again.as_bytes(), &out.stdout[..], "{args:?}");
    }
}

#[test]
fn critical_on_a_noncusp_tile_finds_two_e6_points() {
    let out = run(&["critical", "--form", "E6", "--tile", "ad"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["total"], 2);
    let tile = &v["results"]["tiles"][0];
    assert_eq!(tile["records"].as_array().unwrap().len(), 2);
    assert!(number(&v["residuals"]["max_residual"]) < 1e-10);
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    for args in [
        &["eval", "--form", "E4", "--tau", "0,0"][..],
        &["eval", "--form", "E4", "--tau", "0.2,-1"][..],
        &["map", "--fn", "s2+", "--tau", "0.9,0.5"][..],
        &["critical", "--form", "E2", "--depth", "9"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn locus_writes_csv() {
    let start = canned_start(MapKey::S4, Interval::Neg).unwrap().unwrap();
    let path = scratch("locus-s4-neg.csv");
    let out = run(&[
        "locus",
        "--fn",
        "s4",
        "--interval",
        "neg",
        "--start",
        &format!("{},{}", start.re, start.im),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau_re,tau_im,s_re,s_im,residual"));
    assert!(lines.count() > 100);
}

#[test]
fn tessellate_writes_json_file() {
    let path = scratch("tiles-v2.json");
    let out = run(&["tessellate", "--family", "V", "--depth", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "tessellate");
    assert!(!v["results"]["tiles"].as_array().unwrap().is_empty());
}

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use ncdisk::conn::ConnectionData;
use tempfile::TempDir;

fn ncdisk(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ncdisk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).expect("write temp file");
    path(&p)
}

fn path(p: &Path) -> String {
    p.to_str().expect("utf-8 path").to_string()
}

#[test]
fn lcs_dims_table() {
    let o = ncdisk(&["lcs-dims", "--n", "2", "--kmax", "2", "--dmax", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "k=2: 0, 1, 4"));
}

#[test]
fn lcs_dims_json_is_stable() {
    let o = ncdisk(&["lcs-dims", "--n", "2", "--kmax", "3", "--dmax", "4", "--json", "--quotient"], None);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["rows"][0]["dims"], serde_json::json!([2, 3, 4, 5]));
    assert_eq!(v["rows"][1], serde_json::json!({"k": 2, "dims": [0, 1, 2, 3]}));
}

#[test]
fn hidden_oracle_agrees() {
    let a = ncdisk(&["lcs-dims", "--n", "3", "--kmax", "3", "--dmax", "3"], None);
    let b = ncdisk(&["oracle", "lcs-dims", "--n", "3", "--kmax", "3", "--dmax", "3"], None);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn aut_invert_from_stdin() {
    let o = ncdisk(&["aut", "invert", "--n", "1", "--trunc", "4"], Some("x1 + x1^2\n"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim_end(), "x1 - x1^2 + 2*x1^3 - 5*x1^4");
}

#[test]
fn aut_compose_and_abelianize() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g", "x1 + x1^2\n");
    let o = ncdisk(&["aut", "compose", "--n", "1", "--trunc", "3", &g, &g], None);
    assert_eq!(stdout(&o).trim_end(), "x1 + 2*x1^2 + 2*x1^3");
    let h = write(&dir, "h", "x1 + x1*x2 - x2*x1\nx2\n");
    let o = ncdisk(&["aut", "abelianize", "--n", "2", "--trunc", "3", &h], None);
    assert_eq!(stdout(&o).trim_end(), "x1\nx2");
}

#[test]
fn singular_automorphism_is_a_math_failure() {
    let o = ncdisk(&["aut", "invert", "--n", "2", "--trunc", "3"], Some("x1 + x2\nx1 + x2\n"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn der_subcommands() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d", "x2\n0\n");
    let o = ncdisk(&["der", "apply", "--n", "2", "--trunc", "3", &d, "--to", "x1*x2*x1"], None);
    assert_eq!(stdout(&o).trim_end(), "x1*x2^2 + x2^2*x1");
    let sq = write(&dir, "sq", "x1^2\n");
    let o = ncdisk(&["der", "exp", "--n", "1", "--trunc", "4", &sq], None);
    assert_eq!(stdout(&o).trim_end(), "x1 + x1^2 + x1^3 + x1^4");
    let one = write(&dir, "one", "1\n");
    let x = write(&dir, "x", "x1\n");
    let o = ncdisk(&["der", "bracket", "--n", "1", "--trunc", "3", &one, &x], None);
    assert_eq!(stdout(&o).trim_end(), "1");
    let o = ncdisk(&["der", "exp", "--n", "1", "--trunc", "3", &one], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flat_check_pass_and_fail() {
    let dir = TempDir::new().unwrap();
    let o = ncdisk(&["conn", "tautological", "--n", "2", "--fiber-trunc", "3", "--base-trunc", "2"], None);
    let taut = write(&dir, "taut.json", &stdout(&o));
    let o = ncdisk(&["flat-check", "--conn", &taut], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim_end(), "PASS");

    let g = ncdisk(&["conn", "random-gauge", "--n", "2", "--seed", "11"], None);
    let g = write(&dir, "g.json", &stdout(&g));
    let gauged = ncdisk(&["conn", "gauge", "--conn", &taut, "--gauge", &g], None);
    let text = stdout(&gauged);
    let gauged = write(&dir, "gauged.json", &text);
    assert_eq!(ncdisk(&["flat-check", "--conn", &gauged], None).status.code(), Some(0));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["nabla"][1]["entries"].as_array_mut().unwrap().push(serde_json::json!({
        "from": 1, "form": 1, "word": [1, 2], "coeff_poly": "1"
    }));
    let bad = write(&dir, "bad.json", &v.to_string());
    let o = ncdisk(&["flat-check", "--conn", &bad], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn flat_sections_output_reparses() {
    let dir = TempDir::new().unwrap();
    let o = ncdisk(&["conn", "tautological", "--n", "1", "--fiber-trunc", "1", "--base-trunc", "1"], None);
    let taut = write(&dir, "taut.json", &stdout(&o));
    let o = ncdisk(&["flat-sections", "--conn", &taut, "--fiber-max", "1", "--base-max", "1"], None);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    for l in &lines {
        let check = ncdisk(&["parse", "--check", "--kind", "dga", "--n", "1"], Some(l));
        assert_eq!(stdout(&check).trim_end(), "OK", "{l}");
    }
}

#[test]
fn atiyah_pipeline() {
    let dir = TempDir::new().unwrap();
    let o = ncdisk(&["conn", "tautological", "--n", "1", "--fiber-trunc", "3", "--base-trunc", "3"], None);
    let taut = write(&dir, "taut.json", &stdout(&o));
    let g = ncdisk(&["conn", "random-gauge", "--n", "1", "--seed", "5"], None);
    let g = write(&dir, "g.json", &stdout(&g));
    let gauged = ncdisk(&["conn", "gauge", "--conn", &taut, "--gauge", &g], None);
    let gauged = write(&dir, "gauged.json", &stdout(&gauged));
    let w = ncdisk(&["atiyah", "extract", "--conn", &gauged], None);
    let w = write(&dir, "w.json", &stdout(&w));
    let zero = ncdisk(&["atiyah", "extract", "--conn", &taut], None);
    let zero = write(&dir, "zero.json", &stdout(&zero));
    let d = ncdisk(&["atiyah", "diff", &w, &zero], None);
    assert_eq!(stdout(&d), fs::read_to_string(&w).unwrap());
    let o = ncdisk(&["atiyah", "coboundary", &w, "--bound", "4"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("WITNESS"));
}

#[test]
fn json_reserializes_identically() {
    let dir = TempDir::new().unwrap();
    let o = ncdisk(&["conn", "tautological", "--n", "2", "--fiber-trunc", "2", "--base-trunc", "2"], None);
    let taut = write(&dir, "taut.json", &stdout(&o));
    let g = ncdisk(&["conn", "random-gauge", "--n", "2"], None);
    let g = write(&dir, "g.json", &stdout(&g));
    let first = stdout(&ncdisk(&["conn", "gauge", "--conn", &taut, "--gauge", &g], None));
    let conn = ConnectionData::from_json_str(&first).unwrap();
    assert_eq!(conn.to_json_string(), first.trim_end());
}

#[test]
fn parse_check() {
    let o = ncdisk(&["parse", "--check", "--n", "2"], Some("3/2*x1*x2 - x2^2"));
    assert_eq!((o.status.code(), stdout(&o).trim_end().to_string()), (Some(0), "OK".to_string()));
    let o = ncdisk(&["parse", "--check", "--n", "2"], Some(""));
    assert_eq!(o.status.code(), Some(1));
    let o = ncdisk(&["parse", "--n", "2", "--trunc", "3"], Some("x2*x1 + x1"));
    assert_eq!(stdout(&o).trim_end(), "x1 + x2*x1");
    let o = ncdisk(&["parse", "--check", "--kind", "form", "--n", "2"], Some("b1*db1^db2"));
    assert_eq!(stdout(&o).trim_end(), "OK");
}

#[test]
fn usage_errors_exit_2() {
    let o = ncdisk(&["lcs-dims", "--n", "2"], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--kmax") && err.contains("Usage"));
    let o = ncdisk(&["flat-check", "--conn", "/nonexistent/conn.json"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = ncdisk(&["aut", "invert", "--n", "2", "--trunc", "3"], Some("x1 + x3\nx2\n"));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(ncdisk(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn seeded_check_passes() {
    let o = ncdisk(&["check", "--seed", "7", "--trials", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn outputs_round_trip() {
    let o = ncdisk(&["aut", "invert", "--n", "2", "--trunc", "3"], Some("x1 + x2*x1\nx2 - 1/3*x1^2\n"));
    let inv = stdout(&o);
    let back = ncdisk(&["aut", "invert", "--n", "2", "--trunc", "3"], Some(&inv));
    assert_eq!(stdout(&back).trim_end(), "x1 + x2*x1\nx2 - 1/3*x1^2");
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bcx::boundary::MultiplicityLedger;
use bcx::corpus;
use bcx::io::{complex_from_json, complex_to_json, to_json};
use bcx::symdelta::{canonical_form, is_isomorphic};
use tempfile::TempDir;

fn bcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcx")).args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn put(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_three_lines_gives_a_triangle() {
    let dir = TempDir::new().unwrap();
    let strata = put(&dir, "lines.json", &to_json(&corpus::three_lines()));
    let out = bcx(&["build", &strata]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let c = complex_from_json(&stdout(&out)).unwrap();
    assert!(is_isomorphic(&c, &corpus::hollow_triangle()).is_some());
    let tri = put(&dir, "tri.json", &stdout(&out));
    assert_eq!(stdout(&bcx(&["fvector", &tri])), "(3,3)\n");
}

#[test]
fn equiv_writes_a_replayable_certificate() {
    let dir = TempDir::new().unwrap();
    let tri = put(&dir, "tri.json", &complex_to_json(&corpus::hollow_triangle()));
    let sq = put(&dir, "sq.json", &complex_to_json(&corpus::square()));
    let cert = path(&dir, "cert.json");
    let out = bcx(&["equiv", &tri, &sq, "--out", s(&cert)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(cert.exists());
    let out = bcx(&["replay", &tri, s(&cert), "--target", &sq]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn equiv_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tri = put(&dir, "tri.json", &complex_to_json(&corpus::hollow_triangle()));
    let pt = put(&dir, "pt.json", &complex_to_json(&corpus::point()));
    let sq = put(&dir, "sq.json", &complex_to_json(&corpus::square()));
    assert_eq!(bcx(&["equiv", &tri, &pt]).status.code(), Some(1));
    let out = bcx(&["equiv", &tri, &sq, "--budget-moves", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn root_leaves_the_complex_alone() {
    let dir = TempDir::new().unwrap();
    let tri = put(&dir, "tri.json", &complex_to_json(&corpus::hollow_triangle()));
    let v = corpus::hollow_triangle().labels(0)[0].clone();
    let ledger = path(&dir, "ledger.json");
    let out = bcx(&["root", &tri, "--component", &v, "--index", "3", "--canonical", "--ledger-out", s(&ledger)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let original = complex_to_json(&canonical_form(&corpus::hollow_triangle()).complex);
    assert_eq!(stdout(&out), original);
    let l: MultiplicityLedger = serde_json::from_str(&fs::read_to_string(&ledger).unwrap()).unwrap();
    assert_eq!(l.get(&v), 3);

    let again = bcx(&["root", &tri, "--component", &v, "--index", "2", "--ledger", s(&ledger)]);
    assert!(String::from_utf8_lossy(&again.stderr).contains('6'));
    assert_eq!(bcx(&["root", &tri, "--component", "nope", "--index", "2"]).status.code(), Some(65));
}

#[test]
fn malformed_and_invalid_inputs() {
    let dir = TempDir::new().unwrap();
    let broken = put(&dir, "broken.json", "{\"dims\": 1, \"simplices\": ");
    let out = bcx(&["homology", &broken]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let bad = put(&dir, "bad.json", r#"{"dims": 1, "simplices": {"0": ["u", "v"], "1": ["e"]}, "faces": {"e": ["u", "v"]}}"#);
    assert_eq!(bcx(&["validate", &bad]).status.code(), Some(65));
    assert_eq!(bcx(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let torus = put(&dir, "torus.json", &complex_to_json(&corpus::torus()));
    for verb in [["snc-reduce"], ["homology"], ["export-dot"], ["collapse-core"]] {
        let a = bcx(&[verb[0], &torus]);
        let b = bcx(&[verb[0], &torus]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{}", verb[0]);
    }
}

#[test]
fn subdivide_and_homology() {
    let dir = TempDir::new().unwrap();
    let rp2 = put(&dir, "rp2.json", &complex_to_json(&corpus::projective_plane()));
    let out = bcx(&["homology", &rp2]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Z/2"));
    let loop_ = put(&dir, "loop.json", &complex_to_json(&corpus::self_glued_loop()));
    let sub = bcx(&["subdivide", &loop_, "--mode", "barycentric"]);
    assert_eq!(sub.status.code(), Some(0));
    let c = complex_from_json(&stdout(&sub)).unwrap();
    assert!(c.is_unordered());
    let edge = corpus::self_glued_loop().labels(1)[0].clone();
    let star = bcx(&["subdivide", &loop_, "--mode", "star", "--target", &edge]);
    assert_eq!(star.status.code(), Some(0), "{}", String::from_utf8_lossy(&star.stderr));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn qcsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcsp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_reports_winning() {
    let o = qcsp(&["solve", path(&fixture("pstar.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "WINNING\n");

    let o = qcsp(&["solve", path(&fixture("unsat.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NO-WINNING-STRATEGY\n");
}

#[test]
fn count_matches_known_totals() {
    let o = qcsp(&["count", path(&fixture("forall2.json"))]);
    assert_eq!(stdout(&o), "324\n");
    let o = qcsp(&["count", path(&fixture("pstar.json")), "--list"]);
    assert!(stdout(&o).starts_with("4\nstrategy 0\n  x=0 y=0 z=0 t=0\n"));
    let o = qcsp(&["count", path(&fixture("forall2.json")), "--limit", "10", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 10);
    assert_eq!(v["complete"], false);
    let o = qcsp(&["count", path(&fixture("forall2.json")), "--budget", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn query_alternatives_on_golden_base() {
    let base = fixture("pstar.base.json");
    let o = qcsp(&["query", path(&base), "--prefix", "x=2,y=1", "--alt", "y=2"]);
    assert_eq!(stdout(&o), "NO\n");
    assert_eq!(o.status.code(), Some(1));
    let o = qcsp(&["query", path(&base), "--prefix", "x=2,y=1", "--alt", "y=0"]);
    assert_eq!(stdout(&o), "YES\n");
    assert_eq!(o.status.code(), Some(0));
    let o = qcsp(&["query", path(&base), "--prefix", "x=2"]);
    assert_eq!(stdout(&o), "y: 0 1\n");
    let o = qcsp(&["query", path(&base), "--prefix", "2", "--alt", "y=2", "--json"]);
    assert_eq!(stdout(&o), "{\"answer\":false}\n");
    let o = qcsp(&["query", path(&base), "--prefix", "y=2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compile_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let pstar = fixture("pstar.json");
    assert!(qcsp(&["compile", path(&pstar), "-o", a.to_str().unwrap()]).status.success());
    let o = qcsp(&["compile", path(&pstar), "-o", b.to_str().unwrap(), "--propagation", "gac"]);
    assert!(o.status.success());
    let golden = std::fs::read(fixture("pstar.base.json")).unwrap();
    assert_eq!(std::fs::read(a).unwrap(), golden);
    assert_eq!(std::fs::read(b).unwrap(), golden);
}

#[test]
fn compile_then_check() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["pstar.json", "forall2.json", "unsat.json", "pursuit.json"] {
        let out = dir.path().join(name);
        assert!(qcsp(&["compile", path(&fixture(name)), "-o", out.to_str().unwrap()]).status.success());
        let o = qcsp(&["check", out.to_str().unwrap(), path(&fixture(name))]);
        assert_eq!(stdout(&o), "compatible=true\noptimal=true\n", "{name}");
        assert_eq!(o.status.code(), Some(0));
    }
    // a valid base for a different problem is not compatible
    let o = qcsp(&["check", path(&fixture("pstar.base.json")), path(&fixture("forall2.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certificates_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = qcsp(&["extract", path(&fixture("pstar.base.json")), "--tie-break", "max", "--certificate"]);
    assert!(o.status.success());
    std::fs::write(&cert, &o.stdout).unwrap();
    let o = qcsp(&["verify", cert.to_str().unwrap(), path(&fixture("pstar.json"))]);
    assert_eq!(stdout(&o), "VALID\n");
    // the optimal base guards several values at the root: not a certificate
    let o = qcsp(&["verify", path(&fixture("pstar.base.json")), path(&fixture("pstar.json"))]);
    assert_eq!(stdout(&o), "INVALID\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn extract_prints_scenarios() {
    let o = qcsp(&["extract", path(&fixture("pstar.base.json"))]);
    assert_eq!(stdout(&o), "x=0 y=0 z=0 t=0\nx=0 y=0 z=1 t=0\nx=0 y=0 z=2 t=0\n");
}

#[test]
fn errors_exit_2_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"variables\": [,]\n}").unwrap();
    let o = qcsp(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column"), "{err}");

    let o = qcsp(&["solve", "/definitely/missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qcsp(&["solve", path(&fixture("pstar.json")), "--propagation", "full"]);
    assert_eq!(o.status.code(), Some(2));
}

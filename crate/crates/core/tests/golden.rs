use std::path::PathBuf;

use qcsp::{compile, fixtures, CompileOptions, Problem, Propagation, QcspBase};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn problem_files_match_built_fixtures() {
    assert_eq!(Problem::from_json(&fixture("pstar.json")).unwrap(), fixtures::pstar());
    assert_eq!(Problem::from_json(&fixture("forall2.json")).unwrap(), fixtures::forall_forall());
}

#[test]
fn compiled_pstar_matches_golden_bytes() {
    let p = Problem::from_json(&fixture("pstar.json")).unwrap();
    for propagation in [Propagation::Ground, Propagation::Gac] {
        let (base, _) = compile(&p, CompileOptions { propagation, budget: None }).unwrap();
        assert_eq!(format!("{}\n", base.to_json_pretty()), fixture("pstar.base.json"));
    }
}

#[test]
fn golden_base_reads_back() {
    let base = QcspBase::from_json(&fixture("pstar.base.json")).unwrap();
    assert_eq!(base, fixtures::pstar_base());
    assert_eq!(base.node_count(), 14);
}

#[test]
fn unsat_compiles_to_bottom() {
    let p = Problem::from_json(&fixture("unsat.json")).unwrap();
    assert_eq!(compile(&p, CompileOptions::default()).unwrap().0, QcspBase::Bottom);
}

#[test]
fn problem_json_round_trips() {
    for name in ["pstar.json", "forall2.json", "unsat.json", "pursuit.json"] {
        let p = Problem::from_json(&fixture(name)).unwrap();
        assert_eq!(Problem::from_json(&p.to_json()).unwrap(), p, "{name}");
    }
}

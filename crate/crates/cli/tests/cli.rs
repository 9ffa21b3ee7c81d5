use std::path::Path;
use std::process::{Command, Output};

use m1plus::commutator::{direct_commutator, stated_formula, Relation};
use m1plus::engine::standard;
use m1plus::report::VerificationReport;
use m1plus::FockVector;

fn m1plus(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_m1plus"))
        .current_dir(dir)
        .env("M1PLUS_CACHE_DIR", dir.join("cache"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_report(path: &Path) -> VerificationReport {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tops_pass_with_fifteen_cases() {
    let dir = tempfile::tempdir().unwrap();
    let out = m1plus(dir.path(), &["verify", "table1", "--out", "rep"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_report(&dir.path().join("rep/top-actions.json"));
    assert_eq!(report.cases.len(), 15);
    assert!(report.passed());
}

#[test]
fn lattice_k1_has_the_exponential_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = m1plus(dir.path(), &["verify", "lattice", "--k", "1", "--out", "rep"]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_report(&dir.path().join("rep/lattice-k1.json"));
    assert!(report.case("E*E=4omega").unwrap().passed);
    assert!(!dir.path().join("rep/lattice-k2.json").exists());
}

#[test]
fn hvec_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = m1plus(dir.path(), &["hvec", "build", "--r", "3"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&first.stderr).contains("built"));
    let second = m1plus(dir.path(), &["hvec", "build", "--r", "3"]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);
    let cached = std::fs::read_to_string(dir.path().join("cache/H6.txt")).unwrap();
    assert_eq!(FockVector::parse(&cached).unwrap(), m1plus::hvec::h_vector(3));
}

#[test]
fn stale_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("cache")).unwrap();
    std::fs::write(dir.path().join("cache/H4.txt"), "1 * [2,2] @ e^0\n").unwrap();
    let out = m1plus(dir.path(), &["hvec", "build", "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("differs"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "borcherds", "--samples", "12", "--seed", "5"];
    m1plus(dir.path(), &[&args[..], &["--out", "a"]].concat());
    m1plus(dir.path(), &[&args[..], &["--out", "b", "--sequential"]].concat());
    let a = std::fs::read(dir.path().join("a/borcherds.json")).unwrap();
    let b = std::fs::read(dir.path().join("b/borcherds.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(read_report(&dir.path().join("a/borcherds.json")).parameters["seed"], 5);
}

#[test]
fn failing_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = m1plus(dir.path(), &["verify", "gap", "--bound", "20", "--out", "rep"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("gap: 6 cases, 2 failed"));
}

#[test]
fn malformed_flags_and_config_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = m1plus(dir.path(), &["verify", "zhu", "--cutoff", "many"]);
    assert_ne!(out.status.code(), Some(0));
    std::fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    let out = m1plus(dir.path(), &["--config", "bad.cfg", "verify", "tops"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.cfg"), "k = 2\nout_dir = from-config\n").unwrap();
    let out = m1plus(dir.path(), &["--config", "m.cfg", "verify", "lattice"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("from-config/lattice-k2.json").exists());
    assert!(!dir.path().join("from-config/lattice-k1.json").exists());
}

#[test]
fn failure_witnesses_replay_through_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = m1plus(dir.path(), &["verify", "appendix", "--range", "2", "--max-weight", "0", "--out", "rep"]);
    assert_eq!(out.status.code(), Some(1));
    let report = read_report(&dir.path().join("rep/commutators.json"));
    let case = report.case("L-H4/state/m=-2,n=2/e0").expect("the L-H4 central term mismatch is recorded");
    let w = case.witness.as_ref().unwrap();
    let state = FockVector::parse(w.state.as_ref().unwrap()).unwrap();
    let engine = standard();
    let formula = stated_formula(Relation::LH4);
    let lhs = direct_commutator(engine, &formula.left.vector(), -2, &formula.right.vector(), 2, &state).unwrap();
    let rhs = formula.at(-2, 2).unwrap().apply(engine, &state).unwrap();
    assert_eq!(lhs, FockVector::parse(w.lhs.as_ref().unwrap()).unwrap());
    assert_eq!(rhs, FockVector::parse(w.rhs.as_ref().unwrap()).unwrap());
    assert_ne!(lhs, rhs);
}

use std::path::PathBuf;
use std::process::{Command, Output};

use hochdef::report::Report;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochdef"))
        .args(args)
        .env("HOCHDEF_CACHE", cache)
        .env_remove("HOCHDEF_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn hh_writes_and_reuses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let q = data("kronecker.qv");
    let args = ["hh", "--quiver", q.to_str().unwrap(), "--degree", "2"];
    let first = run(&args, dir.path());
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let second = run(&args, dir.path());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn hh_of_a3_is_one_dimensional() {
    let dir = tempfile::tempdir().unwrap();
    let q = data("a3.qv");
    for (deg, want) in [("0", "= 1"), ("1", "= 0"), ("2", "= 0")] {
        let o = run(&["hh", "--quiver", q.to_str().unwrap(), "--degree", deg], dir.path());
        assert!(stdout(&o).contains(want), "degree {deg}: {}", stdout(&o));
    }
}

#[test]
fn helix_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = run(&["helix-check", "--lattice", data("p2.lat").to_str().unwrap()], dir.path());
    assert_eq!(good.status.code(), Some(0));
    let bad = run(&["helix-check", "--lattice", data("p1_perturbed.lat").to_str().unwrap()], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(&["helix-check", "--lattice", "/nonexistent/x.lat"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/x.lat"));
    let bad_der = run(&["hkr-check", "--vars", "2", "--derivations", "dq"], dir.path());
    assert_eq!(bad_der.status.code(), Some(2));
    let usage = run(&["mutate"], dir.path());
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn mutate_prints_the_new_gram_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["mutate", "--lattice", data("p1.lat").to_str().unwrap(), "--word", "L1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(2, -1)") && out.contains("Gram = [[1, 2], [0, 1]]"), "{out}");
}

#[test]
fn untwisted_convention_fails_chain_compatibility() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["euler-idem", "--n", "3", "--chain"], dir.path());
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = run(&["euler-idem", "--n", "3", "--chain", "--convention", "untwisted"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn machine_format_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--format", "machine", "morita-check", "--base", "k", "--size", "2", "--degree", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_machine(&stdout(&o)).unwrap();
    assert!(r.all_passed() && !r.checks.is_empty());
}

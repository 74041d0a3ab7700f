use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stonean-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn fixture_files_are_current() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["fixtures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut count = 0;
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap();
        let checked_in = fs::read_to_string(fixtures().join(name)).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), checked_in, "{name:?}");
        count += 1;
    }
    assert_eq!(count, 7);
}

#[test]
fn validate_ok() {
    let o = lab(&["validate", &fixture("g3.alg")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ok\n");
    let o = lab(&["validate", "--battery", &fixture("l3.alg")]);
    assert_eq!(stdout(&o), "ok\n");
}

#[test]
fn validate_reports_broken_tables() {
    let text = fs::read_to_string(fixtures().join("g3.alg")).unwrap();
    // make 0 * a equal a
    let broken = text.replacen("mult\n0 0 0\n", "mult\n0 1 0\n", 1);
    assert_ne!(broken, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.alg");
    fs::write(&path, broken).unwrap();
    let o = lab(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("violated "), "{}", stdout(&o));
}

#[test]
fn roundtrip_prints_witness() {
    let o = lab(&["roundtrip", &fixture("g3.alg")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("isomorphic to "));
    assert_eq!(out.lines().filter(|l| l.contains(" -> ")).count(), 3);
    let o = lab(&["roundtrip", &fixture("l3.alg")]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_eq_countermodel() {
    let o = lab(&["check-eq", &fixture("l3.alg"), "-x v --x = T"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "countermodel x=a\n");
    let o = lab(&["check-eq", &fixture("g3.alg"), "(x -> y) v (y -> x) = T"]);
    assert_eq!(code(&o), 0);
    let o = lab(&["check-eq", "--dense", &fixture("g3.alg"), "x = T"]);
    assert_eq!(stdout(&o), "~~x -> x = T\ncountermodel x=a\n");
    let o = lab(&["check-eq", &fixture("g3.alg"), "x -> ("]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 7"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&lab(&["frobnicate"])), 2);
    assert_eq!(code(&lab(&["validate", "/nonexistent/file.alg"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    fs::write(&path, "algebra X\nsize two\n").unwrap();
    let o = lab(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn stonean_subcommands() {
    let o = lab(&["stonean", "check", &fixture("l3.alg")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).ends_with("not stonean: x=a\n"));
    let o = lab(&["stonean", "check", &fixture("g3.alg")]);
    assert_eq!(code(&o), 0);
    let o = lab(&["stonean", "decompose", &fixture("g3.alg"), "a"]);
    assert_eq!(stdout(&o), "a = 1 * a\n");
    let o = lab(&["stonean", "adjoin", &fixture("h2.alg")]);
    assert!(stdout(&o).contains("elements d 1 o\n"));
}

#[test]
fn filters_crt_quotient() {
    let o = lab(&["filters", &fixture("g3.alg")]);
    assert_eq!(stdout(&o), "G3 2\nG3 1 2\nG3 0 1 2\n");
    let o = lab(&["crt", &fixture("b4.alg"), "1:1", "2:2"]);
    assert_eq!(stdout(&o), "(1,1)\n");
    let o = lab(&["crt", &fixture("g3.alg"), "0:a", "1:a"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("infeasible"));
    let o = lab(&["quotient", &fixture("b4.alg"), "1"]);
    assert!(stdout(&o).contains("size 2\n"));
}

#[test]
fn triple_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["triple", "of", &fixture("l3.alg")]);
    assert_eq!(code(&o), 1);
    let o = lab(&["triple", "of", &fixture("h2xh2.alg")]);
    assert_eq!(code(&o), 2);
    let o = lab(&["triple", "of", &fixture("g4.alg")]);
    assert_eq!(code(&o), 0);
    let path = dir.path().join("g4.tri");
    fs::write(&path, stdout(&o)).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&lab(&["triple", "validate", p])), "ok\n");
    let o = lab(&["reconstruct", p]);
    assert_eq!(code(&o), 0);
    let rebuilt = dir.path().join("rebuilt.alg");
    fs::write(&rebuilt, stdout(&o)).unwrap();
    let o = lab(&["iso", &fixture("g4.alg"), rebuilt.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn iso_and_free() {
    let o = lab(&["iso", &fixture("b4.alg"), &fixture("g4.alg")]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "not isomorphic\n");
    let o = lab(&["free", "--variety", "goedel", "-n", "1", "--oracle"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("assembled 6\n") && out.contains("term closure 6\n") && out.contains("isomorphic yes\n"));
    assert_eq!(stdout(&lab(&["free", "--variety", "boolean", "-n", "2"])), "boolean n=2: B2^4\nsize 16\n");
    assert_eq!(code(&lab(&["free", "--variety", "product"])), 1);
}

#[test]
fn enumerate_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = lab(&["enumerate", "-n", "4", "--stonean", "--out", d]);
    assert_eq!(code(&o), 0);
    let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(manifest.starts_with("size 2: 1\nsize 3: 1\nsize 4: 3\ntotal: 5\n"), "{manifest}");
    let files = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 6);
    let parallel = lab(&["enumerate", "-n", "5", "--jobs", "3", "--seed", "9"]);
    let serial = lab(&["enumerate", "-n", "5"]);
    assert_eq!(stdout(&parallel), stdout(&serial));
    assert_eq!(stdout(&serial), "size 2: 1\nsize 3: 2\nsize 4: 7\nsize 5: 26\ntotal: 36\n");
    let o = Command::new(env!("CARGO_BIN_EXE_stonean-lab"))
        .args(["enumerate", "-n", "5"])
        .env("STONEAN_LAB_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

//! End-to-end runs of the installed binary: pinned outputs, exit codes,
//! byte-level determinism, and the cache directory contract.

use std::process::{Command, Output};

fn rsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsc"))
        .args(args)
        .env_remove("RSC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn rsc_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsc"))
        .args(args)
        .env_remove("RSC_CACHE_DIR")
        .env(key, val)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

#[test]
fn witt_json_is_pinned() {
    let out = rsc(&["witt", "--ring", "gf:3", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\"free_rank\":0,\"torsion\":[4]}\n");
}

#[test]
fn complex_homology_json_is_pinned() {
    let out = rsc(&["complex", "homology", "--ring", "gf:4", "--dim", "1", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\"free_rank\":0,\"torsion\":[]}\n");
}

#[test]
fn verify_single_check_passes() {
    let out = rsc(&["verify", "psi1-squares", "--ring", "gf:5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("pass"), "expected a pass row:\n{text}");
    assert!(text.contains("0 fail"), "unexpected failure:\n{text}");
}

#[test]
fn verify_scissors_on_the_product_ring_passes() {
    let out = rsc(&["verify", "scissors", "--rings", "prod:gf:5,gf:4,gf:4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("pass"), "expected pass rows:\n{text}");
}

#[test]
fn verify_scissors_on_zmod4_passes() {
    let out = rsc(&["verify", "scissors", "--rings", "zmod:4"]);
    assert_eq!(code(&out), 0, "stdout:\n{}", stdout(&out));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = rsc(&["verify", "bogus", "--ring", "gf:3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_ring_is_a_usage_error() {
    let out = rsc(&["witt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn json_and_csv_conflict_is_a_usage_error() {
    let out = rsc(&["verify", "witt", "--ring", "gf:3", "--json", "--csv"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cap_exceeded_is_exit_three() {
    let out = rsc(&["homology", "--ring", "gf:9", "--group", "sl2", "--dim", "3"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "witt", "--ring", "gf:3", "--json"];
    let a = rsc(&args);
    let b = rsc(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "verify JSON must be byte-identical across runs");
}

#[test]
fn cache_dir_flag_caches_and_repeats_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "homology", "--ring", "gf:3", "--group", "b", "--dim", "3", "--json", "--cache-dir", d,
    ];
    let a = rsc(&args);
    assert_eq!(code(&a), 0);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0, "cache directory stayed empty");
    let b = rsc(&args);
    assert_eq!(a.stdout, b.stdout, "cached run must repeat the same bytes");
}

#[test]
fn cache_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = rsc_env(
        &["homology", "--ring", "gf:3", "--group", "t", "--dim", "2", "--json"],
        "RSC_CACHE_DIR",
        d,
    );
    assert_eq!(code(&out), 0);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0, "RSC_CACHE_DIR was ignored");
}

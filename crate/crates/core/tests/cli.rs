use std::process::Command;

use fibpow::cli::{check_document, parse_certificate};

fn fibpow(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fibpow")).args(args).output().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [&[][..], &["--prime", "15"], &["--prime", "7", "--verbose", "5"], &["--prime", "7", "--search-cap", "5"]] {
        let out = fibpow(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_0() {
    let out = fibpow(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("--search-cap"));
}

#[test]
fn certified_run_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = fibpow(&["--prime", "13", "--verbose", "2", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    // level 2 prints one row per swept d
    assert!(stdout.lines().filter(|l| l.trim_start().starts_with("d =")).count() >= 150);

    let doc = parse_certificate(&std::fs::read_to_string(&path).unwrap()).unwrap();
    check_document(&doc).unwrap();
    let verdict = doc.verdict.clone().unwrap();
    assert_eq!(verdict, vec![[2, 0, 0], [3, 1, 0], [3, 2, 0], [4, 3, 0], [7, 0, 1], [8, 6, 1], [9, 8, 1]]);
    assert!(doc.failure.is_none());
    let names: Vec<&str> = doc.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(
        names,
        ["search", "small_cases", "matveev", "reduction_round1", "reduced_cap", "reduction_round2", "residuals", "verdict"]
    );

    // a tampered verdict is caught by the checker
    let mut bad = doc.clone();
    bad.verdict.as_mut().unwrap().push([10, 1, 2]);
    assert!(check_document(&bad).is_err());
}

#[test]
fn stage_failure_exits_3_without_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fail.json");
    let out = fibpow(&["--prime", "13", "--search-cap", "50", "--verbose", "0", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let doc = parse_certificate(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(doc.verdict.is_none());
    let f = doc.failure.unwrap();
    assert_eq!((f.stage.as_str(), f.kind.as_str()), ("reduction_round2", "stage_failure"));
}

#[test]
fn precision_exhaustion_exits_4() {
    let out = fibpow(&["--prime", "13", "--precision-max", "128", "--verbose", "0"]);
    assert_eq!(out.status.code(), Some(4));
}

use std::process::Command;

fn flaginst(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flaginst")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn tmp(name: &str) -> String {
    std::env::temp_dir().join(format!("flaginst-cli-{}-{name}", std::process::id())).display().to_string()
}

#[test]
fn chow_eval_degree() {
    let (code, out, _) = flaginst(&["chow", "eval", "(h1+h2)^3"]);
    assert_eq!(code, 0);
    assert!(out.contains('6'), "{out}");
}

#[test]
fn line_cohomology() {
    let (code, out, _) = flaginst(&["coh", "line", "1", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains('8'), "{out}");
}

#[test]
fn fixture_verifies_and_jumps_once() {
    let path = tmp("charge1.json");
    let (code, json, err) = flaginst(&["monad", "fixture", "charge1"]);
    assert_eq!(code, 0, "{err}");
    std::fs::write(&path, json).unwrap();
    let (code, out, _) = flaginst(&["monad", "verify", "--in", &path]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("verified"), "{out}");
    let (code, out, err) = flaginst(&["jump", "pencil", "--in", &path, "--base", "1,2,3:1,-1,0", "--dir", "p", "--vec", "1,-2,5"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("validated jumping conics: 1"), "{out}");
    std::fs::remove_file(path).ok();
}

#[test]
fn generation_is_reproducible() {
    let a = flaginst(&["monad", "gen", "--charge", "2", "--seed", "5"]);
    let b = flaginst(&["monad", "gen", "--charge", "2", "--seed", "5"]);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
}

#[test]
fn verification_failure_exit_code() {
    let path = tmp("zero.json");
    let (_, json, _) = flaginst(&["monad", "fixture", "charge1", "--f", "0,0,0", "--g", "0,0,0", "--gamma", "0", "--delta", "0"]);
    std::fs::write(&path, json).unwrap();
    let (code, _, _) = flaginst(&["monad", "verify", "--in", &path]);
    assert_eq!(code, 3);
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_error_exit_code() {
    let (code, _, _) = flaginst(&["coh", "line", "one"]);
    assert_eq!(code, 2);
}

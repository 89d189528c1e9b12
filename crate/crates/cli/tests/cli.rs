use std::process::{Command, Output, Stdio};
use std::io::Write;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uclab")).args(args).output().unwrap()
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ucf");
    std::fs::write(&bad, "{1,x}\n").unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/nonexistent.ucf"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "snk", "--n", "31", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn size_guard_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("big.ucf");
    let status = Command::new(env!("CARGO_BIN_EXE_uclab"))
        .args(["construct", "binomial", "--n", "12", "--k", "6", "-o", out.to_str().unwrap()])
        .env("UCLAB_SIZE_CAP", "100")
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(3));
    assert_eq!(run(&["enumerate", "--n", "5"]).status.code(), Some(3));
}

#[test]
fn tampered_certificate_exits_1() {
    let cert = String::from_utf8(run(&["verify", "gilmer-refinement"]).stdout).unwrap();
    let line = cert.lines().find(|l| l.contains("lower_bound=") && !l.contains("local=")).unwrap();
    let (head, _) = line.split_once("lower_bound=").unwrap();
    let forged = cert.replace(line, &format!("{head}lower_bound=1000.0"));
    let mut child = Command::new(env!("CARGO_BIN_EXE_uclab"))
        .args(["replay", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(forged.as_bytes()).unwrap();
    assert_eq!(child.wait().unwrap().code(), Some(1));
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["approx-uc", "--n", "300", "--trials", "200", "--format", "json"][..],
        &["verify", "key-lemma", "--format", "csv"][..],
        &["construct", "s12-4", "--format", "json"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn written_family_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.ucf");
    let p = path.to_str().unwrap();
    assert!(run(&["construct", "--style", "bitstring", "-o", p, "s12-4"]).status.success());
    let out = run(&["analyze", p, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["family_size"], 1045);
    assert_eq!(v["union_closed"], true);
    assert_eq!(v["abundant"], serde_json::json!([1, 2]));
}

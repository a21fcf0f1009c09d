use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twisted-hecke"))
}

#[test]
fn describe_sp58_json() {
    let out = bin().args(["describe", "--example", "sp58", "--format", "json", "--q", "3/2"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["weyl_order"], 384);
    assert_eq!(v["specialized"][4]["value"], "243/32");
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("twisted-hecke-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "[1, 2").unwrap();
    let out = bin().args(["describe", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
    let invalid = dir.join("invalid.json");
    std::fs::write(&invalid, r#"{"group": {"family": "GL", "n": 5}, "blocks": [{"side": "GL", "dim": 1, "e": 2, "torsion": 1}]}"#)
        .unwrap();
    let out = bin().args(["describe", "--input"]).arg(&invalid).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(bin().args(["count", "--example", "gl1", "--order", "0"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["check", "--rank-bound", "0"]).output().unwrap().status.code(), Some(0));
}

#[test]
fn check_is_deterministic() {
    let run = || bin().args(["check", "--seed", "7", "--triples", "10", "--rank-bound", "2"]).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn count_text() {
    let out = bin().args(["count", "--example", "sp2", "--order", "2"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("total: 4"), "{text}");
}

use std::process::Command;

use selfsim::cli::run;
use selfsim::spec_io::ProblemSpec;

fn sh(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["selfsim"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn identity_fixes_words() {
    assert_eq!(
        sh(&["act", "--element", "0,0,0", "--word", "1234"]),
        (0, "1234\n".into(), String::new())
    );
    assert_eq!(sh(&["act", "--element", "a", "--word", "1424"]).1, "1224\n");
}

#[test]
fn state_and_closed_form() {
    let (code, out, _) = sh(&[
        "state",
        "--spec",
        "heisenberg_prime",
        "--element",
        "c",
        "--word",
        "333",
        "--closed-form",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().next().unwrap().split(' ').next().unwrap(),
        "(-3,0,1)"
    );
    assert!(out.contains("agrees"));
}

#[test]
fn odometer_classification() {
    let (code, out, _) = sh(&["classify", "--spec", "odometer"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: StrictlyContracting"));
    assert!(out.contains("core trivial: true"));
}

#[test]
fn json_and_text_verdicts_agree() {
    for spec in ["heisenberg", "odometer"] {
        let (_, text, _) = sh(&["classify", "--spec", spec]);
        let (_, json, _) = sh(&["classify", "--spec", spec, "--json"]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let verdict = v["verdict"].as_str().unwrap();
        assert!(text.contains(&format!("verdict: {verdict}")));
        assert!(text.contains(&format!("core trivial: {}", v["core_trivial"])));
        assert!(text.contains(&format!("chi: {}", v["chi"].as_str().unwrap())));
    }
}

#[test]
fn automaton_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("a.dot");
    let (code, out, _) = sh(&["automaton", "--seed", "a", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Finite: 2 states"));
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .contains("s0 -> s1 [label=\"4|2\"]"));
    let (code, out, _) = sh(&[
        "automaton",
        "--spec",
        "heisenberg_prime",
        "--seed",
        "c",
        "--max-states",
        "100",
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("BoundExceeded: 100 states"));
}

#[test]
fn digits_round_trip() {
    let (code, out, _) = sh(&["digits", "--mode", "nonfinite"]);
    assert_eq!(code, 0);
    let spec = ProblemSpec::from_json(&out).unwrap();
    assert_eq!(spec.digits, ProblemSpec::heisenberg_prime().digits);
    let (code, _, err) = sh(&["digits", "--mode", "nonfinite", "--k", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("k-th power"));
    let (code, _, _) = sh(&["digits", "--spec", "odometer", "--mode", "nonfinite"]);
    assert_eq!(code, 1);
}

#[test]
fn schreier_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let dot = dir.path().join("g.dot");
    let (code, out, _) = sh(&[
        "schreier",
        "--level",
        "7",
        "--basepoint",
        "1111111",
        "--csv",
        csv.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("fitted degree"));
    let csv = std::fs::read_to_string(csv).unwrap();
    assert!(csv.starts_with("r,ball_size\n0,1\n1,3\n"));
    assert_eq!(
        std::fs::read_to_string(dot)
            .unwrap()
            .matches("[label=")
            .count(),
        16384
    );
    let (code, _, err) = sh(&["schreier", "--level", "3", "--basepoint", "111"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"model": {"kind": "unitriangular", "n": 3}}"#).unwrap();
    assert_eq!(sh(&["classify", "--spec", bad.to_str().unwrap()]).0, 2);
    let not_transversal = ProblemSpec::heisenberg()
        .to_json()
        .replace("[0, 1, 1]", "[0, 2, 0]");
    std::fs::write(&bad, not_transversal).unwrap();
    let (code, _, err) = sh(&[
        "act",
        "--spec",
        bad.to_str().unwrap(),
        "--element",
        "a",
        "--word",
        "1",
    ]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(sh(&["act", "--element", "a", "--word", "15"]).0, 2);
    assert_eq!(sh(&["act", "--element", "1,2", "--word", "1"]).0, 2);
    assert_eq!(sh(&["nonsense"]).0, 2);
    assert_eq!(sh(&["--help"]).0, 0);
}

#[test]
fn verify_paper_reports_each_item() {
    let (code, out, _) = sh(&["verify-paper", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 13);
    let all = checks.iter().all(|c| c["passed"].as_bool().unwrap());
    assert_eq!(code, if all { 0 } else { 1 });
    assert_eq!(v["passed"].as_bool().unwrap(), all);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args([
            "act",
            "--spec",
            "odometer",
            "--element",
            "5",
            "--word",
            "0000",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1010\n");
}

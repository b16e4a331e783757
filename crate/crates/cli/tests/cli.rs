use std::path::PathBuf;
use std::process::Command;
use zmtforge::schema::Artifacts;
use zmtforge::{emit_report, execute, parse_bundle, parse_problem, verify_bundle, CliError, Format, RunOptions, Task};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str) -> zmtforge::ProblemFile {
    parse_problem(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zmtforge"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zmtforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn worked_fixture_parses() {
    let p = load("worked_hensel.json");
    assert_eq!(p.relations[0], "-a + x + b*x*y + 2*b*x^2");
    assert_eq!(p.task, Some(Task::Hensel));
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(parse_problem(&text).unwrap(), p);
}

#[test]
fn mhl_is_an_alias() {
    let text = std::fs::read_to_string(fixture("worked_hensel.json")).unwrap().replace("\"hensel\"", "\"mhl\"");
    assert_eq!(parse_problem(&text).unwrap().task, Some(Task::Hensel));
}

#[test]
fn empty_gb_is_trivial() {
    let b = execute(&load("gb_empty.json"), Task::Gb, &RunOptions::default()).unwrap();
    assert!(b.passed());
    match &b.artifacts {
        Artifacts::Gb { basis, .. } => assert!(basis.is_empty()),
        other => panic!("unexpected artifacts {other:?}"),
    }
}

#[test]
fn malformed_token_has_a_position() {
    let text = std::fs::read_to_string(fixture("malformed.json")).unwrap();
    match parse_problem(&text) {
        Err(CliError::Parse { col, msg, .. }) => {
            assert_eq!(col, 3);
            assert!(msg.contains("relations[0]"));
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"version": 1, "base": {"vars": ["x"]}, "colour": "blue"}"#;
    assert!(matches!(parse_problem(text), Err(CliError::Parse { .. })));
    let text = r#"{"version": 2, "base": {"vars": ["x"]}}"#;
    assert!(matches!(parse_problem(text), Err(CliError::Config(_))));
}

#[test]
fn lex_basis_is_golden() {
    let b = execute(&load("gb_lex.json"), Task::Gb, &RunOptions::default()).unwrap();
    match &b.artifacts {
        Artifacts::Gb { basis, order, .. } => {
            assert_eq!(order, "lex");
            assert_eq!(basis, &vec!["y^2 - 1".to_string(), "x - y".to_string()]);
        }
        other => panic!("unexpected artifacts {other:?}"),
    }
    // the command-line order wins over the file
    let opts = RunOptions { order: Some("degrevlex".into()), ..Default::default() };
    let b = execute(&load("gb_lex.json"), Task::Gb, &opts).unwrap();
    assert_eq!(b.options.order, "degrevlex");
    assert!(b.passed());
}

#[test]
fn json_round_trip_is_exact() {
    for (name, task) in [("member.json", Task::Member), ("integral_cert.json", Task::IntegralCert), ("global.json", Task::ZmtGlobal)] {
        let b = execute(&load(name), task, &RunOptions::default()).unwrap();
        let json = emit_report(&b, Format::Json).unwrap();
        let back = parse_bundle(&json).unwrap();
        assert_eq!(back, b);
        assert_eq!(emit_report(&back, Format::Json).unwrap(), json);
    }
}

#[test]
fn output_is_deterministic() {
    let a = emit_report(&execute(&load("radical.json"), Task::Radical, &RunOptions::default()).unwrap(), Format::Json).unwrap();
    let b = emit_report(&execute(&load("radical.json"), Task::Radical, &RunOptions::default()).unwrap(), Format::Json).unwrap();
    assert_eq!(a, b);
}

#[test]
fn tampered_bundles_fail() {
    let b = execute(&load("member.json"), Task::Member, &RunOptions::default()).unwrap();
    let mut bad = b.clone();
    if let Artifacts::Member { cofactors: Some(c), .. } = &mut bad.artifacts {
        c[0] = format!("{} + 1", c[0]);
    }
    assert!(verify_bundle(&b).unwrap().iter().all(|v| v.pass));
    assert!(verify_bundle(&bad).unwrap().iter().any(|v| !v.pass));

    let b = execute(&load("integral_cert.json"), Task::IntegralCert, &RunOptions::default()).unwrap();
    let mut bad = b.clone();
    if let Artifacts::IntegralCert { cert } = &mut bad.artifacts {
        cert.coeffs[0] = format!("{} + 1", cert.coeffs[0]);
    }
    let vs = verify_bundle(&bad).unwrap();
    assert!(vs.iter().any(|v| !v.pass && v.detail.contains("NotAnnihilating")));
}

#[test]
fn newton_reaches_the_fourth_power() {
    let b = execute(&load("worked_newton.json"), Task::Newton, &RunOptions::default()).unwrap();
    assert!(b.passed());
    match &b.artifacts {
        Artifacts::Newton { states } => {
            assert_eq!(states.len(), 3);
            assert_eq!(states[1].point, vec!["a".to_string(), "b".to_string()]);
            assert_eq!(states[2].k, 2);
        }
        other => panic!("unexpected artifacts {other:?}"),
    }
}

#[test]
fn text_report_names_the_lemmas() {
    let b = execute(&load("one_variable_zmt.json"), Task::Zmt, &RunOptions::default()).unwrap();
    let t = emit_report(&b, Format::Text).unwrap();
    assert!(t.contains("Emmanuel"));
    assert!(t.contains("LyingOver"));
    assert!(t.contains("(verified)"));
}

#[test]
fn task_mismatch_is_a_config_error() {
    let e = execute(&load("member.json"), Task::Gb, &RunOptions::default()).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn exit_codes() {
    let ok = bin().args(["gb", fixture("gb_lex.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let parse = bin().args(["gb", fixture("malformed.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(parse.status.code(), Some(2));
    // no exponent k ≤ 1 has (x + y)^k in the ideal: a verdict failure
    let weak = bin().args(["radical", fixture("radical.json").to_str().unwrap(), "--exp-cap", "1"]).output().unwrap();
    assert_eq!(weak.status.code(), Some(1), "{}", String::from_utf8_lossy(&weak.stdout));
    let cap = bin().args(["radical", fixture("radical.json").to_str().unwrap(), "--degree-cap", "3"]).output().unwrap();
    assert_eq!(cap.status.code(), Some(3));
    let global = bin().args(["zmt-global", fixture("one_variable_zmt.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(global.status.code(), Some(2));
}

#[test]
fn saved_bundle_verifies_and_tampering_is_caught() {
    let out = tmp("zmt.json");
    let st = bin()
        .args(["zmt", fixture("one_variable_zmt.json").to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(st.status.success());
    let v = bin().args(["verify", out.to_str().unwrap()]).output().unwrap();
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stdout));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut b = parse_bundle(&text).unwrap();
    if let Artifacts::Zmt { s, .. } = &mut b.artifacts {
        *s = format!("{s} + a");
    }
    let bad = tmp("zmt_bad.json");
    std::fs::write(&bad, emit_report(&b, Format::Json).unwrap()).unwrap();
    let v = bin().args(["verify", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stdout).contains("FAIL"));
}

#[test]
fn hensel_bundle_on_the_worked_example() {
    let opts = RunOptions { trace: true, ..Default::default() };
    let b = execute(&load("worked_hensel.json"), Task::Hensel, &opts).unwrap();
    assert!(b.passed(), "{:?}", b.verdicts);
    match &b.artifacts {
        Artifacts::Hensel { h, tvars, trace, .. } => {
            assert_eq!(tvars[0], "T");
            assert!(h.contains("T^7"));
            assert!(trace.is_some());
        }
        other => panic!("unexpected artifacts {other:?}"),
    }
    let back = parse_bundle(&emit_report(&b, Format::Json).unwrap()).unwrap();
    assert!(verify_bundle(&back).unwrap().iter().all(|v| v.pass));
}

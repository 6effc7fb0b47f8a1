use std::process::Command;

use hyperinv::cli::{self, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, EXIT_UNDEFINED};
use hyperinv::fixtures;
use hyperinv::invariants::{Engine, Entry, Family, Method};
use hyperinv::parser::parse_expression;
use hyperinv::symbolic::ZeroTester;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("hyperinv").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, v)
}

#[test]
fn show_prints_the_fixture() {
    let (code, out, _) = run(&["show", "ex1_source.model"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("kind = cr-system"));
    let (code, v) = json(&["show", "ex4_map.transform"]);
    assert_eq!(code, EXIT_OK);
    assert!(v.is_object());
}

#[test]
fn invariant_json_parses_back_to_the_same_values() {
    let engine = Engine::default();
    let tester = ZeroTester::default();
    for (file, family) in [
        ("ex1_source.model", Family::SemiDep),
        ("ex2_coupled_source.model", Family::SemiIndep),
        ("ex4_lambda.model", Family::Joint),
    ] {
        let model = fixtures::model(file);
        let scope = model.frame().scope();
        let sig = engine.compute(&model, Method::Complex, family).unwrap();
        let (code, v) = json(&["invariants", file, "--family", &family.to_string()]);
        assert_eq!(code, EXIT_OK);
        let entries = v["entries"].as_object().unwrap();
        assert!(!entries.is_empty());
        for (id, e) in entries {
            let Some(Entry::Defined(want)) = sig.get(id) else {
                assert_eq!(e["status"], "undefined", "{file} {id}");
                continue;
            };
            let got = parse_expression(e["expr"].as_str().unwrap(), &scope).unwrap();
            assert!(tester.check(&(&got - want)).unwrap().holds(), "{file} {id}");
        }
    }
}

#[test]
fn undefined_entry_exits_3() {
    let (code, _, err) = run(&[
        "invariants",
        "ex1_source.model",
        "--family",
        "semi-indep",
        "--entry",
        "I3c",
    ]);
    assert_eq!(code, EXIT_UNDEFINED);
    assert!(err.contains("undefined"));
    let (code, v) = json(&["invariants", "ex1_source.model", "--entry", "h1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["id"], "h1");
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["invariants", "no_such.model"][..],
        &["invariants", "ex1_source.model", "--family", "bogus"],
        &["invariants", "ex1_source.model", "--entry", "Q7"],
        &["verify-paper", "--example", "9"],
        &["transform", "ex4_lambda.model", "ex1_source.model"],
        &["frobnicate"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn cr_check_reports_both_outcomes() {
    let (code, v) = json(&["cr-check", "ex1_general_source.model"]);
    assert_eq!((code, v["cr"].as_bool()), (EXIT_OK, Some(true)));
    let (code, v) = json(&["cr-check", "general_noncr.model"]);
    assert_eq!((code, v["cr"].as_bool()), (EXIT_OK, Some(false)));
    assert!(v["violated"].is_string());
}

#[test]
fn split_and_transform_emit_models() {
    let (code, v) = json(&["split", "ex4_lambda.model"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["kind"], "scalar");
    let (code, out, _) = run(&["transform", "ex4_unit.model", "ex4_map.transform"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("kind = cr-system"));
}

#[test]
fn compare_exit_codes() {
    let (code, v) = json(&[
        "compare",
        "ex4_unit.model",
        "ex4_lambda.model",
        "--map",
        "ex4_map.transform",
        "--verify",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"]["status"], "necessary-conditions-hold");
    let (code, v) = json(&[
        "compare",
        "ex1_source.model",
        "ex4_unit.model",
        "--family",
        "semi-dep",
    ]);
    assert_eq!(code, EXIT_MISMATCH);
    assert_eq!(v["verdict"]["status"], "obstructed");
}

#[test]
fn annihilate_all_holds() {
    let (code, out, _) = run(&["annihilate", "--all"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

fn binary(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_hyperinv"))
        .args(args)
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

#[test]
fn process_exit_codes() {
    assert_eq!(binary(&["verify-paper"]), EXIT_OK);
    assert_eq!(binary(&["invariants", "no_such.model"]), EXIT_INPUT);
    assert_eq!(
        binary(&[
            "invariants",
            "ex4_unit.model",
            "--family",
            "semi-indep",
            "--entry",
            "I1c"
        ]),
        EXIT_UNDEFINED
    );
}

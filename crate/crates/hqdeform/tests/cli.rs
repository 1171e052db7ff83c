//! End-to-end checks of the command-line surface: the shipped fixture files
//! agree with the built-in fixtures, reports carry the full condition list,
//! exit codes follow the pass/fail/usage convention, and the per-fixture
//! pipeline reproduces its recorded reports byte for byte.

use std::fs;
use std::path::Path;

use hqdeform::cli::run_command;
use hqdeform::config::{load_config, to_structure_input};
use hqdeform::fixtures::{fixture_input, FIXTURE_NAMES};
use hqdeform::structure::build_structure;

fn fixture_path(name: &str) -> String {
    // tests run with the package root as working directory
    format!("../../fixtures/{name}.json")
}

fn run(args: &[&str]) -> (i32, String) {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run_command(&owned)
}

const ALL_CONDITION_IDS: [&str; 23] = [
    "setup.a",
    "setup.b",
    "setup.c",
    "setup.d",
    "cor2.item1",
    "cor2.item2",
    "cor2.item3",
    "cor2.item4",
    "cor2.item5",
    "cor2.item6",
    "det.lambda",
    "det.determinant",
    "gen.alpha",
    "gen.1",
    "gen.2.eq1",
    "gen.2.eq2",
    "gen.2.1a",
    "gen.2.2a",
    "gen.3",
    "gen.5",
    "gen.6.commute",
    "gen.6.sigma",
    "gen.6.nilpotent",
];

#[test]
fn shipped_fixture_files_match_the_builtins() {
    for name in FIXTURE_NAMES {
        let config = load_config(Path::new(&fixture_path(name))).unwrap();
        let (input, declared_q) = to_structure_input(&config).unwrap();
        let builtin = fixture_input(name).unwrap();

        assert_eq!(input.alpha_hat, builtin.alpha_hat, "{name}: alpha_hat");
        assert_eq!(
            input.chi_alpha.values, builtin.chi_alpha.values,
            "{name}: chi_alpha"
        );
        assert_eq!(
            input.chi_sigma.values, builtin.chi_sigma.values,
            "{name}: chi_sigma"
        );
        assert_eq!((input.x1, input.x2), (builtin.x1, builtin.x2), "{name}: x1/x2");
        assert_eq!(input.delta1, builtin.delta1, "{name}: delta1");
        assert_eq!(input.delta2, builtin.delta2, "{name}: delta2");

        let (ga, gb) = (&input.ctx.group, &builtin.ctx.group);
        assert_eq!(ga.n, gb.n, "{name}: group order");
        for a in ga.elements() {
            assert_eq!(ga.name(a), gb.name(a), "{name}: element {a}");
            assert_eq!(
                input.ctx.rep.endo(a),
                builtin.ctx.rep.endo(a),
                "{name}: matrix at {a}"
            );
            for b in ga.elements() {
                assert_eq!(ga.mul(a, b), gb.mul(a, b), "{name}: product {a}*{b}");
                assert_eq!(
                    input.ctx.f(a, b),
                    builtin.ctx.f(a, b),
                    "{name}: cocycle at ({a}, {b})"
                );
            }
        }

        // the declared q must match the derived one
        let st = build_structure(builtin).unwrap();
        assert_eq!(declared_q.as_ref(), Some(&st.qp.q), "{name}: declared q");
    }
}

#[test]
fn validate_passes_and_lists_every_condition() {
    for name in FIXTURE_NAMES {
        let (code, out) = run(&["validate", &fixture_path(name)]);
        assert_eq!(code, 0, "{name}: {out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let ids: Vec<&str> = v["conditions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["id"].as_str().unwrap())
            .collect();
        for want in ALL_CONDITION_IDS {
            assert!(ids.contains(&want), "{name}: report lacks {want}");
        }
        assert_eq!(v["passed"], serde_json::Value::Bool(true), "{name}");
        assert!(v["failed"].as_array().unwrap().is_empty(), "{name}");
    }
}

#[test]
fn corrupted_config_fails_naming_the_condition() {
    let text = fs::read_to_string(fixture_path("dihedral-h1")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    // flattening chi_sigma breaks the conjugation equivariance of delta_1
    v["chi_sigma"] = serde_json::json!(["1", "1", "1", "1", "1", "1", "1", "1"]);
    let tmp = std::env::temp_dir().join("hqdeform-cli-corrupted.json");
    fs::write(&tmp, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    let (code, out) = run(&["validate", tmp.to_str().unwrap()]);
    fs::remove_file(&tmp).ok();
    assert_eq!(code, 1, "corrupted config should fail validation: {out}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let failed: Vec<&str> = report["failed"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert!(failed.contains(&"cor2.item2"), "failed list: {failed:?}");
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let good = fixture_path("dihedral-h1");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["validate"],
        vec!["validate", "../../fixtures/no-such-fixture.json"],
        vec!["deform", &good],
        vec!["assoc-check", &good, "--samples", "many"],
        vec!["hopf-check", "--field", "fp:6"],
        vec!["examples", "run", "no-such-example"],
    ];
    for args in &cases {
        let (code, out) = run(args);
        assert_eq!(code, 2, "args {args:?} gave {code}: {out}");
        assert!(out.contains("error"), "args {args:?}: {out}");
    }

    // a declared q that contradicts the structure is a config error
    let text = fs::read_to_string(fixture_path("dihedral-h1")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["q"] = serde_json::json!("-1");
    let tmp = std::env::temp_dir().join("hqdeform-cli-wrong-q.json");
    fs::write(&tmp, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (code, out) = run(&["validate", tmp.to_str().unwrap()]);
    fs::remove_file(&tmp).ok();
    assert_eq!(code, 2, "mismatched q should be a config error: {out}");
    assert!(out.contains('q'), "{out}");
}

#[test]
fn pipeline_reproduces_the_recorded_reports() {
    for name in FIXTURE_NAMES {
        let path = fixture_path(name);
        let runs: [(&str, Vec<&str>); 4] = [
            ("validate", vec!["validate", &path]),
            (
                "assoc-check",
                vec![
                    "assoc-check",
                    &path,
                    "--samples",
                    "100",
                    "--seed",
                    "42",
                    "--max-degree",
                    "3",
                ],
            ),
            ("nontrivial", vec!["nontrivial", &path, "--degree-bound", "4"]),
            ("resolution-check", vec!["resolution-check", &path]),
        ];
        for (tag, args) in runs {
            let (code, first) = run(&args);
            assert_eq!(code, 0, "{name} {tag}: {first}");
            let (_, second) = run(&args);
            assert_eq!(first, second, "{name} {tag}: output is not deterministic");
            let golden = fs::read_to_string(format!("tests/golden/{name}.{tag}.json"))
                .expect("recorded report exists");
            assert_eq!(
                format!("{first}\n"),
                golden,
                "{name} {tag}: drifted from the recorded report"
            );
        }
    }
}

#[test]
fn deform_reports_the_series_exactly() {
    let path = fixture_path("dihedral-h1");
    let (code, out) = run(&[
        "deform",
        &path,
        "--a",
        "x1*w[t]",
        "--b",
        "x2*w[s]",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let coeffs = v["coefficients"].as_array().unwrap();
    assert!(!coeffs.is_empty());
    assert_eq!(coeffs[0].as_str().unwrap(), "x1*x2*w[t*s]");
}

#[test]
fn examples_registry_runs_and_reproduces() {
    let (code, out) = run(&["examples", "list"]);
    assert_eq!(code, 0);
    for name in FIXTURE_NAMES {
        assert!(out.contains(name), "listing lacks {name}");
    }
    let (code, out) = run(&["examples", "run", "cyclic-recipe"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reproduced"], serde_json::Value::Bool(true));
}

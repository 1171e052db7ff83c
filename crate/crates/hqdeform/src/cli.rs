//! Crossed-product element grammar and the command dispatcher behind the
//! `hqdeform` binary.
//!
//! Elements are written as signed sums of `POLY*w[WORD]` terms: the
//! polynomial part uses the shared grammar from [`crate::config`], `WORD`
//! multiplies generator or element names (`e` is the identity), and a bare
//! `w[g]` means the group basis element itself. Examples: `w[e]`,
//! `x1^2*w[t] - 3*w[t*s]`, `(x1^2 + 2*x2)*w[s]`.
//!
//! Every command prints a JSON report with stable key order and exits 0
//! when the checked property holds, 1 when a check verifiably fails, and 2
//! on usage or configuration errors.

use crate::cohomology::{self, CoboundaryOutcome};
use crate::config::{self, Config, ParseError, PolyParser};
use crate::crossed::{CrossedElement, Ctx};
use crate::deform;
use crate::fixtures;
use crate::hopf::{self, HopfMaps};
use crate::poly::Poly;
use crate::resolution;
use crate::scalar::QParam;
use crate::structure::{
    build_structure, derived_invariants, validate_structure, HqStructure,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Parses the element grammar over the context's group and variables.
pub fn parse_element(text: &str, ctx: &Ctx) -> Result<CrossedElement, ParseError> {
    if text.trim() == "0" {
        return Ok(CrossedElement::zero(ctx));
    }
    let mut p = PolyParser::new(text, ctx.n_vars, ctx.field);
    let mut acc = CrossedElement::zero(ctx);
    let mut first = true;
    loop {
        let negate = match p.peek() {
            None if first => return Err(p.err("empty element")),
            None => break,
            Some(b'-') => {
                p.bump();
                true
            }
            Some(b'+') => {
                p.bump();
                false
            }
            Some(_) if first => false,
            Some(c) => {
                return Err(p.err(format!(
                    "expected '+' or '-' between terms, found {:?}",
                    c as char
                )))
            }
        };
        first = false;
        let mut poly = Poly::one(ctx.n_vars, ctx.field);
        loop {
            if at_group_part(&mut p) {
                p.bump();
                p.eat(b'[');
                let word = group_word(&mut p)?;
                let g = ctx
                    .group
                    .parse_word(&word)
                    .map_err(|e| p.err(e.to_string()))?;
                let mut term = CrossedElement::term(ctx, poly, g);
                if negate {
                    term = term.neg();
                }
                acc = acc.add(&term);
                break;
            }
            poly = poly.mul(&p.factor()?);
            if !p.eat(b'*') {
                return Err(p.err("expected '*' and then a group part w[..]"));
            }
        }
    }
    Ok(acc)
}

fn at_group_part(p: &mut PolyParser) -> bool {
    p.peek() == Some(b'w') && p.src.get(p.pos + 1) == Some(&b'[')
}

fn group_word(p: &mut PolyParser) -> Result<String, ParseError> {
    let start = p.pos;
    while p.pos < p.src.len() && p.src[p.pos] != b']' {
        p.pos += 1;
    }
    if p.pos == p.src.len() {
        return Err(p.err("unterminated group part, expected ']'"));
    }
    let word = std::str::from_utf8(&p.src[start..p.pos]).unwrap().to_string();
    p.pos += 1;
    Ok(word)
}

// ---------------------------------------------------------------------------
// command dispatch

const USAGE: &str = "usage: hqdeform <command> [args]\n\
  validate <config.json>\n\
  deform <config.json> --a <element> --b <element>\n\
  assoc-check <config.json> [--samples 100] [--seed 42] [--max-degree 3]\n\
  nontrivial <config.json> [--degree-bound 4]\n\
  hopf-check [--field q] [--q 1] [--bound 3] [--order 6]\n\
  resolution-check <config.json> [--max-total-degree 3]\n\
  examples (list | run <name>)";

/// Expected outcomes for one shipped fixture.
pub struct FixtureVerdicts {
    pub name: &'static str,
    pub q: &'static str,
    pub validation_passes: bool,
    pub nontrivial: bool,
}

/// The shipped fixture library with its recorded verdicts.
pub const FIXTURE_VERDICTS: [FixtureVerdicts; 4] = [
    FixtureVerdicts {
        name: "dihedral-h1",
        q: "1",
        validation_passes: true,
        nontrivial: true,
    },
    FixtureVerdicts {
        name: "dihedral-hm1",
        q: "-1",
        validation_passes: true,
        nontrivial: true,
    },
    FixtureVerdicts {
        name: "dihedral-h1-twisted-alpha",
        q: "1",
        validation_passes: true,
        nontrivial: true,
    },
    FixtureVerdicts {
        name: "cyclic-recipe",
        q: "1",
        validation_passes: true,
        nontrivial: true,
    },
];

fn usage_error(message: impl std::fmt::Display) -> (i32, String) {
    let report = json!({
        "error": message.to_string(),
        "usage": USAGE,
    });
    (2, serde_json::to_string_pretty(&report).unwrap())
}

fn render(report: &Value, exit: i32) -> (i32, String) {
    (exit, serde_json::to_string_pretty(report).unwrap())
}

fn flag_map(
    rest: &[String],
    allowed: &[&str],
) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < rest.len() {
        let arg = &rest[i];
        let Some(name) = arg.strip_prefix("--") else {
            return Err(format!("unexpected argument {arg:?}"));
        };
        if !allowed.contains(&name) {
            return Err(format!("unknown flag --{name}"));
        }
        let Some(value) = rest.get(i + 1) else {
            return Err(format!("flag --{name} needs a value"));
        };
        out.insert(name.to_string(), value.clone());
        i += 2;
    }
    Ok(out)
}

fn numeric_flag<T: std::str::FromStr>(
    flags: &BTreeMap<String, String>,
    name: &str,
    default: T,
) -> Result<T, String> {
    match flags.get(name) {
        Some(v) => v.parse().map_err(|_| format!("flag --{name}: bad value {v:?}")),
        None => Ok(default),
    }
}

/// Loads a config and builds the structure, enforcing the optional `q`
/// cross-check. Errors are worth exit code 2.
fn structure_from_path(path: &str) -> Result<(HqStructure, Config), String> {
    let cfg = config::load_config(std::path::Path::new(path))
        .map_err(|e| format!("{path}: {e}"))?;
    let (input, q_override) =
        config::to_structure_input(&cfg).map_err(|e| format!("{path}: {e}"))?;
    let st = build_structure(input).map_err(|e| format!("{path}: {e}"))?;
    if let Some(q) = q_override {
        if q != st.qp.q {
            return Err(format!(
                "{path}: field q: declared {q} but the structure derives {}",
                st.qp.q
            ));
        }
    }
    Ok((st, cfg))
}

fn validate_cmd(path: &str) -> (i32, String) {
    let (st, _) = match structure_from_path(path) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let report = validate_structure(&st);
    let conditions: Vec<Value> = report
        .conditions
        .iter()
        .map(|c| json!({"id": c.id, "ok": c.ok, "detail": c.detail}))
        .collect();
    let passed = report.passed();
    let body = json!({
        "command": "validate",
        "config": path,
        "q": st.qp.q.to_string(),
        "conditions": conditions,
        "failed": report.failed_ids(),
        "passed": passed,
    });
    render(&body, if passed { 0 } else { 1 })
}

fn deform_cmd(path: &str, flags: &BTreeMap<String, String>) -> (i32, String) {
    let (st, _) = match structure_from_path(path) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let (Some(a_text), Some(b_text)) = (flags.get("a"), flags.get("b")) else {
        return usage_error("deform needs --a and --b");
    };
    let a = match parse_element(a_text, &st.ctx) {
        Ok(a) => a,
        Err(e) => return usage_error(format!("--a: {e}")),
    };
    let b = match parse_element(b_text, &st.ctx) {
        Ok(b) => b,
        Err(e) => return usage_error(format!("--b: {e}")),
    };
    match deform::deformed_product(&st, &a, &b) {
        Ok(series) => {
            let coeffs: Vec<String> =
                series.coeffs.iter().map(|c| c.to_string()).collect();
            let body = json!({
                "command": "deform",
                "config": path,
                "a": a.to_string(),
                "b": b.to_string(),
                "q": st.qp.q.to_string(),
                "coefficients": coeffs,
            });
            render(&body, 0)
        }
        Err(e) => {
            let body = json!({
                "command": "deform",
                "config": path,
                "error": e.to_string(),
            });
            render(&body, 1)
        }
    }
}

fn assoc_cmd(path: &str, flags: &BTreeMap<String, String>) -> (i32, String) {
    let samples = match numeric_flag(flags, "samples", 100usize) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let seed = match numeric_flag(flags, "seed", 42u64) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let max_degree = match numeric_flag(flags, "max-degree", 3u16) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let (st, _) = match structure_from_path(path) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let assoc = match deform::check_associativity(&st, samples, max_degree, seed) {
        Ok(r) => r,
        Err(e) => return usage_error(e.to_string()),
    };
    let unit = match deform::check_unit(&st, samples, max_degree, seed ^ 1) {
        Ok(r) => r,
        Err(e) => return usage_error(e.to_string()),
    };
    let passed = assoc.passed() && unit.passed();
    let body = json!({
        "command": "assoc-check",
        "config": path,
        "samples": samples,
        "seed": seed,
        "max_degree": max_degree,
        "associativity": {
            "checked": assoc.triples_checked,
            "failures": assoc.failures,
        },
        "unit": {
            "checked": unit.triples_checked,
            "failures": unit.failures,
        },
        "passed": passed,
    });
    render(&body, if passed { 0 } else { 1 })
}

fn nontrivial_cmd(path: &str, flags: &BTreeMap<String, String>) -> (i32, String) {
    let bound = match numeric_flag(flags, "degree-bound", 4u32) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let (st, _) = match structure_from_path(path) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let report = cohomology::verify_nontriviality(&st, bound);
    let group = &st.ctx.group;
    let coboundary = match &report.coboundary {
        CoboundaryOutcome::Feasible(phi) => {
            let phi0: BTreeMap<String, String> = phi
                .phi0
                .iter()
                .map(|(g, e)| (group.name(*g).to_string(), e.to_string()))
                .collect();
            let phi1: BTreeMap<String, String> = phi
                .phi1
                .iter()
                .map(|(i, e)| (format!("x{}", i + 1), e.to_string()))
                .collect();
            json!({"status": "feasible", "phi0": phi0, "phi1": phi1})
        }
        CoboundaryOutcome::Infeasible {
            certificate,
            certificate_verified,
            rows,
            unknowns,
        } => {
            let cert: Vec<Value> = certificate
                .iter()
                .map(|(row, c)| {
                    json!({
                        "row": rows[*row].label,
                        "coefficient": c.to_string(),
                    })
                })
                .collect();
            json!({
                "status": "infeasible",
                "degree_bound": bound,
                "unknowns": unknowns,
                "certificate": cert,
                "certificate_verified": certificate_verified,
            })
        }
    };
    let witness = report.obstruction.witness.as_ref().map(|(g, m)| {
        let p = Poly::monomial(st.ctx.n_vars, &m.0, st.ctx.field.one());
        format!("{p}*w[{}]", group.name(*g))
    });
    let obstruction = json!({
        "applies": report.obstruction.ok,
        "support": report
            .obstruction
            .upsilon
            .iter()
            .map(|&g| group.name(g).to_string())
            .collect::<Vec<_>>(),
        "eigenvalues_ok": report.obstruction.eigen_ok,
        "witness": witness,
    });
    let body = json!({
        "command": "nontrivial",
        "config": path,
        "degree_bound": bound,
        "is_cocycle": report.is_cocycle,
        "group_group_component_zero": report.gg_component_zero,
        "group_variable_component_zero": report.gv_component_zero,
        "variable_variable_matches_closed_form": report.vv_matches_closed_form,
        "coboundary": coboundary,
        "obstruction": obstruction,
        "nontrivial": report.nontrivial,
    });
    render(&body, if report.nontrivial { 0 } else { 1 })
}

fn hopf_cmd(flags: &BTreeMap<String, String>) -> (i32, String) {
    let field_text = flags.get("field").map(String::as_str).unwrap_or("q");
    let field = match config::parse_field_spec(field_text) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let q_text = flags.get("q").map(String::as_str).unwrap_or("1");
    let q = match field.parse(q_text) {
        Ok(q) => q,
        Err(e) => return usage_error(format!("flag --q: {e}")),
    };
    let bound = match numeric_flag(flags, "bound", 3u32) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let order = match numeric_flag(flags, "order", 6u32) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let qp = match QParam::new(q) {
        Ok(qp) => qp,
        Err(e) => return usage_error(format!("flag --q: {e}")),
    };
    let maps = HopfMaps::standard(&qp);
    let axioms = hopf::verify_hopf_axioms(&maps, bound);
    let fs = match hopf::expq_series(&qp, order) {
        Ok(fs) => fs,
        Err(e) => return usage_error(format!("series: {e}")),
    };
    let twisting = hopf::verify_twisting(&maps, &fs, order, bound);
    let passed = axioms.passed() && twisting.passed();
    let body = json!({
        "command": "hopf-check",
        "field": field_text,
        "q": qp.q.to_string(),
        "q_order": qp.order,
        "bound": bound,
        "order": order,
        "axioms": {"checked": axioms.checked, "failures": axioms.failures},
        "twisting": {"checked": twisting.checked, "failures": twisting.failures},
        "passed": passed,
    });
    render(&body, if passed { 0 } else { 1 })
}

fn resolution_cmd(path: &str, flags: &BTreeMap<String, String>) -> (i32, String) {
    let bound = match numeric_flag(flags, "max-total-degree", 3usize) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let (st, _) = match structure_from_path(path) {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let checks = resolution::identity_battery(&st.ctx, bound);
    let passed = checks.iter().all(|c| c.ok);
    let identities: Vec<Value> = checks
        .iter()
        .map(|c| json!({"id": c.id, "ok": c.ok, "cases": c.cases}))
        .collect();
    let body = json!({
        "command": "resolution-check",
        "config": path,
        "max_total_degree": bound,
        "identities": identities,
        "passed": passed,
    });
    render(&body, if passed { 0 } else { 1 })
}

fn examples_cmd(rest: &[String]) -> (i32, String) {
    match rest.first().map(String::as_str) {
        Some("list") => {
            let list: Vec<Value> = FIXTURE_VERDICTS
                .iter()
                .map(|f| {
                    json!({
                        "name": f.name,
                        "q": f.q,
                        "validation_passes": f.validation_passes,
                        "nontrivial": f.nontrivial,
                    })
                })
                .collect();
            render(&json!({"command": "examples", "fixtures": list}), 0)
        }
        Some("run") => {
            let Some(name) = rest.get(1) else {
                return usage_error("examples run needs a fixture name");
            };
            let Some(expected) =
                FIXTURE_VERDICTS.iter().find(|f| f.name == name.as_str())
            else {
                let known: Vec<&str> =
                    FIXTURE_VERDICTS.iter().map(|f| f.name).collect();
                return usage_error(format!(
                    "unknown fixture {name:?}, expected one of {known:?}"
                ));
            };
            let input = fixtures::fixture_input(name).unwrap();
            let st = build_structure(input).unwrap();
            let validation = validate_structure(&st);
            let inv = derived_invariants(&st);
            let nontrivial = cohomology::verify_nontriviality(&st, 4);
            let observed_q = inv.q.to_string();
            let reproduced = validation.passed() == expected.validation_passes
                && observed_q == expected.q
                && nontrivial.nontrivial == expected.nontrivial;
            let body = json!({
                "command": "examples",
                "fixture": name,
                "expected": {
                    "q": expected.q,
                    "validation_passes": expected.validation_passes,
                    "nontrivial": expected.nontrivial,
                },
                "observed": {
                    "q": observed_q,
                    "validation_passes": validation.passed(),
                    "failed_conditions": validation.failed_ids(),
                    "nontrivial": nontrivial.nontrivial,
                },
                "reproduced": reproduced,
            });
            render(&body, if reproduced { 0 } else { 1 })
        }
        _ => usage_error("examples needs a subcommand: list or run <name>"),
    }
}

/// Dispatches one command line (without the binary name) and returns the
/// exit code with the JSON report to print.
pub fn run_command(args: &[String]) -> (i32, String) {
    let Some(command) = args.first() else {
        return usage_error("missing command");
    };
    let rest = &args[1..];
    match command.as_str() {
        "validate" => {
            let Some(path) = rest.first() else {
                return usage_error("validate needs a config path");
            };
            if rest.len() > 1 {
                return usage_error(format!("unexpected argument {:?}", rest[1]));
            }
            validate_cmd(path)
        }
        "deform" => {
            let Some(path) = rest.first() else {
                return usage_error("deform needs a config path");
            };
            match flag_map(&rest[1..], &["a", "b"]) {
                Ok(flags) => deform_cmd(path, &flags),
                Err(e) => usage_error(e),
            }
        }
        "assoc-check" => {
            let Some(path) = rest.first() else {
                return usage_error("assoc-check needs a config path");
            };
            match flag_map(&rest[1..], &["samples", "seed", "max-degree"]) {
                Ok(flags) => assoc_cmd(path, &flags),
                Err(e) => usage_error(e),
            }
        }
        "nontrivial" => {
            let Some(path) = rest.first() else {
                return usage_error("nontrivial needs a config path");
            };
            match flag_map(&rest[1..], &["degree-bound"]) {
                Ok(flags) => nontrivial_cmd(path, &flags),
                Err(e) => usage_error(e),
            }
        }
        "hopf-check" => match flag_map(rest, &["field", "q", "bound", "order"]) {
            Ok(flags) => hopf_cmd(&flags),
            Err(e) => usage_error(e),
        },
        "resolution-check" => {
            let Some(path) = rest.first() else {
                return usage_error("resolution-check needs a config path");
            };
            match flag_map(&rest[1..], &["max-total-degree"]) {
                Ok(flags) => resolution_cmd(path, &flags),
                Err(e) => usage_error(e),
            }
        }
        "examples" => examples_cmd(rest),
        other => usage_error(format!("unknown command {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn element_grammar_examples() {
        let ctx = fixtures::fixture_input("dihedral-h1").unwrap().ctx;
        let unit = parse_element("w[e]", &ctx).unwrap();
        assert_eq!(unit, CrossedElement::one(&ctx));

        let two = parse_element("x1^2*w[t] - 3*w[t*s]", &ctx).unwrap();
        assert_eq!(two.support().len(), 2);

        // words reduce in the group: t^4 = e
        let reduced = parse_element("x1*w[t*t*t*t]", &ctx).unwrap();
        assert_eq!(reduced, CrossedElement::var(&ctx, 0));

        let parens = parse_element("(x1^2 + 2*x2)*w[t*s]", &ctx).unwrap();
        let g = ctx.group.parse_word("t*s").unwrap();
        assert_eq!(parens.component(g).terms().count(), 2);

        assert!(parse_element("x1*w[z]", &ctx).is_err());
        assert!(parse_element("x1", &ctx).is_err());
        assert!(parse_element("w[e", &ctx).is_err());
        assert!(parse_element("w[e] w[t]", &ctx).is_err());
    }

    #[test]
    fn parse_format_round_trip_on_random_elements() {
        for name in fixtures::FIXTURE_NAMES {
            let ctx = fixtures::fixture_input(name).unwrap().ctx;
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..200 {
                let e = deform::sample_element(&ctx, &mut rng, 3, 3);
                let text = e.to_string();
                let back = parse_element(&text, &ctx)
                    .unwrap_or_else(|err| panic!("{name}: {text}: {err}"));
                assert_eq!(back, e, "{name}: {text}");
            }
        }
    }

    #[test]
    fn negative_leading_coefficients_round_trip() {
        let ctx = fixtures::fixture_input("dihedral-h1").unwrap().ctx;
        let e = parse_element("-3*w[t]", &ctx).unwrap();
        assert_eq!(parse_element(&e.to_string(), &ctx).unwrap(), e);
        let z = parse_element("0", &ctx).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn unknown_command_is_a_usage_error() {
        let (code, report) = run_command(&["frobnicate".to_string()]);
        assert_eq!(code, 2);
        assert!(report.contains("usage"));
    }

    #[test]
    fn hopf_command_smoke() {
        let args: Vec<String> = ["hopf-check", "--q", "-1", "--bound", "2", "--order", "3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (code, report) = run_command(&args);
        assert_eq!(code, 0, "{report}");
        let v: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(v["passed"], serde_json::Value::Bool(true));
        assert_eq!(v["q_order"], serde_json::json!(2));
    }

    #[test]
    fn examples_run_reproduces_recorded_verdicts() {
        for f in &FIXTURE_VERDICTS {
            let args: Vec<String> =
                ["examples", "run", f.name].iter().map(|s| s.to_string()).collect();
            let (code, report) = run_command(&args);
            assert_eq!(code, 0, "{}: {report}", f.name);
        }
    }

    fn rng_element_with_seed(ctx: &Ctx, seed: u64) -> CrossedElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        deform::sample_element(ctx, &mut rng, 2, 2)
    }

    #[test]
    fn deterministic_reports() {
        let ctx = fixtures::fixture_input("dihedral-h1").unwrap().ctx;
        let _ = rng_element_with_seed(&ctx, 1);
        let args: Vec<String> = ["hopf-check", "--q", "1", "--bound", "2", "--order", "2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (c1, r1) = run_command(&args);
        let (c2, r2) = run_command(&args);
        assert_eq!((c1, r1), (c2, r2));
    }
}

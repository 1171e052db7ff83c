//! JSON configuration for algebra structures, and the textual polynomial
//! grammar shared with the command line.
//!
//! A config file carries everything needed to rebuild a structure: the
//! field, the group (by kind or explicit table), the two-cocycle, the
//! representation and twisting matrices, both characters, the distinguished
//! variable indices (one-based, matching the `x1..xn` naming), and the two
//! derivation carrier lists. Scalars are strings in the report format:
//! `"2/3"` over the rationals, `"3 mod 7"` or plain integers over a prime
//! field.

use crate::crossed::{AlgebraContext, Ctx};
use crate::group::{Character, Cocycle, Group};
use crate::poly::{LinearEndo, Poly, Representation};
use crate::scalar::{FieldSpec, Scalar};
use crate::structure::StructureInput;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("field {field}: {message}")]
    Field { field: String, message: String },
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

fn field_err(field: &str, message: impl std::fmt::Display) -> ConfigError {
    ConfigError::Field { field: field.to_string(), message: message.to_string() }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic {
        r: usize,
    },
    Dihedral {
        u: usize,
    },
    Table {
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "std::collections::BTreeMap::is_empty")]
        generators: std::collections::BTreeMap<String, usize>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CocycleSpec {
    Trivial,
    Xi { xi: String },
    Table { values: Vec<Vec<String>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub g: String,
    #[serde(rename = "P")]
    pub p: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Config {
    /// `"q"` for the rationals or `"fp:<prime>"`.
    pub field: String,
    pub group: GroupSpec,
    pub cocycle: CocycleSpec,
    /// One matrix per group element, in element order; entry `[i][j]` is
    /// the coefficient of `x_{i+1}` in the image of `x_{j+1}`.
    pub representation: Vec<Vec<Vec<String>>>,
    /// The twisting automorphism, same convention as the representation.
    pub alpha: Vec<Vec<String>>,
    /// Character values per group element, in element order.
    pub chi_alpha: Vec<String>,
    pub chi_sigma: Vec<String>,
    /// One-based indices of the distinguished variables.
    pub x1: usize,
    pub x2: usize,
    pub delta1: Vec<DeltaEntry>,
    pub delta2: Vec<DeltaEntry>,
    /// Optional cross-check: the derived parameter must equal this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
}

pub fn parse_field_spec(s: &str) -> Result<FieldSpec, ConfigError> {
    let t = s.trim().to_ascii_lowercase();
    if t == "q" {
        return Ok(FieldSpec::Q);
    }
    if let Some(p) = t.strip_prefix("fp:") {
        let p: u32 = p
            .trim()
            .parse()
            .map_err(|_| field_err("field", format!("bad prime in {s:?}")))?;
        return Ok(FieldSpec::Fp(p));
    }
    Err(field_err("field", format!("expected \"q\" or \"fp:<prime>\", got {s:?}")))
}

pub fn field_spec_string(field: FieldSpec) -> String {
    match field {
        FieldSpec::Q => "q".to_string(),
        FieldSpec::Fp(p) => format!("fp:{p}"),
    }
}

fn parse_scalar(field: FieldSpec, s: &str, at: &str) -> Result<Scalar, ConfigError> {
    field.parse(s).map_err(|e| field_err(at, e))
}

fn parse_matrix(
    field: FieldSpec,
    rows: &[Vec<String>],
    at: &str,
) -> Result<Vec<Vec<Scalar>>, ConfigError> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(field_err(at, format!("row {i} has {} entries, expected {n}", row.len())));
        }
        let mut r = Vec::with_capacity(n);
        for (j, s) in row.iter().enumerate() {
            r.push(parse_scalar(field, s, &format!("{at}[{i}][{j}]"))?);
        }
        out.push(r);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// the polynomial grammar

pub(crate) struct PolyParser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
    n_vars: usize,
    field: FieldSpec,
}

#[derive(Debug, Error)]
#[error("syntax error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl<'a> PolyParser<'a> {
    pub(crate) fn new(src: &'a str, n_vars: usize, field: FieldSpec) -> PolyParser<'a> {
        PolyParser { src: src.as_bytes(), pos: 0, n_vars, field }
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, message: message.into() }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn uint(&mut self) -> Result<u16, ParseError> {
        let n = self.number()?;
        n.parse().map_err(|_| self.err(format!("exponent {n} out of range")))
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    pub(crate) fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := factor ('*' factor)*
    pub(crate) fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    /// factor := atom ['^' uint]
    pub(crate) fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            Ok(base.pow(e as u32))
        } else {
            Ok(base)
        }
    }

    /// atom := number ['/' number] | 'x' index | '(' expr ')'
    pub(crate) fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.number()?;
                let i: usize = idx
                    .parse()
                    .map_err(|_| self.err(format!("bad variable index {idx}")))?;
                if i == 0 || i > self.n_vars {
                    return Err(self.err(format!(
                        "variable x{i} out of range 1..{}",
                        self.n_vars
                    )));
                }
                Ok(Poly::var(self.n_vars, i - 1, self.field))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.number()?;
                if self.eat(b'/') {
                    lit.push('/');
                    lit.push_str(&self.number()?);
                }
                let c = self
                    .field
                    .parse(&lit)
                    .map_err(|e| self.err(e.to_string()))?;
                Ok(Poly::constant(self.n_vars, c))
            }
            Some(c) => Err(self.err(format!("unexpected character {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses the shared polynomial grammar: signed sums of `*`-separated
/// factors, each a rational literal, a variable `x1..xn` with an optional
/// `^` power, or a parenthesized subexpression.
pub fn parse_poly(src: &str, n_vars: usize, field: FieldSpec) -> Result<Poly, ParseError> {
    let mut p = PolyParser::new(src, n_vars, field);
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

// ---------------------------------------------------------------------------
// config to structure and back

fn build_group(spec: &GroupSpec) -> Result<Group, ConfigError> {
    match spec {
        GroupSpec::Cyclic { r } => Group::cyclic(*r).map_err(|e| field_err("group", e)),
        GroupSpec::Dihedral { u } => {
            Group::dihedral(*u).map_err(|e| field_err("group", e))
        }
        GroupSpec::Table { names, table, generators } => {
            Group::from_table(names.clone(), table.clone(), generators.clone())
                .map_err(|e| field_err("group", e))
        }
    }
}

/// Builds the validated context and structure input a config describes,
/// together with the optional derived-parameter cross-check value.
pub fn to_structure_input(
    cfg: &Config,
) -> Result<(StructureInput, Option<Scalar>), ConfigError> {
    let field = parse_field_spec(&cfg.field)?;
    let group = build_group(&cfg.group)?;
    let n = cfg.alpha.len();
    if n == 0 {
        return Err(field_err("alpha", "empty matrix"));
    }
    if cfg.representation.len() != group.n {
        return Err(field_err(
            "representation",
            format!("{} matrices for a group of order {}", cfg.representation.len(), group.n),
        ));
    }
    let mut mats = Vec::with_capacity(group.n);
    for (g, m) in cfg.representation.iter().enumerate() {
        let rows = parse_matrix(field, m, &format!("representation[{g}]"))?;
        if rows.len() != n {
            return Err(field_err(
                &format!("representation[{g}]"),
                format!("{}x{} matrix, expected {n}x{n}", rows.len(), rows.len()),
            ));
        }
        mats.push(LinearEndo::from_matrix(field, rows));
    }
    let rep = Representation { mats };
    let cocycle = match &cfg.cocycle {
        CocycleSpec::Trivial => Cocycle::trivial(&group, field),
        CocycleSpec::Xi { xi } => {
            let xi = parse_scalar(field, xi, "cocycle.xi")?;
            match cfg.group {
                GroupSpec::Cyclic { r } => Cocycle::xi_on_cyclic(r, xi),
                _ => {
                    return Err(field_err(
                        "cocycle",
                        "the xi form needs a cyclic group",
                    ))
                }
            }
        }
        CocycleSpec::Table { values } => {
            if values.len() != group.n || values.iter().any(|r| r.len() != group.n) {
                return Err(field_err("cocycle.values", "table must be |G| x |G|"));
            }
            let mut table = Vec::with_capacity(group.n);
            for (i, row) in values.iter().enumerate() {
                let mut r = Vec::with_capacity(group.n);
                for (j, s) in row.iter().enumerate() {
                    r.push(parse_scalar(field, s, &format!("cocycle.values[{i}][{j}]"))?);
                }
                table.push(r);
            }
            Cocycle::from_table(field, table)
        }
    };
    let parse_character = |values: &[String], at: &str| -> Result<Character, ConfigError> {
        if values.len() != group.n {
            return Err(field_err(
                at,
                format!("{} values for a group of order {}", values.len(), group.n),
            ));
        }
        let mut out = Vec::with_capacity(group.n);
        for (i, s) in values.iter().enumerate() {
            out.push(parse_scalar(field, s, &format!("{at}[{i}]"))?);
        }
        Ok(Character { values: out })
    };
    let chi_alpha = parse_character(&cfg.chi_alpha, "chi_alpha")?;
    let chi_sigma = parse_character(&cfg.chi_sigma, "chi_sigma")?;
    let alpha_rows = parse_matrix(field, &cfg.alpha, "alpha")?;
    let alpha_hat = LinearEndo::from_matrix(field, alpha_rows);
    if cfg.x1 == 0 || cfg.x1 > n {
        return Err(field_err("x1", format!("index {} out of range 1..{n}", cfg.x1)));
    }
    if cfg.x2 == 0 || cfg.x2 > n {
        return Err(field_err("x2", format!("index {} out of range 1..{n}", cfg.x2)));
    }
    let parse_delta = |entries: &[DeltaEntry],
                       at: &str|
     -> Result<Vec<(usize, Poly)>, ConfigError> {
        let mut out = Vec::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            let g = group
                .parse_word(&e.g)
                .map_err(|err| field_err(&format!("{at}[{i}].g"), err))?;
            let p = parse_poly(&e.p, n, field)
                .map_err(|err| field_err(&format!("{at}[{i}].P"), err))?;
            out.push((g, p));
        }
        Ok(out)
    };
    let delta1 = parse_delta(&cfg.delta1, "delta1")?;
    let delta2 = parse_delta(&cfg.delta2, "delta2")?;
    let ctx = AlgebraContext::new(field, group, cocycle, rep, n)
        .map_err(|e| field_err("representation/cocycle", e))?;
    let q_override = match &cfg.q {
        Some(s) => Some(parse_scalar(field, s, "q")?),
        None => None,
    };
    Ok((
        StructureInput {
            ctx,
            alpha_hat,
            chi_alpha,
            chi_sigma,
            x1: cfg.x1 - 1,
            x2: cfg.x2 - 1,
            delta1,
            delta2,
        },
        q_override,
    ))
}

fn matrix_strings(endo: &LinearEndo) -> Vec<Vec<String>> {
    endo.mat
        .iter()
        .map(|row| row.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// Serializes a structure input back into the config schema. The group and
/// cocycle are emitted as explicit tables, which any consumer can load
/// without knowing how they were first constructed.
pub fn config_from_input(input: &StructureInput, q: Option<&Scalar>) -> Config {
    let ctx = &input.ctx;
    let group = &ctx.group;
    let names: Vec<String> =
        group.elements().map(|g| group.name(g).to_string()).collect();
    let table: Vec<Vec<usize>> = group
        .elements()
        .map(|a| group.elements().map(|b| group.mul(a, b)).collect())
        .collect();
    let generators = group.generators.clone();
    let cocycle_values: Vec<Vec<String>> = group
        .elements()
        .map(|a| {
            group
                .elements()
                .map(|b| ctx.cocycle.value(a, b).to_string())
                .collect()
        })
        .collect();
    let poly_string = |p: &Poly| p.to_string();
    Config {
        field: field_spec_string(ctx.field),
        group: GroupSpec::Table { names, table, generators },
        cocycle: CocycleSpec::Table { values: cocycle_values },
        representation: ctx.rep.mats.iter().map(matrix_strings).collect(),
        alpha: matrix_strings(&input.alpha_hat),
        chi_alpha: input.chi_alpha.values.iter().map(|s| s.to_string()).collect(),
        chi_sigma: input.chi_sigma.values.iter().map(|s| s.to_string()).collect(),
        x1: input.x1 + 1,
        x2: input.x2 + 1,
        delta1: input
            .delta1
            .iter()
            .map(|(g, p)| DeltaEntry { g: group.name(*g).to_string(), p: poly_string(p) })
            .collect(),
        delta2: input
            .delta2
            .iter()
            .map(|(g, p)| DeltaEntry { g: group.name(*g).to_string(), p: poly_string(p) })
            .collect(),
        q: q.map(|s| s.to_string()),
    }
}

/// Loads a config from a JSON file.
pub fn load_config(path: &std::path::Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Context-only accessor for commands that do not need the structure data.
pub fn context_of(input: &StructureInput) -> Ctx {
    input.ctx.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::structure::build_structure;

    #[test]
    fn polynomial_grammar_round_trips() {
        let field = FieldSpec::Q;
        for src in [
            "1",
            "x1",
            "3*x1^2*x3 - x2",
            "-x1 + 2/3*x2^4",
            "(x1 + x2)*(x1 - x2)",
            "x3^2",
        ] {
            let p = parse_poly(src, 3, field).unwrap();
            let back = parse_poly(&p.to_string(), 3, field).unwrap();
            assert_eq!(p, back, "{src}");
        }
    }

    #[test]
    fn polynomial_grammar_rejects_garbage() {
        let field = FieldSpec::Q;
        assert!(parse_poly("x0", 2, field).is_err());
        assert!(parse_poly("x3", 2, field).is_err());
        assert!(parse_poly("1 +", 2, field).is_err());
        assert!(parse_poly("y1", 2, field).is_err());
        assert!(parse_poly("(x1", 2, field).is_err());
        assert!(parse_poly("x1 x2", 2, field).is_err());
    }

    #[test]
    fn configs_round_trip_through_serialization() {
        for name in fixtures::FIXTURE_NAMES {
            let input = fixtures::fixture_input(name).unwrap();
            let st = build_structure(input.clone()).unwrap();
            let cfg = config_from_input(&input, Some(&st.qp.q));
            let text = serde_json::to_string_pretty(&cfg).unwrap();
            let cfg2: Config = serde_json::from_str(&text).unwrap();
            let (input2, q2) = to_structure_input(&cfg2).unwrap();
            assert_eq!(input2.alpha_hat, input.alpha_hat, "{name}");
            assert_eq!(input2.chi_alpha.values, input.chi_alpha.values, "{name}");
            assert_eq!(input2.chi_sigma.values, input.chi_sigma.values, "{name}");
            assert_eq!(input2.x1, input.x1, "{name}");
            assert_eq!(input2.x2, input.x2, "{name}");
            assert_eq!(input2.delta1, input.delta1, "{name}");
            assert_eq!(input2.delta2, input.delta2, "{name}");
            let st2 = build_structure(input2).unwrap();
            assert_eq!(st2.qp.q, st.qp.q, "{name}");
            assert_eq!(q2.as_ref(), Some(&st.qp.q), "{name}");
        }
    }

    #[test]
    fn bad_configs_name_the_failing_field() {
        let input = fixtures::fixture_input("dihedral-h1").unwrap();
        let mut cfg = config_from_input(&input, None);
        cfg.x1 = 9;
        match to_structure_input(&cfg) {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "x1"),
            other => panic!("expected a field error, got {other:?}"),
        }
        let mut cfg = config_from_input(&input, None);
        cfg.chi_alpha.pop();
        match to_structure_input(&cfg) {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "chi_alpha"),
            other => panic!("expected a field error, got {other:?}"),
        }
        let mut cfg = config_from_input(&input, None);
        cfg.delta1[0].p = "x9".into();
        match to_structure_input(&cfg) {
            Err(ConfigError::Field { field, .. }) => assert_eq!(field, "delta1[0].P"),
            other => panic!("expected a field error, got {other:?}"),
        }
    }

    #[test]
    fn prime_field_scalars_parse_in_both_forms() {
        let f = FieldSpec::Fp(7);
        assert_eq!(f.parse("3 mod 7").unwrap(), f.integer(3));
        assert_eq!(f.parse("10").unwrap(), f.integer(3));
        assert!(f.parse("3 mod 5").is_err());
        assert!(FieldSpec::Q.parse("3 mod 7").is_err());
    }
}

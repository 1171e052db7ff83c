//! Finite groups as validated Cayley tables, with the 2-cocycles and
//! characters that decorate them.
//!
//! Provides:
//! * [`Group`]: elements are indices `0..n` (identity at 0), multiplication
//!   is a full table, checked for associativity and inverses on construction.
//!   Constructors for cyclic and dihedral groups plus arbitrary tables.
//! * [`Cocycle`]: a normal 2-cocycle `f : G x G -> k^x` as a table, with full
//!   validation of the cocycle identity, and the step-function cocycle on a
//!   cyclic group that is `1` until the exponents wrap and `xi` after.
//! * [`Character`]: a multiplicative character `G -> k^x`.
//! * [`conjugacy_classes`]: the partition of `G` into conjugacy classes.
//!
//! Everything here is exhaustive rather than clever: groups stay small (at
//! most 64 elements), so O(n^3) validation loops are instant and leave no
//! axiom unchecked.

use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

pub const MAX_GROUP_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order {0} exceeds the supported maximum {MAX_GROUP_ORDER}")]
    TooLarge(usize),
    #[error("group order must be at least 1")]
    Empty,
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a normal 2-cocycle: {0}")]
    BadCocycle(String),
    #[error("not a character: {0}")]
    BadCharacter(String),
    #[error("unknown group element {0:?}")]
    UnknownElement(String),
}

/// A finite group on indices `0..n` with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    /// Canonical display name per element, e.g. `t^2*s`; index 0 is `e`.
    pub names: Vec<String>,
    /// Named generators usable in element words.
    pub generators: BTreeMap<String, usize>,
}

impl Group {
    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g h g^{-1}`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element_by_name(&self, name: &str) -> Result<usize, GroupError> {
        if name == "e" {
            return Ok(0);
        }
        if let Some(&g) = self.generators.get(name) {
            return Ok(g);
        }
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    /// Builds a group from an explicit table. `table[a][b]` is the product
    /// `ab`. Index 0 must be a two-sided identity; associativity and the
    /// existence of inverses are checked exhaustively.
    pub fn from_table(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: BTreeMap<String, usize>,
    ) -> Result<Group, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotAGroup(format!(
                "table must be {n} x {n} to match the {n} element names"
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            for &v in row {
                if v >= n {
                    return Err(GroupError::NotAGroup(format!(
                        "table entry {v} out of range"
                    )));
                }
                flat.push(v);
            }
        }
        let at = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            if at(0, a) != a || at(a, 0) != a {
                return Err(GroupError::NotAGroup(format!(
                    "index 0 is not a two-sided identity at element {a}"
                )));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if at(a, b) == 0 && at(b, a) == 0 {
                    inv[a] = b;
                    break;
                }
            }
            if inv[a] == usize::MAX {
                return Err(GroupError::NotAGroup(format!("element {a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        for (name, &g) in &generators {
            if g >= n {
                return Err(GroupError::NotAGroup(format!(
                    "generator {name:?} out of range"
                )));
            }
        }
        Ok(Group { n, table: flat, inv, names, generators })
    }

    /// Cyclic group of order `r`, generated by `g`.
    pub fn cyclic(r: usize) -> Result<Group, GroupError> {
        if r == 0 {
            return Err(GroupError::Empty);
        }
        if r > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(r));
        }
        let names: Vec<String> = (0..r)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table: Vec<Vec<usize>> =
            (0..r).map(|a| (0..r).map(|b| (a + b) % r).collect()).collect();
        let mut generators = BTreeMap::new();
        if r > 1 {
            generators.insert("g".to_string(), 1);
        }
        Group::from_table(names, table, generators)
    }

    /// Dihedral group of order `2u`: rotations `t^i` at indices `0..u`,
    /// reflections `t^i*s` at indices `u..2u`, subject to `s t s = t^{-1}`.
    pub fn dihedral(u: usize) -> Result<Group, GroupError> {
        if u == 0 {
            return Err(GroupError::Empty);
        }
        if 2 * u > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(2 * u));
        }
        let rot_name = |i: usize| match i {
            0 => "e".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        let mut names: Vec<String> = (0..u).map(rot_name).collect();
        for i in 0..u {
            names.push(match i {
                0 => "s".to_string(),
                1 => "t*s".to_string(),
                _ => format!("t^{i}*s"),
            });
        }
        // element u*b + i stands for t^i s^b
        let idx = |i: usize, b: usize| b * u + (i % u);
        let mut table = vec![vec![0usize; 2 * u]; 2 * u];
        for i in 0..u {
            for b in 0..2 {
                for j in 0..u {
                    for c in 0..2 {
                        // (t^i s^b)(t^j s^c) = t^(i + j or i - j) s^(b xor c)
                        let k = if b == 0 { (i + j) % u } else { (i + u - (j % u)) % u };
                        table[idx(i, b)][idx(j, c)] = idx(k, b ^ c);
                    }
                }
            }
        }
        let mut generators = BTreeMap::new();
        if u > 1 {
            generators.insert("t".to_string(), 1);
        }
        generators.insert("s".to_string(), u);
        Group::from_table(names, table, generators)
    }

    /// Parses a word like `t*s`, `t^3`, `e`, `t^2*s` into an element, using
    /// both generator names and canonical element names as atoms.
    pub fn parse_word(&self, word: &str) -> Result<usize, GroupError> {
        let word = word.trim();
        if word.is_empty() {
            return Err(GroupError::UnknownElement(String::new()));
        }
        let mut acc = self.identity();
        for atom in word.split('*') {
            let atom = atom.trim();
            let (base, exp) = match atom.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .trim()
                        .parse()
                        .map_err(|_| GroupError::UnknownElement(atom.to_string()))?;
                    (b.trim(), e)
                }
                None => (atom, 1),
            };
            let g = self.element_by_name(base)?;
            let g = if exp < 0 { self.inv(g) } else { g };
            for _ in 0..exp.unsigned_abs() {
                acc = self.mul(acc, g);
            }
        }
        Ok(acc)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }
}

/// The partition of `G` into conjugacy classes, each sorted, ordered by their
/// smallest member.
pub fn conjugacy_classes(group: &Group) -> Vec<Vec<usize>> {
    let mut seen = vec![false; group.n];
    let mut classes = Vec::new();
    for a in group.elements() {
        if seen[a] {
            continue;
        }
        let mut class: Vec<usize> =
            group.elements().map(|g| group.conj(g, a)).collect();
        class.sort_unstable();
        class.dedup();
        for &x in &class {
            seen[x] = true;
        }
        classes.push(class);
    }
    classes
}

/// True when `set` is closed under conjugation by every element of `G`.
pub fn is_union_of_conjugacy_classes(group: &Group, set: &[usize]) -> bool {
    let members: std::collections::BTreeSet<usize> = set.iter().copied().collect();
    members
        .iter()
        .all(|&a| group.elements().all(|g| members.contains(&group.conj(g, a))))
}

/// A normal 2-cocycle `f : G x G -> k^x`, stored as a full table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub field: FieldSpec,
    table: Vec<Scalar>,
    n: usize,
}

impl Cocycle {
    pub fn value(&self, a: usize, b: usize) -> &Scalar {
        &self.table[a * self.n + b]
    }

    /// The constant cocycle `f = 1`.
    pub fn trivial(group: &Group, field: FieldSpec) -> Cocycle {
        Cocycle {
            field,
            table: vec![field.one(); group.n * group.n],
            n: group.n,
        }
    }

    /// On the cyclic group of order `r`: `f(g^i, g^j) = 1` if `i + j < r`,
    /// else `xi`. Normal, and a cocycle for any nonzero `xi` because both
    /// sides of the cocycle identity count the carries in `i + j + k`.
    pub fn xi_on_cyclic(r: usize, xi: Scalar) -> Cocycle {
        let field = xi.field();
        let mut table = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                table.push(if i + j < r { field.one() } else { xi.clone() });
            }
        }
        Cocycle { field, table, n: r }
    }

    pub fn from_table(field: FieldSpec, table: Vec<Vec<Scalar>>) -> Cocycle {
        let n = table.len();
        let flat: Vec<Scalar> = table.into_iter().flatten().collect();
        assert_eq!(flat.len(), n * n, "cocycle table must be square");
        Cocycle { field, table: flat, n }
    }
}

/// Checks normality `f(e, g) = f(g, e) = 1`, that all values are nonzero, and
/// the identity `f(g, h) f(gh, k) = f(h, k) f(g, hk)` over every triple.
pub fn validate_cocycle(group: &Group, f: &Cocycle) -> Result<(), GroupError> {
    if f.n != group.n {
        return Err(GroupError::BadCocycle(format!(
            "table is {} x {} but the group has {} elements",
            f.n, f.n, group.n
        )));
    }
    for a in group.elements() {
        for b in group.elements() {
            if f.value(a, b).is_zero() {
                return Err(GroupError::BadCocycle(format!(
                    "value at ({}, {}) is zero",
                    group.name(a),
                    group.name(b)
                )));
            }
        }
    }
    let e = group.identity();
    for a in group.elements() {
        if !f.value(e, a).is_one() || !f.value(a, e).is_one() {
            return Err(GroupError::BadCocycle(format!(
                "not normal at {}",
                group.name(a)
            )));
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            for k in group.elements() {
                let lhs = f.value(g, h).clone() * f.value(group.mul(g, h), k).clone();
                let rhs = f.value(h, k).clone() * f.value(g, group.mul(h, k)).clone();
                if lhs != rhs {
                    return Err(GroupError::BadCocycle(format!(
                        "cocycle identity fails at ({}, {}, {})",
                        group.name(g),
                        group.name(h),
                        group.name(k)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A character `G -> k^x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Scalar>,
}

impl Character {
    pub fn trivial(group: &Group, field: FieldSpec) -> Character {
        Character { values: vec![field.one(); group.n] }
    }

    pub fn value(&self, g: usize) -> &Scalar {
        &self.values[g]
    }

    pub fn value_inv(&self, g: usize) -> Scalar {
        self.values[g].inv().expect("character values are nonzero")
    }

    /// `chi(g)^e` for any integer `e`.
    pub fn value_pow(&self, g: usize, e: i64) -> Scalar {
        self.values[g].pow_i64(e).expect("character values are nonzero")
    }
}

pub fn validate_character(group: &Group, chi: &Character) -> Result<(), GroupError> {
    if chi.values.len() != group.n {
        return Err(GroupError::BadCharacter(format!(
            "{} values for a group of order {}",
            chi.values.len(),
            group.n
        )));
    }
    if chi.values.iter().any(|v| v.is_zero()) {
        return Err(GroupError::BadCharacter("zero value".to_string()));
    }
    for a in group.elements() {
        for b in group.elements() {
            let lhs = chi.value(group.mul(a, b)).clone();
            let rhs = chi.value(a).clone() * chi.value(b).clone();
            if lhs != rhs {
                return Err(GroupError::BadCharacter(format!(
                    "multiplicativity fails at ({}, {})",
                    group.name(a),
                    group.name(b)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_structure() {
        let g = Group::cyclic(6).unwrap();
        assert_eq!(g.n, 6);
        assert_eq!(g.mul(2, 5), 1);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.name(3), "g^3");
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(g.mul(a, b), g.mul(b, a));
            }
        }
    }

    #[test]
    fn dihedral_group_structure() {
        let g = Group::dihedral(4).unwrap();
        assert_eq!(g.n, 8);
        let t = g.element_by_name("t").unwrap();
        let s = g.element_by_name("s").unwrap();
        // defining relations: s^2 = e, t^4 = e, (st)^2 = e
        assert_eq!(g.mul(s, s), 0);
        let t4 = g.mul(g.mul(t, t), g.mul(t, t));
        assert_eq!(t4, 0);
        let st = g.mul(s, t);
        assert_eq!(g.mul(st, st), 0);
        // noncommutative: ts != st
        assert_ne!(g.mul(t, s), g.mul(s, t));
        // s t s^{-1} = t^3
        assert_eq!(g.conj(s, t), g.parse_word("t^3").unwrap());
    }

    #[test]
    fn word_parsing() {
        let g = Group::dihedral(4).unwrap();
        assert_eq!(g.parse_word("e").unwrap(), 0);
        assert_eq!(g.parse_word("t*t*s").unwrap(), g.parse_word("t^2*s").unwrap());
        assert_eq!(g.parse_word("t^4").unwrap(), 0);
        assert_eq!(g.parse_word("t^-1").unwrap(), g.parse_word("t^3").unwrap());
        assert!(g.parse_word("x").is_err());
        // canonical names parse back to their index
        for a in g.elements() {
            assert_eq!(g.parse_word(g.name(a)).unwrap(), a);
        }
    }

    #[test]
    fn from_table_rejects_non_groups() {
        // 2x2 table where 0 is not an identity
        let bad = Group::from_table(
            vec!["e".into(), "a".into()],
            vec![vec![1, 0], vec![0, 1]],
            BTreeMap::new(),
        );
        assert!(matches!(bad, Err(GroupError::NotAGroup(_))));
        // non-associative magma with identity: use a 3-element table
        let bad = Group::from_table(
            vec!["e".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 1]],
            BTreeMap::new(),
        );
        assert!(matches!(bad, Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn conjugacy_classes_of_dihedral4() {
        let g = Group::dihedral(4).unwrap();
        let classes = conjugacy_classes(&g);
        let as_names: Vec<Vec<&str>> = classes
            .iter()
            .map(|c| c.iter().map(|&a| g.name(a)).collect())
            .collect();
        assert_eq!(
            as_names,
            vec![
                vec!["e"],
                vec!["t", "t^3"],
                vec!["t^2"],
                vec!["s", "t^2*s"],
                vec!["t*s", "t^3*s"],
            ]
        );
        let t = g.element_by_name("t").unwrap();
        let t3 = g.parse_word("t^3").unwrap();
        assert!(is_union_of_conjugacy_classes(&g, &[t, t3]));
        assert!(!is_union_of_conjugacy_classes(&g, &[t]));
    }

    #[test]
    fn conjugacy_in_abelian_groups_is_trivial() {
        let g = Group::cyclic(5).unwrap();
        assert_eq!(conjugacy_classes(&g).len(), 5);
    }

    #[test]
    fn step_cocycle_is_a_cocycle() {
        let g = Group::cyclic(4).unwrap();
        let xi = FieldSpec::Q.integer(-1);
        let f = Cocycle::xi_on_cyclic(4, xi);
        validate_cocycle(&g, &f).unwrap();
        assert!(f.value(1, 2).is_one());
        assert_eq!(f.value(2, 3), &FieldSpec::Q.integer(-1));
        let zero = Cocycle::xi_on_cyclic(4, FieldSpec::Q.integer(0));
        assert!(validate_cocycle(&g, &zero).is_err());
    }

    #[test]
    fn trivial_cocycle_validates_on_dihedral() {
        let g = Group::dihedral(4).unwrap();
        let f = Cocycle::trivial(&g, FieldSpec::Q);
        validate_cocycle(&g, &f).unwrap();
    }

    #[test]
    fn broken_cocycle_is_rejected() {
        let g = Group::cyclic(3).unwrap();
        let mut table =
            vec![vec![FieldSpec::Q.integer(1); 3]; 3];
        table[1][1] = FieldSpec::Q.integer(2); // breaks the identity at (g, g, g)
        let f = Cocycle::from_table(FieldSpec::Q, table);
        assert!(matches!(validate_cocycle(&g, &f), Err(GroupError::BadCocycle(_))));
    }

    #[test]
    fn characters() {
        let g = Group::dihedral(4).unwrap();
        // sign character: 1 on rotations, -1 on reflections
        let values: Vec<Scalar> = g
            .elements()
            .map(|a| FieldSpec::Q.integer(if a < 4 { 1 } else { -1 }))
            .collect();
        let chi = Character { values };
        validate_character(&g, &chi).unwrap();
        assert_eq!(chi.value_pow(5, 3), FieldSpec::Q.integer(-1));
        // a non-character: -1 only on s itself
        let mut values = vec![FieldSpec::Q.integer(1); 8];
        values[4] = FieldSpec::Q.integer(-1);
        assert!(validate_character(&g, &Character { values }).is_err());
        validate_character(&g, &Character::trivial(&g, FieldSpec::Q)).unwrap();
    }
}

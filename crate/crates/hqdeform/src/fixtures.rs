//! Named example structures used by the test suite, the examples and the
//! command-line reports.
//!
//! Four are provided:
//!
//! * `dihedral-h1`: dihedral group of order 8 acting on two variables by
//!   sign, trivial cocycle, `delta_1` carried by the rotation class
//!   `{t, t^3}`, `delta_2` by `t^2`. Derived parameter `q = 1`.
//! * `dihedral-hm1`: same algebra, `delta_1` carried by all four
//!   reflections, `delta_2` by `{t, t^3}`. Derived parameter `q = -1`.
//! * `dihedral-h1-twisted-alpha`: the first structure with the character
//!   twist moved from `sigma` to `alpha`.
//! * `cyclic-recipe`: cyclic group of order 4 on three variables with the
//!   step cocycle at `xi = -1`, a non-diagonal `alpha_hat`, and polynomial
//!   delta coefficients. Derived parameter `q = 1`.
//!
//! Each fixture is exposed both as raw [`StructureInput`] (so tests can
//! perturb one ingredient at a time) and as a built structure.

use crate::crossed::{AlgebraContext, Ctx};
use crate::group::{Character, Cocycle, Group};
use crate::poly::{LinearEndo, Poly, Representation};
use crate::scalar::FieldSpec;
use crate::structure::{build_structure, HqStructure, StructureInput};

pub const FIXTURE_NAMES: [&str; 4] = [
    "dihedral-h1",
    "dihedral-hm1",
    "dihedral-h1-twisted-alpha",
    "cyclic-recipe",
];

pub fn fixture_description(name: &str) -> Option<&'static str> {
    match name {
        "dihedral-h1" => Some("dihedral group of order 8, q = 1, deltas on rotations"),
        "dihedral-hm1" => Some("dihedral group of order 8, q = -1, delta_1 on reflections"),
        "dihedral-h1-twisted-alpha" => {
            Some("dihedral group of order 8, q = 1, character twist on alpha")
        }
        "cyclic-recipe" => {
            Some("cyclic group of order 4 on three variables, step cocycle, q = 1")
        }
        _ => None,
    }
}

/// The dihedral-of-order-8 crossed product all three dihedral fixtures
/// share: reflections negate both variables, rotations fix them, trivial
/// cocycle over the rationals.
pub fn dihedral_context() -> Ctx {
    let group = Group::dihedral(4).expect("order 8 is within bounds");
    let field = FieldSpec::Q;
    let minus = LinearEndo::from_matrix(
        field,
        vec![
            vec![field.integer(-1), field.integer(0)],
            vec![field.integer(0), field.integer(-1)],
        ],
    );
    let id = LinearEndo::identity(2, field);
    let mats: Vec<LinearEndo> = group
        .elements()
        .map(|a| if a < 4 { id.clone() } else { minus.clone() })
        .collect();
    let cocycle = Cocycle::trivial(&group, field);
    AlgebraContext::new(field, group, cocycle, Representation { mats }, 2)
        .expect("dihedral context is well formed")
}

/// The character of the dihedral group that is 1 on rotations and -1 on
/// reflections.
pub fn dihedral_sign_character(group: &Group) -> Character {
    Character {
        values: group
            .elements()
            .map(|a| FieldSpec::Q.integer(if a < group.n / 2 { 1 } else { -1 }))
            .collect(),
    }
}

pub fn dihedral_h1_input() -> StructureInput {
    let ctx = dihedral_context();
    let group = &ctx.group;
    let one = Poly::one(2, FieldSpec::Q);
    let t = group.element_by_name("t").unwrap();
    let t3 = group.parse_word("t^3").unwrap();
    let t2 = group.parse_word("t^2").unwrap();
    let chi_sigma = dihedral_sign_character(group);
    let chi_alpha = Character::trivial(group, FieldSpec::Q);
    StructureInput {
        ctx: ctx.clone(),
        alpha_hat: LinearEndo::identity(2, FieldSpec::Q),
        chi_alpha,
        chi_sigma,
        x1: 0,
        x2: 1,
        delta1: vec![(t, one.clone()), (t3, one.clone())],
        delta2: vec![(t2, one)],
    }
}

pub fn dihedral_hm1_input() -> StructureInput {
    let ctx = dihedral_context();
    let group = &ctx.group;
    let one = Poly::one(2, FieldSpec::Q);
    let t = group.element_by_name("t").unwrap();
    let t3 = group.parse_word("t^3").unwrap();
    let reflections: Vec<(usize, Poly)> = (4..8).map(|g| (g, one.clone())).collect();
    let chi_sigma = dihedral_sign_character(group);
    let chi_alpha = Character::trivial(group, FieldSpec::Q);
    StructureInput {
        ctx: ctx.clone(),
        alpha_hat: LinearEndo::identity(2, FieldSpec::Q),
        chi_alpha,
        chi_sigma,
        x1: 0,
        x2: 1,
        delta1: reflections,
        delta2: vec![(t, one.clone()), (t3, one)],
    }
}

pub fn dihedral_h1_twisted_alpha_input() -> StructureInput {
    let mut input = dihedral_h1_input();
    let group = &input.ctx.group;
    input.chi_alpha = dihedral_sign_character(group);
    input.chi_sigma = Character::trivial(group, FieldSpec::Q);
    input
}

/// The five-step recipe on a cyclic group of order 4: the generator negates
/// all three variables, the cocycle steps to `xi = -1`, `alpha_hat` sends
/// `x1` to `x1 + x3` and negates `x3`, both characters alternate signs, and
/// the delta coefficients are the polynomial `x3`, carried by `g` and `g^3`.
pub fn cyclic_recipe_input() -> StructureInput {
    let field = FieldSpec::Q;
    let group = Group::cyclic(4).expect("order 4 is within bounds");
    let minus = LinearEndo::from_matrix(
        field,
        vec![
            vec![field.integer(-1), field.integer(0), field.integer(0)],
            vec![field.integer(0), field.integer(-1), field.integer(0)],
            vec![field.integer(0), field.integer(0), field.integer(-1)],
        ],
    );
    let id = LinearEndo::identity(3, field);
    let mats: Vec<LinearEndo> = group
        .elements()
        .map(|k| if k % 2 == 0 { id.clone() } else { minus.clone() })
        .collect();
    let cocycle = Cocycle::xi_on_cyclic(4, field.integer(-1));
    let ctx = AlgebraContext::new(field, group, cocycle, Representation { mats }, 3)
        .expect("cyclic context is well formed");
    let group = &ctx.group;
    let alternating = Character {
        values: group
            .elements()
            .map(|k| field.integer(if k % 2 == 0 { 1 } else { -1 }))
            .collect(),
    };
    // alpha_hat: x1 -> x1 + x3, x2 -> x2, x3 -> -x3
    let alpha_hat = LinearEndo::from_matrix(
        field,
        vec![
            vec![field.integer(1), field.integer(0), field.integer(0)],
            vec![field.integer(0), field.integer(1), field.integer(0)],
            vec![field.integer(1), field.integer(0), field.integer(-1)],
        ],
    );
    let g = group.element_by_name("g").unwrap();
    let g3 = group.parse_word("g^3").unwrap();
    let x3 = Poly::var(3, 2, field);
    StructureInput {
        ctx: ctx.clone(),
        alpha_hat,
        chi_alpha: alternating.clone(),
        chi_sigma: alternating,
        x1: 0,
        x2: 1,
        delta1: vec![(g, x3.clone())],
        delta2: vec![(g3, x3)],
    }
}

pub fn fixture_input(name: &str) -> Option<StructureInput> {
    match name {
        "dihedral-h1" => Some(dihedral_h1_input()),
        "dihedral-hm1" => Some(dihedral_hm1_input()),
        "dihedral-h1-twisted-alpha" => Some(dihedral_h1_twisted_alpha_input()),
        "cyclic-recipe" => Some(cyclic_recipe_input()),
        _ => None,
    }
}

/// Builds the named fixture. Panics only if the fixture data itself is
/// inconsistent, which the test suite rules out.
pub fn fixture(name: &str) -> Option<HqStructure> {
    fixture_input(name).map(|input| {
        build_structure(input).expect("fixture data builds")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::validate_structure;

    #[test]
    fn every_fixture_builds_and_validates() {
        for name in FIXTURE_NAMES {
            let st = fixture(name).unwrap();
            let report = validate_structure(&st);
            assert!(
                report.passed(),
                "{name} failed conditions: {:?}",
                report.failed_ids()
            );
        }
    }

    #[test]
    fn derived_parameters_match_the_recipe() {
        let st = fixture("dihedral-h1").unwrap();
        assert_eq!(st.qp.q, FieldSpec::Q.integer(1));
        let st = fixture("dihedral-hm1").unwrap();
        assert_eq!(st.qp.q, FieldSpec::Q.integer(-1));
        let st = fixture("dihedral-h1-twisted-alpha").unwrap();
        assert_eq!(st.qp.q, FieldSpec::Q.integer(1));
        let st = fixture("cyclic-recipe").unwrap();
        assert_eq!(st.qp.q, FieldSpec::Q.integer(1));
        // the recipe's sigma_hat is the negative of alpha_hat here
        let neg = st.alpha_hat.apply_var(0).neg();
        assert_eq!(st.sigma_hat.apply_var(0), neg);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(fixture("no-such-fixture").is_none());
        assert!(fixture_description("no-such-fixture").is_none());
        for name in FIXTURE_NAMES {
            assert!(fixture_description(name).is_some());
        }
    }
}

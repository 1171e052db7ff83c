//! The crossed product `S(V) #_f G`: a free left module over the polynomial
//! ring on the symbols `w_g`, with multiplication twisted by both the group
//! action and a normal 2-cocycle:
//!
//! ```text
//! (P w_g)(Q w_h) = P * (g acting on Q) * f(g, h) * w_{gh}
//! ```
//!
//! Provides:
//! * [`AlgebraContext`]: the shared ambient data (field, group, cocycle,
//!   representation, variable count), validated once at construction. Every
//!   element holds a reference to its context; operations across distinct
//!   contexts panic, since they are always a bug.
//! * [`CrossedElement`]: a finite sum of `P w_g` terms with exact arithmetic,
//!   products, commutators, and component accessors.

use crate::group::{validate_cocycle, Cocycle, Group, GroupError};
use crate::poly::{validate_representation, Poly, PolyError, Representation};
use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrossedError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("cocycle field {0} does not match the algebra field {1}")]
    CocycleField(String, String),
    #[error("representation acts on {0} variables, context declares {1}")]
    RepArity(usize, usize),
}

/// Ambient data of one crossed product. Immutable after construction.
#[derive(Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    pub field: FieldSpec,
    pub group: Group,
    pub cocycle: Cocycle,
    pub rep: Representation,
    pub n_vars: usize,
}

pub type Ctx = Arc<AlgebraContext>;

impl AlgebraContext {
    /// Validates all pieces: the field, the cocycle identity, and that the
    /// representation is a homomorphism into GL(V).
    pub fn new(
        field: FieldSpec,
        group: Group,
        cocycle: Cocycle,
        rep: Representation,
        n_vars: usize,
    ) -> Result<Ctx, CrossedError> {
        field.validate().map_err(|e| {
            CrossedError::Group(GroupError::BadCocycle(e.to_string()))
        })?;
        if cocycle.field != field {
            return Err(CrossedError::CocycleField(
                cocycle.field.to_string(),
                field.to_string(),
            ));
        }
        validate_cocycle(&group, &cocycle)?;
        validate_representation(&group, &rep)?;
        let rep_n = rep.mats[0].n;
        if rep_n != n_vars {
            return Err(CrossedError::RepArity(rep_n, n_vars));
        }
        Ok(Arc::new(AlgebraContext { field, group, cocycle, rep, n_vars }))
    }

    pub fn f(&self, g: usize, h: usize) -> &Scalar {
        self.cocycle.value(g, h)
    }

    /// `f(g, h)^{-1}`.
    pub fn f_inv(&self, g: usize, h: usize) -> Scalar {
        self.f(g, h).inv().expect("cocycle values are nonzero")
    }
}

fn same_ctx(a: &Ctx, b: &Ctx) {
    if Arc::ptr_eq(a, b) {
        return;
    }
    // distinct allocations may still describe the same algebra
    if **a != **b {
        panic!("elements from different algebra contexts cannot be combined");
    }
}

/// An element `sum_g P_g w_g`; only nonzero polynomial components are stored.
#[derive(Debug, Clone)]
pub struct CrossedElement {
    pub ctx: Ctx,
    comps: BTreeMap<usize, Poly>,
}

impl PartialEq for CrossedElement {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx);
        self.comps == other.comps
    }
}

impl Eq for CrossedElement {}

impl CrossedElement {
    pub fn zero(ctx: &Ctx) -> CrossedElement {
        CrossedElement { ctx: Arc::clone(ctx), comps: BTreeMap::new() }
    }

    /// The unit `1 w_e`.
    pub fn one(ctx: &Ctx) -> CrossedElement {
        CrossedElement::from_poly(ctx, Poly::one(ctx.n_vars, ctx.field))
    }

    /// The basis symbol `w_g`.
    pub fn w(ctx: &Ctx, g: usize) -> CrossedElement {
        let mut comps = BTreeMap::new();
        comps.insert(g, Poly::one(ctx.n_vars, ctx.field));
        CrossedElement { ctx: Arc::clone(ctx), comps }
    }

    /// `P w_e`, the copy of the polynomial ring inside the crossed product.
    pub fn from_poly(ctx: &Ctx, p: Poly) -> CrossedElement {
        let mut out = CrossedElement::zero(ctx);
        out.add_component(ctx.group.identity(), p);
        out
    }

    /// The variable `x_{i+1}` as an element.
    pub fn var(ctx: &Ctx, i: usize) -> CrossedElement {
        CrossedElement::from_poly(ctx, Poly::var(ctx.n_vars, i, ctx.field))
    }

    pub fn scalar(ctx: &Ctx, c: Scalar) -> CrossedElement {
        CrossedElement::from_poly(ctx, Poly::constant(ctx.n_vars, c))
    }

    /// `P w_g`.
    pub fn term(ctx: &Ctx, p: Poly, g: usize) -> CrossedElement {
        let mut out = CrossedElement::zero(ctx);
        out.add_component(g, p);
        out
    }

    pub fn add_component(&mut self, g: usize, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.comps.entry(g) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&p);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The coefficient polynomial of `w_g` (zero when absent).
    pub fn component(&self, g: usize) -> Poly {
        self.comps
            .get(&g)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.ctx.n_vars, self.ctx.field))
    }

    /// Group elements with a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.comps.keys().copied().collect()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.comps.iter().map(|(&g, p)| (g, p))
    }

    /// Largest total degree over all components.
    pub fn max_degree(&self) -> u32 {
        self.comps.values().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &CrossedElement) -> CrossedElement {
        same_ctx(&self.ctx, &other.ctx);
        let mut out = self.clone();
        for (&g, p) in &other.comps {
            out.add_component(g, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &CrossedElement) -> CrossedElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CrossedElement {
        CrossedElement {
            ctx: Arc::clone(&self.ctx),
            comps: self.comps.iter().map(|(&g, p)| (g, p.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> CrossedElement {
        if c.is_zero() {
            return CrossedElement::zero(&self.ctx);
        }
        CrossedElement {
            ctx: Arc::clone(&self.ctx),
            comps: self.comps.iter().map(|(&g, p)| (g, p.scale(c))).collect(),
        }
    }

    /// The crossed-product multiplication, extended bilinearly from
    /// `(P w_g)(Q w_h) = P * ^gQ * f(g,h) * w_{gh}`.
    pub fn mul(&self, other: &CrossedElement) -> CrossedElement {
        same_ctx(&self.ctx, &other.ctx);
        let ctx = &self.ctx;
        let mut out = CrossedElement::zero(ctx);
        for (&g, p) in &self.comps {
            for (&h, q) in &other.comps {
                let twisted = ctx.rep.act(g, q);
                let coeff = p.mul(&twisted).scale(ctx.f(g, h));
                out.add_component(ctx.group.mul(g, h), coeff);
            }
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(&self, other: &CrossedElement) -> CrossedElement {
        self.mul(other).sub(&other.mul(self))
    }

    /// Left multiplication by a bare polynomial.
    pub fn mul_poly_left(&self, p: &Poly) -> CrossedElement {
        CrossedElement {
            ctx: Arc::clone(&self.ctx),
            comps: self
                .comps
                .iter()
                .map(|(&g, q)| (g, p.mul(q)))
                .filter(|(_, q)| !q.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CrossedElement {
        let mut acc = CrossedElement::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for CrossedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&g, p) in &self.comps {
            let name = self.ctx.group.name(g);
            let needs_parens = p.terms().count() > 1;
            let chunk = if needs_parens {
                format!("({p})*w[{name}]")
            } else if p.is_constant() && p.constant_coeff().is_one() {
                format!("w[{name}]")
            } else {
                format!("{p}*w[{name}]")
            };
            if first {
                write!(f, "{chunk}")?;
            } else if let Some(rest) = chunk.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {chunk}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LinearEndo;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Scalar {
        FieldSpec::Q.integer(n)
    }

    /// Dihedral(4) acting by sign on two variables, trivial cocycle.
    pub(crate) fn dihedral_ctx() -> Ctx {
        let group = Group::dihedral(4).unwrap();
        let minus = LinearEndo::from_matrix(
            FieldSpec::Q,
            vec![vec![q(-1), q(0)], vec![q(0), q(-1)]],
        );
        let id = LinearEndo::identity(2, FieldSpec::Q);
        let mats: Vec<LinearEndo> = group
            .elements()
            .map(|a| if a < 4 { id.clone() } else { minus.clone() })
            .collect();
        let cocycle = Cocycle::trivial(&group, FieldSpec::Q);
        AlgebraContext::new(FieldSpec::Q, group, cocycle, Representation { mats }, 2)
            .unwrap()
    }

    /// Cyclic(3) over F_7 with a diagonal action of order 3 and a step
    /// cocycle, so both twists are genuinely in play.
    fn cyclic_ctx() -> Ctx {
        let field = FieldSpec::Fp(7);
        let group = Group::cyclic(3).unwrap();
        let two = field.integer(2);
        let four = field.integer(4);
        let act = LinearEndo::from_matrix(
            field,
            vec![
                vec![two.clone(), field.zero()],
                vec![field.zero(), four.clone()],
            ],
        );
        let mats = vec![
            LinearEndo::identity(2, field),
            act.clone(),
            act.compose(&act),
        ];
        let cocycle = Cocycle::xi_on_cyclic(3, field.integer(3));
        AlgebraContext::new(field, group, cocycle, Representation { mats }, 2).unwrap()
    }

    fn random_element(ctx: &Ctx, rng: &mut ChaCha8Rng, max_deg: u16) -> CrossedElement {
        let mut out = CrossedElement::zero(ctx);
        for _ in 0..rng.gen_range(1..=4) {
            let g = rng.gen_range(0..ctx.group.n);
            let e1 = rng.gen_range(0..=max_deg);
            let e2 = rng.gen_range(0..=max_deg.saturating_sub(e1));
            let c = match ctx.field {
                FieldSpec::Q => FieldSpec::Q.integer(rng.gen_range(-3..=3)),
                FieldSpec::Fp(p) => ctx.field.integer(rng.gen_range(0..p as i64)),
            };
            out.add_component(g, Poly::monomial(2, &[e1, e2], c));
        }
        out
    }

    #[test]
    fn symbol_products_follow_the_twist() {
        let ctx = dihedral_ctx();
        let g = &ctx.group;
        let t = g.element_by_name("t").unwrap();
        let s = g.element_by_name("s").unwrap();
        // w_t w_s = w_{t s}
        let ts = CrossedElement::w(&ctx, t).mul(&CrossedElement::w(&ctx, s));
        assert_eq!(ts, CrossedElement::w(&ctx, g.mul(t, s)));
        // w_s x1 = -x1 w_s
        let x1 = CrossedElement::var(&ctx, 0);
        let lhs = CrossedElement::w(&ctx, s).mul(&x1);
        let rhs = x1.neg().mul(&CrossedElement::w(&ctx, s));
        assert_eq!(lhs, rhs);
        // and w_t x1 = x1 w_t
        let lhs = CrossedElement::w(&ctx, t).mul(&x1);
        assert_eq!(lhs, x1.mul(&CrossedElement::w(&ctx, t)));
    }

    #[test]
    fn cocycle_scales_symbol_products() {
        let ctx = cyclic_ctx();
        let w1 = CrossedElement::w(&ctx, 1);
        let w2 = CrossedElement::w(&ctx, 2);
        // 1 + 2 = 3 wraps: f = 3, and w_{g^3} = w_e
        let prod = w1.mul(&w2);
        assert_eq!(
            prod,
            CrossedElement::scalar(&ctx, ctx.field.integer(3))
        );
        // 1 + 1 = 2 does not wrap
        assert_eq!(w1.mul(&w1), CrossedElement::w(&ctx, 2));
    }

    #[test]
    fn unit_laws() {
        let ctx = cyclic_ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let one = CrossedElement::one(&ctx);
        for _ in 0..20 {
            let a = random_element(&ctx, &mut rng, 3);
            assert_eq!(one.mul(&a), a);
            assert_eq!(a.mul(&one), a);
        }
    }

    #[test]
    fn product_is_associative() {
        for ctx in [dihedral_ctx(), cyclic_ctx()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..50 {
                let a = random_element(&ctx, &mut rng, 2);
                let b = random_element(&ctx, &mut rng, 2);
                let c = random_element(&ctx, &mut rng, 2);
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }
        }
    }

    #[test]
    fn commutator_is_antisymmetric() {
        let ctx = dihedral_ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_element(&ctx, &mut rng, 2);
        let b = random_element(&ctx, &mut rng, 2);
        assert_eq!(a.commutator(&b), b.commutator(&a).neg());
        assert!(a.commutator(&a).is_zero());
    }

    #[test]
    fn components_and_support() {
        let ctx = dihedral_ctx();
        let t = ctx.group.element_by_name("t").unwrap();
        let x1 = Poly::var(2, 0, FieldSpec::Q);
        let a = CrossedElement::term(&ctx, x1.clone(), t)
            .add(&CrossedElement::one(&ctx));
        assert_eq!(a.support(), vec![0, t]);
        assert_eq!(a.component(t), x1);
        assert!(a.component(5).is_zero());
        assert_eq!(a.max_degree(), 1);
    }

    #[test]
    fn display_reads_like_the_grammar() {
        let ctx = dihedral_ctx();
        let g = &ctx.group;
        let ts = g.parse_word("t*s").unwrap();
        let p = Poly::var(2, 0, FieldSpec::Q)
            .pow(2)
            .add(&Poly::var(2, 1, FieldSpec::Q).scale(&q(2)));
        let a = CrossedElement::term(&ctx, p, ts)
            .add(&CrossedElement::var(&ctx, 0));
        assert_eq!(a.to_string(), "x1*w[e] + (x1^2 + 2*x2)*w[t*s]");
        assert_eq!(CrossedElement::zero(&ctx).to_string(), "0");
        assert_eq!(CrossedElement::one(&ctx).to_string(), "w[e]");
    }

    #[test]
    #[should_panic(expected = "different algebra contexts")]
    fn mixed_contexts_panic() {
        let a = CrossedElement::one(&dihedral_ctx());
        let b = CrossedElement::one(&cyclic_ctx());
        let _ = a.add(&b);
    }

    #[test]
    fn structurally_equal_contexts_interoperate() {
        let a = CrossedElement::one(&dihedral_ctx());
        let b = CrossedElement::one(&dihedral_ctx());
        assert_eq!(a, b);
        assert_eq!(a.mul(&b), a);
    }
}

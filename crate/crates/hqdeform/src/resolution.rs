//! The bimodule resolution of a crossed product and its comparison with the
//! bar resolution.
//!
//! Three layers:
//!
//! * A Koszul-style differential graded algebra on generators `y_v`, `z_v`
//!   (degree 0) and `vbar` (degree 1, square zero), fully commutative, with
//!   boundary `d(vbar_i) = rho_i = z_i - y_i` extended as a graded
//!   derivation. Elements are written on the left basis `y^a rho^m vbar^S`.
//!   [`y_boundary`] and the contracting homotopy [`y_homotopy`] act here.
//!
//! * The double complex `X_{r,s} = A (x) Gbar^{(x)s} (x) Lambda^r V (x) A`
//!   over a crossed product `A`, where `Gbar` is the group algebra with the
//!   identity slot normalized away. The Koszul differential [`x_d0`], the
//!   closed-form group differential [`x_d1_closed`], the one-sided homotopy
//!   [`x_sigma0`], and the recursive oracle [`DiffOracle`] that rebuilds the
//!   differentials from the homotopy (and certifies that nothing survives in
//!   orders two and higher) all act on [`XElement`].
//!
//! * The normalized bar resolution [`BarElement`] with differential
//!   [`bar_differential`], and the comparison map into it: [`theta_closed`]
//!   through twisted shuffles ([`star_shuffle`]) and the recursive
//!   [`ThetaOracle`] defined by `theta(x) = (-1)^{r+s} theta(d x) (x) 1`.

use crate::crossed::{CrossedElement, Ctx};
use crate::poly::{Monomial, Poly};
use crate::scalar::{FieldSpec, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

fn binom_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn sign(field: FieldSpec, k: u32) -> Scalar {
    field.integer(if k % 2 == 0 { 1 } else { -1 })
}

fn bits_ascending(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

// ---------------------------------------------------------------------------
// the commutative DG algebra on y, z (through rho) and vbar

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct YKey {
    pub y: Monomial,
    pub rho: Monomial,
    /// Bitmask of exterior generators; the homological degree is its weight.
    pub vbar: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct YElement {
    pub n: usize,
    pub field: FieldSpec,
    pub terms: BTreeMap<YKey, Scalar>,
}

impl YElement {
    pub fn zero(n: usize, field: FieldSpec) -> YElement {
        YElement { n, field, terms: BTreeMap::new() }
    }

    pub fn basis(n: usize, field: FieldSpec, key: YKey) -> YElement {
        let mut e = YElement::zero(n, field);
        e.add_term(key, field.one());
        e
    }

    pub fn add_term(&mut self, key: YKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &YElement) -> YElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> YElement {
        let mut out = YElement::zero(self.n, self.field);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }
}

/// The graded-derivation boundary: each exterior generator maps to its rho,
/// with the Koszul sign from the generators standing before it.
pub fn y_boundary(e: &YElement) -> YElement {
    let mut out = YElement::zero(e.n, e.field);
    for (key, c) in &e.terms {
        for (pos, i) in bits_ascending(key.vbar).into_iter().enumerate() {
            let mut rho = key.rho.clone();
            rho.0[i] += 1;
            let k = YKey { y: key.y.clone(), rho, vbar: key.vbar & !(1 << i) };
            out.add_term(k, sign(e.field, pos as u32) * c.clone());
        }
    }
    out
}

/// The left-linear contracting homotopy. On a basis word it finds the
/// largest index carrying a rho power or an exterior generator; words ending
/// in an exterior generator (or with nothing active) are sent to zero, and
/// otherwise one rho of that index turns into the exterior generator with
/// the sign `(-1)^{degree}`.
pub fn y_homotopy(e: &YElement) -> YElement {
    let mut out = YElement::zero(e.n, e.field);
    for (key, c) in &e.terms {
        let top_rho = (0..e.n).rev().find(|&i| key.rho.0[i] > 0);
        let top_v = bits_ascending(key.vbar).into_iter().max();
        let top = match (top_rho, top_v) {
            (None, None) => continue,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.max(b),
        };
        if key.vbar & (1 << top) != 0 {
            continue;
        }
        let mut rho = key.rho.clone();
        rho.0[top] -= 1;
        let degree = key.vbar.count_ones();
        let k = YKey { y: key.y.clone(), rho, vbar: key.vbar | (1 << top) };
        out.add_term(k, sign(e.field, degree) * c.clone());
    }
    out
}

/// The augmentation of the degree-zero part: kills every word with a rho
/// factor or exterior generator, keeping the pure y part.
pub fn y_counit(e: &YElement) -> YElement {
    let mut out = YElement::zero(e.n, e.field);
    for (key, c) in &e.terms {
        if key.vbar == 0 && key.rho.total_degree() == 0 {
            out.add_term(key.clone(), c.clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// the double complex over a crossed product

/// One basis tensor `x^a w_g (x) word (x) vbar (x) x^b w_h`. Words never
/// contain the identity; [`XElement::add_term`] drops such terms, which is
/// the normalization of the group slots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XKey {
    pub a_mono: Monomial,
    pub a_g: usize,
    pub word: Vec<usize>,
    pub vbar: u32,
    pub b_mono: Monomial,
    pub b_g: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XElement {
    pub ctx: Ctx,
    pub terms: BTreeMap<XKey, Scalar>,
}

impl XElement {
    pub fn zero(ctx: &Ctx) -> XElement {
        XElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    /// `1 (x) word (x) vbar (x) 1`.
    pub fn generator(ctx: &Ctx, word: &[usize], vbar: u32) -> XElement {
        let mut e = XElement::zero(ctx);
        let n = ctx.n_vars;
        e.add_term(
            XKey {
                a_mono: Monomial::one(n),
                a_g: ctx.group.identity(),
                word: word.to_vec(),
                vbar,
                b_mono: Monomial::one(n),
                b_g: ctx.group.identity(),
            },
            ctx.field.one(),
        );
        e
    }

    pub fn add_term(&mut self, key: XKey, c: Scalar) {
        if c.is_zero() || key.word.contains(&self.ctx.group.identity()) {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &XElement) -> XElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &XElement) -> XElement {
        self.add(&other.scale(&self.ctx.field.integer(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> XElement {
        let mut out = XElement::zero(&self.ctx);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Left action of `A` on the first slot.
    pub fn left_mul(&self, a: &CrossedElement) -> XElement {
        let ctx = &self.ctx;
        let mut out = XElement::zero(ctx);
        for (g, p) in a.components() {
            for (m, c) in p.terms() {
                for (key, v) in &self.terms {
                    // (x^m w_g)(x^a w_{g0}) = x^m (g . x^a) f(g, g0) w_{g g0}
                    let twisted = ctx.rep.act(
                        g,
                        &Poly::monomial(ctx.n_vars, &key.a_mono.0, ctx.field.one()),
                    );
                    let f = ctx.f(g, key.a_g).clone();
                    for (m2, c2) in twisted.terms() {
                        let mut k = key.clone();
                        k.a_mono = m.mul(m2);
                        k.a_g = ctx.group.mul(g, key.a_g);
                        out.add_term(
                            k,
                            c.clone() * c2.clone() * f.clone() * v.clone(),
                        );
                    }
                }
            }
        }
        out
    }

    /// Right action of `A` on the last slot.
    pub fn right_mul(&self, b: &CrossedElement) -> XElement {
        let ctx = &self.ctx;
        let mut out = XElement::zero(ctx);
        for (key, v) in &self.terms {
            for (g, p) in b.components() {
                for (m, c) in p.terms() {
                    // (x^b w_h)(x^m w_g) = x^b (h . x^m) f(h, g) w_{h g}
                    let twisted = ctx.rep.act(
                        key.b_g,
                        &Poly::monomial(ctx.n_vars, &m.0, ctx.field.one()),
                    );
                    let f = ctx.f(key.b_g, g).clone();
                    for (m2, c2) in twisted.terms() {
                        let mut k = key.clone();
                        k.b_mono = key.b_mono.mul(m2);
                        k.b_g = ctx.group.mul(key.b_g, g);
                        out.add_term(
                            k,
                            v.clone() * c.clone() * c2.clone() * f.clone(),
                        );
                    }
                }
            }
        }
        out
    }

    fn a_elt(&self, key: &XKey) -> CrossedElement {
        CrossedElement::term(
            &self.ctx,
            Poly::monomial(self.ctx.n_vars, &key.a_mono.0, self.ctx.field.one()),
            key.a_g,
        )
    }

    fn b_elt(&self, key: &XKey) -> CrossedElement {
        CrossedElement::term(
            &self.ctx,
            Poly::monomial(self.ctx.n_vars, &key.b_mono.0, self.ctx.field.one()),
            key.b_g,
        )
    }
}

impl fmt::Display for XElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: Vec<&str> =
                k.word.iter().map(|&g| self.ctx.group.name(g)).collect();
            let vbar: Vec<String> = bits_ascending(k.vbar)
                .into_iter()
                .map(|i| format!("x{}bar", i + 1))
                .collect();
            write!(
                f,
                "{c} * [{} w[{}] | {} | {} | {} w[{}]]",
                Poly::monomial(self.ctx.n_vars, &k.a_mono.0, self.ctx.field.one()),
                self.ctx.group.name(k.a_g),
                word.join(","),
                vbar.join("^"),
                Poly::monomial(self.ctx.n_vars, &k.b_mono.0, self.ctx.field.one()),
                self.ctx.group.name(k.b_g),
            )?;
        }
        Ok(())
    }
}

/// Product of the full group word of a key, including the left slot's
/// symbol: the twist that moves right-hand polynomials to the left.
fn word_twist(ctx: &Ctx, key: &XKey) -> usize {
    let mut g = key.a_g;
    for &w in &key.word {
        g = ctx.group.mul(g, w);
    }
    g
}

/// The Koszul differential: each exterior generator splits into a right
/// multiplication minus a twisted left multiplication,
///
/// ```text
/// d0(a (x) word (x) v_1..v_r (x) b)
///   = (-1)^s sum_j (-1)^{j-1} [ a (x) word (x) v\j (x) x_{i_j} b
///                             - a . (word acting on x_{i_j}) (x) word (x) v\j (x) b ]
/// ```
pub fn x_d0(e: &XElement) -> XElement {
    let ctx = &e.ctx;
    let n = ctx.n_vars;
    let mut out = XElement::zero(ctx);
    for (key, c) in &e.terms {
        let s = key.word.len() as u32;
        let tw = word_twist(ctx, key);
        for (pos, i) in bits_ascending(key.vbar).into_iter().enumerate() {
            let outer = sign(ctx.field, s) * sign(ctx.field, pos as u32) * c.clone();
            // right term: x_i multiplies the right slot from the left
            let mut k = key.clone();
            k.vbar &= !(1 << i);
            let mut bm = Monomial::one(n);
            bm.0[i] = 1;
            k.b_mono = bm.mul(&key.b_mono);
            out.add_term(k, outer.clone());
            // left term: the word-twisted variable joins the left slot
            let twisted = ctx.rep.act_var(tw, i);
            for (m2, c2) in twisted.terms() {
                let mut k = key.clone();
                k.vbar &= !(1 << i);
                k.a_mono = key.a_mono.mul(m2);
                out.add_term(k, -(outer.clone() * c2.clone()));
            }
        }
    }
    out
}

/// Inserts the linear form `p` (an image of a variable under the group
/// action) into the exterior word at the front, expanding multilinearly;
/// used by the closed form of the group differential.
fn wedge_insert(
    ctx: &Ctx,
    base: Vec<(u32, Scalar)>,
    p: &Poly,
) -> Vec<(u32, Scalar)> {
    let mut out = Vec::new();
    for (mask, c) in &base {
        for (m, cv) in p.terms() {
            let i = (0..ctx.n_vars)
                .find(|&j| m.exponent(j) == 1)
                .expect("action images of variables are linear");
            if mask & (1 << i) != 0 {
                continue; // repeated generator
            }
            // insert at the front: sign counts the generators it passes
            // to reach its sorted position
            let below = (mask & ((1u32 << i) - 1)).count_ones();
            out.push((
                mask | (1 << i),
                c.clone() * cv.clone() * sign(ctx.field, below),
            ));
        }
    }
    out
}

/// The closed form of the group-direction differential: the first word
/// letter joins the left slot, adjacent letters merge with a cocycle factor
/// and alternating signs, and the last letter acts on the exterior part and
/// joins the right slot with sign `(-1)^s`.
pub fn x_d1_closed(e: &XElement) -> XElement {
    let ctx = &e.ctx;
    let mut out = XElement::zero(ctx);
    for (key, c) in &e.terms {
        let s = key.word.len();
        if s == 0 {
            continue;
        }
        // first letter into the left slot
        {
            let g1 = key.word[0];
            let mut k = key.clone();
            k.word = key.word[1..].to_vec();
            // (x^a w_{g0}) w_{g1} = f(g0, g1) x^a w_{g0 g1}
            k.a_g = ctx.group.mul(key.a_g, g1);
            let f = ctx.f(key.a_g, g1).clone();
            out.add_term(k, c.clone() * f);
        }
        // adjacent merges
        for i in 1..s {
            let gi = key.word[i - 1];
            let gi1 = key.word[i];
            let merged = ctx.group.mul(gi, gi1);
            let mut word = Vec::with_capacity(s - 1);
            word.extend_from_slice(&key.word[..i - 1]);
            word.push(merged);
            word.extend_from_slice(&key.word[i + 1..]);
            let mut k = key.clone();
            k.word = word;
            let f = ctx.f(gi, gi1).clone();
            out.add_term(k, sign(ctx.field, i as u32) * f * c.clone());
        }
        // last letter twists the exterior part and joins the right slot
        {
            let gs = key.word[s - 1];
            let mut wedges = vec![(0u32, ctx.field.one())];
            // insert images in reverse so the first exterior generator ends
            // up in front
            for i in bits_ascending(key.vbar).into_iter().rev() {
                wedges = wedge_insert(ctx, wedges, &ctx.rep.act_var(gs, i));
            }
            let f = ctx.f(gs, key.b_g).clone();
            let twisted_b = ctx.rep.act(
                gs,
                &Poly::monomial(ctx.n_vars, &key.b_mono.0, ctx.field.one()),
            );
            for (mask, cw) in wedges {
                for (m2, c2) in twisted_b.terms() {
                    let mut k = key.clone();
                    k.word = key.word[..s - 1].to_vec();
                    k.vbar = mask;
                    k.b_mono = m2.clone();
                    k.b_g = ctx.group.mul(gs, key.b_g);
                    out.add_term(
                        k,
                        sign(ctx.field, s as u32)
                            * cw.clone()
                            * f.clone()
                            * c2.clone()
                            * c.clone(),
                    );
                }
            }
        }
    }
    out
}

/// The one-sided homotopy for the Koszul direction. The right slot's
/// polynomial is rewritten through `z = y + rho`: the `y` parts move to the
/// left slot twisted by the full word, the trailing-index rule of
/// [`y_homotopy`] applies to the `rho` parts together with the exterior
/// word, and the surviving `rho`s expand back as `z - y`. The global sign
/// is `(-1)^s`.
pub fn x_sigma0(e: &XElement) -> XElement {
    let ctx = &e.ctx;
    let n = ctx.n_vars;
    let field = ctx.field;
    let mut out = XElement::zero(ctx);
    for (key, c) in &e.terms {
        let s = key.word.len() as u32;
        let tw = word_twist(ctx, key);
        let r = key.vbar.count_ones();
        // enumerate y/rho splittings of the right polynomial
        let beta = &key.b_mono;
        let mut gammas = vec![Monomial::one(n)];
        for i in 0..n {
            let mut next = Vec::new();
            for g in &gammas {
                for e_i in 0..=beta.0[i] {
                    let mut g2 = g.clone();
                    g2.0[i] = e_i;
                    next.push(g2);
                }
            }
            gammas = next;
        }
        for gamma in gammas {
            // binomial weight for choosing y^gamma out of z^beta
            let mut weight = c.clone();
            for i in 0..n {
                weight *= field.integer(binom_u64(
                    beta.0[i] as u64,
                    gamma.0[i] as u64,
                ) as i64);
            }
            if weight.is_zero() {
                continue;
            }
            let mut rho = beta.clone();
            for i in 0..n {
                rho.0[i] -= gamma.0[i];
            }
            // trailing-index rule on (rho, vbar)
            let top_rho = (0..n).rev().find(|&i| rho.0[i] > 0);
            let top_v = bits_ascending(key.vbar).into_iter().max();
            let top = match (top_rho, top_v) {
                (None, None) => continue,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.max(b),
            };
            if key.vbar & (1 << top) != 0 {
                continue;
            }
            rho.0[top] -= 1;
            let vbar = key.vbar | (1 << top);
            let total_sign = sign(field, r) * sign(field, s);
            // move y^gamma into the left slot
            let y_poly = ctx.rep.act(
                tw,
                &Poly::monomial(n, &gamma.0, field.one()),
            );
            // expand the remaining rho^m back into z and y parts
            let mut pieces: Vec<(Monomial, Monomial, Scalar)> =
                vec![(Monomial::one(n), Monomial::one(n), field.one())];
            for i in 0..n {
                if rho.0[i] == 0 {
                    continue;
                }
                let mut next = Vec::new();
                for (zm, ym, pc) in &pieces {
                    for zi in 0..=rho.0[i] {
                        let yi = rho.0[i] - zi;
                        let mut zm2 = zm.clone();
                        zm2.0[i] += zi;
                        let mut ym2 = ym.clone();
                        ym2.0[i] += yi;
                        let coeff = field.integer(
                            binom_u64(rho.0[i] as u64, zi as u64) as i64,
                        ) * sign(field, yi as u32)
                            * pc.clone();
                        next.push((zm2, ym2, coeff));
                    }
                }
                pieces = next;
            }
            for (zm, ym, pc) in pieces {
                let y_extra =
                    ctx.rep.act(tw, &Poly::monomial(n, &ym.0, field.one()));
                for (am, ac) in y_poly.mul(&y_extra).terms() {
                    let mut k = key.clone();
                    k.a_mono = key.a_mono.mul(am);
                    k.vbar = vbar;
                    k.b_mono = zm.clone();
                    out.add_term(
                        k,
                        weight.clone()
                            * total_sign.clone()
                            * pc.clone()
                            * ac.clone(),
                    );
                }
            }
        }
    }
    out
}

/// The projection of the bottom row onto the group-bar part: the right
/// polynomial moves to the left slot twisted by the full word ("setting rho
/// to zero"). Only meaningful on elements without exterior generators.
pub fn x_mu_project(e: &XElement) -> XElement {
    let ctx = &e.ctx;
    let n = ctx.n_vars;
    let mut out = XElement::zero(ctx);
    for (key, c) in &e.terms {
        assert_eq!(key.vbar, 0, "projection applies to the bottom row only");
        let tw = word_twist(ctx, key);
        let moved = ctx.rep.act(
            tw,
            &Poly::monomial(n, &key.b_mono.0, ctx.field.one()),
        );
        for (m2, c2) in moved.terms() {
            let mut k = key.clone();
            k.a_mono = key.a_mono.mul(m2);
            k.b_mono = Monomial::one(n);
            out.add_term(k, c.clone() * c2.clone());
        }
    }
    out
}

/// Memoized recursive construction of the differentials `d^l` from the
/// homotopy: on the bottom row `d^1` is the group-bar differential, above it
/// `d^1 = -sigma0 . d^1 . d0`, and for `l >= 2`
///
/// ```text
/// d^l = - sum_j sigma0 . d^{l-j} . d^j      (j >= 1 on the bottom row,
///                                            j >= 0 above it)
/// ```
///
/// Values on arbitrary elements extend those on generators by the bimodule
/// structure.
pub struct DiffOracle {
    ctx: Ctx,
    cache: HashMap<(u32, Vec<usize>, u32), XElement>,
}

impl DiffOracle {
    pub fn new(ctx: &Ctx) -> DiffOracle {
        DiffOracle { ctx: ctx.clone(), cache: HashMap::new() }
    }

    /// `d^l` on the generator `1 (x) word (x) vbar (x) 1`.
    pub fn on_generator(&mut self, l: u32, word: &[usize], vbar: u32) -> XElement {
        assert!(l >= 1);
        let key = (l, word.to_vec(), vbar);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let ctx = self.ctx.clone();
        let s = word.len();
        let result = if l == 1 && vbar == 0 {
            // group-bar differential
            let mut out = XElement::zero(&ctx);
            if s > 0 {
                let gen = XElement::generator(&ctx, word, 0);
                let (k0, _) = gen.terms.iter().next().unwrap();
                let mut k = k0.clone();
                k.word = word[1..].to_vec();
                k.a_g = word[0];
                out.add_term(k, ctx.field.one());
                for i in 1..s {
                    let merged = ctx.group.mul(word[i - 1], word[i]);
                    let mut w = Vec::with_capacity(s - 1);
                    w.extend_from_slice(&word[..i - 1]);
                    w.push(merged);
                    w.extend_from_slice(&word[i + 1..]);
                    let mut k = k0.clone();
                    k.word = w;
                    let f = ctx.f(word[i - 1], word[i]).clone();
                    out.add_term(k, sign(ctx.field, i as u32) * f);
                }
                let mut k = k0.clone();
                k.word = word[..s - 1].to_vec();
                k.b_g = word[s - 1];
                out.add_term(k, sign(ctx.field, s as u32));
            }
            out
        } else if l == 1 {
            // -sigma0 . d1 . d0 on the generator
            let d0 = x_d0(&XElement::generator(&ctx, word, vbar));
            let d1 = self.apply(1, &d0);
            x_sigma0(&d1).scale(&ctx.field.integer(-1))
        } else {
            let j_start = if vbar == 0 { 1 } else { 0 };
            let mut acc = XElement::zero(&ctx);
            for j in j_start..l {
                let inner = if j == 0 {
                    x_d0(&XElement::generator(&ctx, word, vbar))
                } else {
                    self.apply(j, &XElement::generator(&ctx, word, vbar))
                };
                let outer = self.apply(l - j, &inner);
                acc = acc.add(&outer);
            }
            x_sigma0(&acc).scale(&ctx.field.integer(-1))
        };
        self.cache.insert(key, result.clone());
        result
    }

    /// `d^l` on an arbitrary element, extended over the bimodule structure.
    pub fn apply(&mut self, l: u32, e: &XElement) -> XElement {
        let ctx = self.ctx.clone();
        let mut out = XElement::zero(&ctx);
        for (key, c) in &e.terms {
            let on_gen = self.on_generator(l, &key.word, key.vbar);
            let a = e.a_elt(key);
            let b = e.b_elt(key);
            out = out.add(&on_gen.left_mul(&a).right_mul(&b).scale(c));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// the normalized bar resolution and the comparison map

/// One basis tensor of the bar resolution: outer slots in `A`, middle slots
/// in `A` with the unit direction normalized away (a middle slot equal to a
/// scalar kills the term).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BarKey {
    pub head_mono: Monomial,
    pub head_g: usize,
    pub middle: Vec<(Monomial, usize)>,
    pub tail_mono: Monomial,
    pub tail_g: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarElement {
    pub ctx: Ctx,
    pub terms: BTreeMap<BarKey, Scalar>,
}

impl BarElement {
    pub fn zero(ctx: &Ctx) -> BarElement {
        BarElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, key: BarKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        // normalization: scalar middle slots kill the term
        let e = self.ctx.group.identity();
        if key
            .middle
            .iter()
            .any(|(m, g)| *g == e && m.total_degree() == 0)
        {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BarElement) -> BarElement {
        self.add(&other.scale(&self.ctx.field.integer(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> BarElement {
        let mut out = BarElement::zero(&self.ctx);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn left_mul(&self, a: &CrossedElement) -> BarElement {
        let ctx = &self.ctx;
        let mut out = BarElement::zero(ctx);
        for (g, p) in a.components() {
            for (m, c) in p.terms() {
                for (key, v) in &self.terms {
                    let twisted = ctx.rep.act(
                        g,
                        &Poly::monomial(ctx.n_vars, &key.head_mono.0, ctx.field.one()),
                    );
                    let f = ctx.f(g, key.head_g).clone();
                    for (m2, c2) in twisted.terms() {
                        let mut k = key.clone();
                        k.head_mono = m.mul(m2);
                        k.head_g = ctx.group.mul(g, key.head_g);
                        out.add_term(
                            k,
                            c.clone() * c2.clone() * f.clone() * v.clone(),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn right_mul(&self, b: &CrossedElement) -> BarElement {
        let ctx = &self.ctx;
        let mut out = BarElement::zero(ctx);
        for (key, v) in &self.terms {
            for (g, p) in b.components() {
                for (m, c) in p.terms() {
                    let twisted = ctx.rep.act(
                        key.tail_g,
                        &Poly::monomial(ctx.n_vars, &m.0, ctx.field.one()),
                    );
                    let f = ctx.f(key.tail_g, g).clone();
                    for (m2, c2) in twisted.terms() {
                        let mut k = key.clone();
                        k.tail_mono = key.tail_mono.mul(m2);
                        k.tail_g = ctx.group.mul(key.tail_g, g);
                        out.add_term(
                            k,
                            v.clone() * c.clone() * c2.clone() * f.clone(),
                        );
                    }
                }
            }
        }
        out
    }

    /// Moves the tail into a fresh middle slot, leaving a unit tail. Scalar
    /// tails die by normalization.
    pub fn push_tail(&self) -> BarElement {
        let ctx = &self.ctx;
        let mut out = BarElement::zero(ctx);
        for (key, c) in &self.terms {
            let mut k = key.clone();
            k.middle.push((key.tail_mono.clone(), key.tail_g));
            k.tail_mono = Monomial::one(ctx.n_vars);
            k.tail_g = ctx.group.identity();
            out.add_term(k, c.clone());
        }
        out
    }
}

/// Multiplies two monomial-level algebra slots, returning the expansion.
fn slot_mul(
    ctx: &Ctx,
    a: (&Monomial, usize),
    b: (&Monomial, usize),
) -> Vec<(Monomial, usize, Scalar)> {
    let twisted = ctx
        .rep
        .act(a.1, &Poly::monomial(ctx.n_vars, &b.0 .0, ctx.field.one()));
    let f = ctx.f(a.1, b.1).clone();
    let g = ctx.group.mul(a.1, b.1);
    twisted
        .terms()
        .map(|(m, c)| (a.0.mul(m), g, c.clone() * f.clone()))
        .collect()
}

/// The bar differential: alternating sum of adjacent multiplications, with
/// middle products renormalized.
pub fn bar_differential(e: &BarElement) -> BarElement {
    let ctx = &e.ctx;
    let mut out = BarElement::zero(ctx);
    for (key, c) in &e.terms {
        let n = key.middle.len();
        for i in 0..=n {
            let sg = sign(ctx.field, i as u32) * c.clone();
            if n == 0 {
                // head times tail, landing in degree -1: not part of the
                // resolution differential
                continue;
            }
            if i == 0 {
                let prods = slot_mul(
                    ctx,
                    (&key.head_mono, key.head_g),
                    (&key.middle[0].0, key.middle[0].1),
                );
                for (m, g, pc) in prods {
                    let mut k = key.clone();
                    k.head_mono = m;
                    k.head_g = g;
                    k.middle = key.middle[1..].to_vec();
                    out.add_term(k, sg.clone() * pc);
                }
            } else if i == n {
                let prods = slot_mul(
                    ctx,
                    (&key.middle[n - 1].0, key.middle[n - 1].1),
                    (&key.tail_mono, key.tail_g),
                );
                for (m, g, pc) in prods {
                    let mut k = key.clone();
                    k.middle = key.middle[..n - 1].to_vec();
                    k.tail_mono = m;
                    k.tail_g = g;
                    out.add_term(k, sg.clone() * pc);
                }
            } else {
                let prods = slot_mul(
                    ctx,
                    (&key.middle[i - 1].0, key.middle[i - 1].1),
                    (&key.middle[i].0, key.middle[i].1),
                );
                for (m, g, pc) in prods {
                    let mut k = key.clone();
                    let mut mid = Vec::with_capacity(n - 1);
                    mid.extend_from_slice(&key.middle[..i - 1]);
                    mid.push((m, g));
                    mid.extend_from_slice(&key.middle[i + 1..]);
                    k.middle = mid;
                    out.add_term(k, sg.clone() * pc);
                }
            }
        }
    }
    out
}

/// The twisted shuffle of a word of group symbols with a word of
/// polynomials: the last symbol passes the first `i` polynomials, twisting
/// them by its action, with sign `(-1)^i`. Returns slot sequences with
/// coefficients; polynomial slots may expand into several monomials later.
pub fn star_shuffle(
    ctx: &Ctx,
    ws: &[usize],
    qs: &[Poly],
) -> Vec<(Vec<CrossedElement>, Scalar)> {
    if ws.is_empty() {
        let slots: Vec<CrossedElement> = qs
            .iter()
            .map(|q| CrossedElement::from_poly(ctx, q.clone()))
            .collect();
        return vec![(slots, ctx.field.one())];
    }
    if qs.is_empty() {
        let slots: Vec<CrossedElement> =
            ws.iter().map(|&g| CrossedElement::w(ctx, g)).collect();
        return vec![(slots, ctx.field.one())];
    }
    let s = ws.len();
    let gs = ws[s - 1];
    let mut out = Vec::new();
    for i in 0..=qs.len() {
        let twisted: Vec<Poly> =
            qs[..i].iter().map(|q| ctx.rep.act(gs, q)).collect();
        for (mut slots, c) in star_shuffle(ctx, &ws[..s - 1], &twisted) {
            slots.push(CrossedElement::w(ctx, gs));
            for q in &qs[i..] {
                slots.push(CrossedElement::from_poly(ctx, q.clone()));
            }
            out.push((slots, c * sign(ctx.field, i as u32)));
        }
    }
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (perm, sg) in permutations(k - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, k - 1);
            // inserting at `pos` from the right end counts transpositions
            let swaps = (perm.len() - pos) as i32;
            out.push((p, if swaps % 2 == 0 { sg } else { -sg }));
        }
    }
    out
}

/// Expands slot sequences into bar tensors `1 (x) slots (x) 1`.
fn slots_to_bar(ctx: &Ctx, slots: &[CrossedElement], coeff: &Scalar) -> BarElement {
    let n = ctx.n_vars;
    let mut keys: Vec<(Vec<(Monomial, usize)>, Scalar)> =
        vec![(Vec::new(), coeff.clone())];
    for slot in slots {
        let mut next = Vec::new();
        for (prefix, c) in &keys {
            for (g, p) in slot.components() {
                for (m, cv) in p.terms() {
                    let mut pre = prefix.clone();
                    pre.push((m.clone(), g));
                    next.push((pre, c.clone() * cv.clone()));
                }
            }
        }
        keys = next;
    }
    let mut out = BarElement::zero(ctx);
    for (middle, c) in keys {
        out.add_term(
            BarKey {
                head_mono: Monomial::one(n),
                head_g: ctx.group.identity(),
                middle,
                tail_mono: Monomial::one(n),
                tail_g: ctx.group.identity(),
            },
            c,
        );
    }
    out
}

/// The closed form of the comparison map on a generator: a signed sum over
/// permutations of the exterior generators of the twisted shuffles of the
/// group word with the corresponding variables,
///
/// ```text
/// theta(1 (x) g_1..g_s (x) v_1..v_r (x) 1)
///   = (-1)^r sum_tau sg(tau) 1 (x) (w-word * v_{tau}) (x) 1
/// ```
pub fn theta_closed(ctx: &Ctx, word: &[usize], vbar: u32) -> BarElement {
    let field = ctx.field;
    let vars = bits_ascending(vbar);
    let r = vars.len();
    let mut out = BarElement::zero(ctx);
    for (perm, sg) in permutations(r) {
        let qs: Vec<Poly> = perm
            .iter()
            .map(|&k| Poly::var(ctx.n_vars, vars[k], field))
            .collect();
        for (slots, c) in star_shuffle(ctx, word, &qs) {
            let coeff = sign(field, r as u32)
                * field.integer(sg as i64)
                * c.clone();
            out = out.add(&slots_to_bar(ctx, &slots, &coeff));
        }
    }
    out
}

/// The recursive comparison map `theta(x) = (-1)^{r+s} theta(d x) (x) 1`,
/// memoized on generators and extended over the bimodule structure.
pub struct ThetaOracle {
    ctx: Ctx,
    cache: HashMap<(Vec<usize>, u32), BarElement>,
}

impl ThetaOracle {
    pub fn new(ctx: &Ctx) -> ThetaOracle {
        ThetaOracle { ctx: ctx.clone(), cache: HashMap::new() }
    }

    pub fn on_generator(&mut self, word: &[usize], vbar: u32) -> BarElement {
        let key = (word.to_vec(), vbar);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let ctx = self.ctx.clone();
        let n = word.len() as u32 + vbar.count_ones();
        let result = if n == 0 {
            let mut e = BarElement::zero(&ctx);
            e.add_term(
                BarKey {
                    head_mono: Monomial::one(ctx.n_vars),
                    head_g: ctx.group.identity(),
                    middle: Vec::new(),
                    tail_mono: Monomial::one(ctx.n_vars),
                    tail_g: ctx.group.identity(),
                },
                ctx.field.one(),
            );
            e
        } else {
            let gen = XElement::generator(&ctx, word, vbar);
            let dx = x_d0(&gen).add(&x_d1_closed(&gen));
            let mapped = self.apply(&dx);
            mapped.push_tail().scale(&sign(ctx.field, n))
        };
        self.cache.insert(key, result.clone());
        result
    }

    /// Applies the map to an arbitrary element by the bimodule extension.
    pub fn apply(&mut self, e: &XElement) -> BarElement {
        let ctx = self.ctx.clone();
        let mut out = BarElement::zero(&ctx);
        for (key, c) in &e.terms {
            let on_gen = self.on_generator(&key.word, key.vbar);
            let a = e.a_elt(key);
            let b = e.b_elt(key);
            out = out.add(&on_gen.left_mul(&a).right_mul(&b).scale(c));
        }
        out
    }
}

/// Every basis key of the variables-only complex with weight (polynomial
/// degree of the coefficient plus exterior degree) at most `max_weight`,
/// decorated with an extra degree-`y_deg` output monomial when nonzero.
pub fn enumerate_y_keys(n: usize, max_weight: u32, y_deg: u16) -> Vec<YKey> {
    let mut rhos = vec![Monomial::one(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for m in &rhos {
            for e in 0..=max_weight as u16 {
                let mut m2 = m.clone();
                m2.0[i] = e;
                next.push(m2);
            }
        }
        rhos = next;
    }
    let mut ys = vec![Monomial::one(n)];
    if y_deg > 0 {
        let mut m = Monomial::one(n);
        m.0[0] = y_deg;
        ys.push(m);
    }
    let mut out = Vec::new();
    for rho in &rhos {
        for mask in 0u32..(1 << n) {
            if rho.total_degree() + mask.count_ones() > max_weight {
                continue;
            }
            for y in &ys {
                out.push(YKey { y: y.clone(), rho: rho.clone(), vbar: mask });
            }
        }
    }
    out
}

/// All words in non-identity group elements of length at most `len`.
pub fn small_words(ctx: &Ctx, len: usize) -> Vec<Vec<usize>> {
    let nonid: Vec<usize> = ctx
        .group
        .elements()
        .filter(|&g| g != ctx.group.identity())
        .collect();
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            if w.len() < len {
                for &g in &nonid {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push(w2);
                }
            }
        }
        words.extend(next);
        words.sort();
        words.dedup();
    }
    words
}

/// The complete generator basis with word length plus exterior degree at
/// most `total`.
pub fn generators_up_to(ctx: &Ctx, total: usize) -> Vec<(Vec<usize>, u32)> {
    let n = ctx.n_vars;
    let mut out = Vec::new();
    for word in small_words(ctx, total) {
        for mask in 0u32..(1 << n) {
            if word.len() + mask.count_ones() as usize <= total {
                out.push((word.clone(), mask));
            }
        }
    }
    out
}

fn seeded_x_element(ctx: &Ctx, rng: &mut ChaCha8Rng, min_r: u32) -> XElement {
    let n = ctx.n_vars;
    let mut e = XElement::zero(ctx);
    for _ in 0..2 {
        let s = rng.gen_range(0..=2);
        let nonid: Vec<usize> = ctx
            .group
            .elements()
            .filter(|&g| g != ctx.group.identity())
            .collect();
        let word: Vec<usize> =
            (0..s).map(|_| nonid[rng.gen_range(0..nonid.len())]).collect();
        let mut vbar = 0u32;
        for _ in 0..min_r {
            vbar |= 1 << rng.gen_range(0..n);
        }
        let mut am = Monomial::one(n);
        am.0[rng.gen_range(0..n)] = rng.gen_range(0..=2);
        let mut bm = Monomial::one(n);
        bm.0[rng.gen_range(0..n)] = rng.gen_range(0..=2);
        e.add_term(
            XKey {
                a_mono: am,
                a_g: rng.gen_range(0..ctx.group.n),
                word,
                vbar,
                b_mono: bm,
                b_g: rng.gen_range(0..ctx.group.n),
            },
            ctx.field.integer(rng.gen_range(-2..=2)),
        );
    }
    e
}

/// One verified identity family, with the number of basis cases exercised.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub ok: bool,
    pub cases: usize,
}

/// Runs every structural identity of the resolution machinery and reports
/// one verdict per family. Generator families run over the complete basis
/// with word length plus exterior degree at most `bound`; the contracting
/// homotopies additionally see coefficient monomials up to weight
/// `bound + 1` (vertical complex) or seeded random two-sided multiples
/// (columns), so the non-module maps are exercised away from generators.
pub fn identity_battery(ctx: &Ctx, bound: usize) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let n = ctx.n_vars;
    let field = ctx.field;

    let y_keys = enumerate_y_keys(n, bound as u32 + 1, 2);
    let mut ok = true;
    for key in &y_keys {
        let e = YElement::basis(n, field, key.clone());
        ok &= y_boundary(&y_boundary(&e)).is_zero();
    }
    out.push(IdentityCheck { id: "vertical-boundary-squared", ok, cases: y_keys.len() });

    let mut ok = true;
    for key in &y_keys {
        let e = YElement::basis(n, field, key.clone());
        let lhs = if key.vbar == 0 {
            y_boundary(&y_homotopy(&e)).add(&y_counit(&e))
        } else {
            y_homotopy(&y_boundary(&e)).add(&y_boundary(&y_homotopy(&e)))
        };
        ok &= lhs == e;
    }
    out.push(IdentityCheck { id: "vertical-homotopy-contracts", ok, cases: y_keys.len() });

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ok = true;
    let samples = 40;
    for _ in 0..samples {
        let e = seeded_x_element(ctx, &mut rng, 2);
        ok &= x_d0(&x_d0(&e)).is_zero();
    }
    out.push(IdentityCheck { id: "column-boundary-squared", ok, cases: samples });

    let mut ok = true;
    for _ in 0..samples {
        let e = seeded_x_element(ctx, &mut rng, 1);
        ok &= x_d0(&x_sigma0(&e)).add(&x_sigma0(&x_d0(&e))) == e;
    }
    for _ in 0..samples {
        let mut bottom = XElement::zero(ctx);
        for (k, c) in &seeded_x_element(ctx, &mut rng, 0).terms {
            if k.vbar == 0 {
                bottom.add_term(k.clone(), c.clone());
            }
        }
        ok &= x_d0(&x_sigma0(&bottom)).add(&x_mu_project(&bottom)) == bottom;
    }
    out.push(IdentityCheck { id: "column-homotopy-contracts", ok, cases: 2 * samples });

    let gens = generators_up_to(ctx, bound);
    let mut ok = true;
    let mut oracle = DiffOracle::new(ctx);
    for (word, vbar) in &gens {
        let gen = XElement::generator(ctx, word, *vbar);
        ok &= x_d1_closed(&gen) == oracle.on_generator(1, word, *vbar);
    }
    out.push(IdentityCheck { id: "group-differential-closed-form", ok, cases: gens.len() });

    let mut ok = true;
    for (word, vbar) in &gens {
        let gen = XElement::generator(ctx, word, *vbar);
        let d0 = x_d0(&gen);
        let d1 = x_d1_closed(&gen);
        ok &= x_d0(&d0).is_zero();
        ok &= x_d0(&d1).add(&x_d1_closed(&d0)).is_zero();
        ok &= x_d1_closed(&d1).is_zero();
    }
    out.push(IdentityCheck { id: "total-differential-squared", ok, cases: gens.len() });

    let mut ok = true;
    let mut cases = 0;
    for (word, vbar) in &gens {
        if word.len() < 2 {
            continue;
        }
        ok &= oracle.on_generator(2, word, *vbar).is_zero();
        cases += 1;
        if word.len() >= 3 {
            ok &= oracle.on_generator(3, word, *vbar).is_zero();
            cases += 1;
        }
    }
    out.push(IdentityCheck { id: "higher-differentials-vanish", ok, cases });

    let mut theta = ThetaOracle::new(ctx);
    let mut ok = true;
    for (word, vbar) in &gens {
        ok &= theta_closed(ctx, word, *vbar) == theta.on_generator(word, *vbar);
    }
    out.push(IdentityCheck { id: "comparison-closed-form", ok, cases: gens.len() });

    let mut ok = true;
    for (word, vbar) in &gens {
        let gen = XElement::generator(ctx, word, *vbar);
        let lhs = bar_differential(&theta.on_generator(word, *vbar));
        let rhs = theta.apply(&x_d0(&gen).add(&x_d1_closed(&gen)));
        ok &= lhs == rhs;
    }
    out.push(IdentityCheck { id: "comparison-chain-map", ok, cases: gens.len() });

    let mut ok = true;
    for (word, vbar) in &gens {
        ok &= bar_differential(&bar_differential(&theta.on_generator(word, *vbar)))
            .is_zero();
    }
    out.push(IdentityCheck { id: "bar-differential-squared", ok, cases: gens.len() });

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn y_boundary_squares_to_zero() {
        for n in 1..=3usize {
            for key in enumerate_y_keys(n, 4, 2) {
                let e = YElement::basis(n, FieldSpec::Q, key);
                assert!(y_boundary(&y_boundary(&e)).is_zero());
            }
        }
    }

    #[test]
    fn y_homotopy_contracts_every_degree() {
        for n in 1..=3usize {
            for key in enumerate_y_keys(n, 4, 2) {
                let e = YElement::basis(n, FieldSpec::Q, key.clone());
                let r = key.vbar.count_ones();
                if r == 0 {
                    // degree zero: homotopy then boundary recovers all but
                    // the augmentation part
                    let back = y_boundary(&y_homotopy(&e)).add(&y_counit(&e));
                    assert_eq!(back, e, "degree 0 identity at {key:?}");
                } else {
                    let lhs = y_homotopy(&y_boundary(&e))
                        .add(&y_boundary(&y_homotopy(&e)));
                    assert_eq!(lhs, e, "degree {r} identity at {key:?}");
                }
            }
        }
    }

    #[test]
    fn koszul_differential_squares_to_zero() {
        let ctx = fixtures::dihedral_context();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let e = seeded_x_element(&ctx, &mut rng, 2);
            assert!(x_d0(&x_d0(&e)).is_zero());
        }
    }

    #[test]
    fn column_homotopy_identities() {
        let ctx = fixtures::dihedral_context();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        // above the bottom row: d0 sigma0 + sigma0 d0 = id
        for _ in 0..25 {
            let e = seeded_x_element(&ctx, &mut rng, 1);
            let lhs = x_d0(&x_sigma0(&e)).add(&x_sigma0(&x_d0(&e)));
            assert_eq!(lhs, e);
        }
        // bottom row: d0 sigma0 + projection = id
        for _ in 0..25 {
            let e = seeded_x_element(&ctx, &mut rng, 0);
            let bottom: XElement = {
                let mut out = XElement::zero(&ctx);
                for (k, c) in &e.terms {
                    if k.vbar == 0 {
                        out.add_term(k.clone(), c.clone());
                    }
                }
                out
            };
            let lhs = x_d0(&x_sigma0(&bottom)).add(&x_mu_project(&bottom));
            assert_eq!(lhs, bottom);
        }
    }

    #[test]
    fn closed_and_recursive_group_differentials_agree() {
        for ctx in [fixtures::dihedral_context(), fixtures::cyclic_recipe_input().ctx] {
            let mut oracle = DiffOracle::new(&ctx);
            for (word, vbar) in generators_up_to(&ctx, 2) {
                let gen = XElement::generator(&ctx, &word, vbar);
                let closed = x_d1_closed(&gen);
                let recursive = oracle.on_generator(1, &word, vbar);
                assert_eq!(
                    closed, recursive,
                    "word {word:?} mask {vbar:o} in |G|={}",
                    ctx.group.n
                );
            }
        }
    }

    #[test]
    fn total_differential_squares_to_zero_on_generators() {
        let ctx = fixtures::cyclic_recipe_input().ctx;
        for (word, vbar) in generators_up_to(&ctx, 2) {
            let gen = XElement::generator(&ctx, &word, vbar);
            let d0 = x_d0(&gen);
            let d1 = x_d1_closed(&gen);
            assert!(x_d0(&d0).is_zero());
            let mixed = x_d0(&d1).add(&x_d1_closed(&d0));
            assert!(mixed.is_zero(), "mixed square at {word:?}/{vbar:b}: {mixed}");
            let d1d1 = x_d1_closed(&d1);
            assert!(d1d1.is_zero(), "group square at {word:?}/{vbar:b}: {d1d1}");
        }
    }

    #[test]
    fn higher_differentials_vanish() {
        let ctx = fixtures::cyclic_recipe_input().ctx;
        let mut oracle = DiffOracle::new(&ctx);
        for (word, vbar) in generators_up_to(&ctx, 3) {
            if word.len() < 2 {
                continue;
            }
            let d2 = oracle.on_generator(2, &word, vbar);
            assert!(d2.is_zero(), "order 2 at {word:?}/{vbar:b}: {d2}");
            if word.len() >= 3 {
                let d3 = oracle.on_generator(3, &word, vbar);
                assert!(d3.is_zero(), "order 3 at {word:?}/{vbar:b}");
            }
        }
    }

    #[test]
    fn bar_differential_squares_to_zero() {
        let ctx = fixtures::dihedral_context();
        let mut theta = ThetaOracle::new(&ctx);
        for (word, vbar) in generators_up_to(&ctx, 2) {
            let e = theta.on_generator(&word, vbar);
            let dd = bar_differential(&bar_differential(&e));
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn comparison_map_closed_form_matches_recursion() {
        for ctx in [fixtures::dihedral_context(), fixtures::cyclic_recipe_input().ctx] {
            let mut theta = ThetaOracle::new(&ctx);
            for (word, vbar) in generators_up_to(&ctx, 2) {
                let closed = theta_closed(&ctx, &word, vbar);
                let recursive = theta.on_generator(&word, vbar);
                assert_eq!(
                    closed, recursive,
                    "word {word:?} mask {vbar:b} in |G|={}",
                    ctx.group.n
                );
            }
        }
    }

    #[test]
    fn comparison_map_is_a_chain_map() {
        let ctx = fixtures::dihedral_context();
        let mut theta = ThetaOracle::new(&ctx);
        for (word, vbar) in generators_up_to(&ctx, 2) {
            let gen = XElement::generator(&ctx, &word, vbar);
            let lhs = bar_differential(&theta.on_generator(&word, vbar));
            let rhs = theta.apply(&x_d0(&gen).add(&x_d1_closed(&gen)));
            assert_eq!(lhs, rhs, "chain identity at {word:?}/{vbar:b}");
        }
    }
}

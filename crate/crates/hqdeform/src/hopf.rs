//! The braided Hopf algebra on generators `D1`, `D2`, `sigma^{+-1}` with
//! relations
//!
//! ```text
//! D1 D2 = D2 D1,   sigma sigma^{-1} = 1,   q sigma Di = Di sigma,
//! ```
//!
//! plus `D1^l = D2^l = 0` when `q` is a primitive `l`-th root of unity. The
//! underlying braiding is the flip, so tensor powers multiply leg by leg.
//!
//! Provides:
//! * [`HqElement`], [`HqTensor`], [`HqTensor3`]: exact elements of the
//!   algebra and its tensor square and cube, in the normal form
//!   `sigma^i D1^j D2^k` (sigma exponents range over all integers, `D`
//!   exponents truncate at `l`).
//! * [`HopfMaps`]: the coproduct, counit, and antipode given by their values
//!   on generators. Kept as plain data so checks can be pointed at corrupted
//!   structure constants.
//! * [`verify_hopf_axioms`]: coassociativity, counit, antipode, and
//!   multiplicativity, exhaustively over a bounded chunk of the normal-form
//!   basis.
//! * [`expq_series`]: the coefficients `F_i = D1^i (x) D2^i / (i)!_q` of the
//!   q-exponential `exp_q(t D1 (x) D2)`.
//! * [`verify_twisting`]: the order-by-order twisting-element conditions for
//!   that series, including the centrality condition for the flip braiding
//!   and the normalization that makes it a universal deformation formula.

use crate::scalar::{qfactorial, qbinomial, QParam, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// `(i, j, k)` stands for `sigma^i D1^j D2^k`.
pub type PbwKey = (i64, u32, u32);

fn key_one() -> PbwKey {
    (0, 0, 0)
}

/// Product of two normal-form basis elements. Moving the `D` factors of the
/// left element across `sigma^{i2}` costs `q^{i2 (j1 + k1)}`; the result dies
/// when a `D` exponent reaches the truncation order.
fn key_mul(qp: &QParam, a: PbwKey, b: PbwKey) -> Option<(PbwKey, Scalar)> {
    let (i1, j1, k1) = a;
    let (i2, j2, k2) = b;
    let j = j1 + j2;
    let k = k1 + k2;
    if let Some(l) = qp.truncation_order() {
        if j >= l || k >= l {
            return None;
        }
    }
    let exp = i2 * (j1 as i64 + k1 as i64);
    let c = qp.q.pow_i64(exp).expect("q is nonzero");
    Some(((i1 + i2, j, k), c))
}

fn key_str(key: PbwKey) -> String {
    let (i, j, k) = key;
    if (i, j, k) == (0, 0, 0) {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("s".to_string()),
        _ => parts.push(format!("s^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("D1".to_string()),
        _ => parts.push(format!("D1^{j}")),
    }
    match k {
        0 => {}
        1 => parts.push("D2".to_string()),
        _ => parts.push(format!("D2^{k}")),
    }
    parts.join("*")
}

macro_rules! tensor_like {
    ($name:ident, $key:ty, $keyfmt:expr) => {
        #[derive(Debug, Clone, PartialEq, Eq)]
        pub struct $name {
            pub qp: QParam,
            terms: BTreeMap<$key, Scalar>,
        }

        impl $name {
            pub fn zero(qp: &QParam) -> Self {
                Self { qp: qp.clone(), terms: BTreeMap::new() }
            }

            pub fn add_term(&mut self, key: $key, c: Scalar) {
                if c.is_zero() {
                    return;
                }
                match self.terms.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = e.get().clone() + c;
                        if v.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }

            pub fn term(qp: &QParam, key: $key, c: Scalar) -> Self {
                let mut out = Self::zero(qp);
                out.add_term(key, c);
                out
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn terms(&self) -> impl Iterator<Item = (&$key, &Scalar)> {
                self.terms.iter()
            }

            pub fn coeff(&self, key: &$key) -> Scalar {
                self.terms
                    .get(key)
                    .cloned()
                    .unwrap_or_else(|| self.qp.field().zero())
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.qp, other.qp, "mixed deformation parameters");
                let mut out = self.clone();
                for (k, c) in &other.terms {
                    out.add_term(k.clone(), c.clone());
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.neg())
            }

            pub fn neg(&self) -> Self {
                Self {
                    qp: self.qp.clone(),
                    terms: self
                        .terms
                        .iter()
                        .map(|(k, c)| (k.clone(), -c.clone()))
                        .collect(),
                }
            }

            pub fn scale(&self, c: &Scalar) -> Self {
                if c.is_zero() {
                    return Self::zero(&self.qp);
                }
                Self {
                    qp: self.qp.clone(),
                    terms: self
                        .terms
                        .iter()
                        .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                        .collect(),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.is_zero() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (k, c) in &self.terms {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let kf: fn(&$key) -> String = $keyfmt;
                    let ks = kf(k);
                    if c.is_one() {
                        write!(f, "{ks}")?;
                    } else if ks == "1" {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "({c})*{ks}")?;
                    }
                }
                Ok(())
            }
        }
    };
}

tensor_like!(HqElement, PbwKey, |k: &PbwKey| key_str(*k));
tensor_like!(HqTensor, (PbwKey, PbwKey), |k: &(PbwKey, PbwKey)| format!(
    "{}(x){}",
    key_str(k.0),
    key_str(k.1)
));
tensor_like!(
    HqTensor3,
    (PbwKey, PbwKey, PbwKey),
    |k: &(PbwKey, PbwKey, PbwKey)| format!(
        "{}(x){}(x){}",
        key_str(k.0),
        key_str(k.1),
        key_str(k.2)
    )
);

impl HqElement {
    pub fn one(qp: &QParam) -> HqElement {
        HqElement::term(qp, key_one(), qp.field().one())
    }

    pub fn sigma(qp: &QParam, e: i64) -> HqElement {
        HqElement::term(qp, (e, 0, 0), qp.field().one())
    }

    pub fn d1(qp: &QParam) -> HqElement {
        HqElement::term(qp, (0, 1, 0), qp.field().one())
    }

    pub fn d2(qp: &QParam) -> HqElement {
        HqElement::term(qp, (0, 0, 1), qp.field().one())
    }

    pub fn mul(&self, other: &HqElement) -> HqElement {
        assert_eq!(self.qp, other.qp, "mixed deformation parameters");
        let mut out = HqElement::zero(&self.qp);
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                if let Some((k, extra)) = key_mul(&self.qp, *ka, *kb) {
                    out.add_term(k, ca.clone() * cb.clone() * extra);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HqElement {
        let mut acc = HqElement::one(&self.qp);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl HqTensor {
    pub fn one(qp: &QParam) -> HqTensor {
        HqTensor::term(qp, (key_one(), key_one()), qp.field().one())
    }

    /// `a (x) b`.
    pub fn of(a: &HqElement, b: &HqElement) -> HqTensor {
        assert_eq!(a.qp, b.qp);
        let mut out = HqTensor::zero(&a.qp);
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                out.add_term((*ka, *kb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Leg-by-leg product (the braiding is the flip, so no twist appears).
    pub fn mul(&self, other: &HqTensor) -> HqTensor {
        assert_eq!(self.qp, other.qp);
        let mut out = HqTensor::zero(&self.qp);
        for (&(a1, a2), ca) in self.terms() {
            for (&(b1, b2), cb) in other.terms() {
                let Some((k1, e1)) = key_mul(&self.qp, a1, b1) else { continue };
                let Some((k2, e2)) = key_mul(&self.qp, a2, b2) else { continue };
                out.add_term((k1, k2), ca.clone() * cb.clone() * e1 * e2);
            }
        }
        out
    }

    /// Multiplication `H (x) H -> H`.
    pub fn collapse(&self) -> HqElement {
        let mut out = HqElement::zero(&self.qp);
        for (&(a, b), c) in self.terms() {
            if let Some((k, e)) = key_mul(&self.qp, a, b) {
                out.add_term(k, c.clone() * e);
            }
        }
        out
    }
}

impl HqTensor3 {
    pub fn of(t: &HqTensor, right: &HqElement) -> HqTensor3 {
        let mut out = HqTensor3::zero(&t.qp);
        for (&(a, b), c) in t.terms() {
            for (kc, cc) in right.terms() {
                out.add_term((a, b, *kc), c.clone() * cc.clone());
            }
        }
        out
    }

    pub fn of_left(left: &HqElement, t: &HqTensor) -> HqTensor3 {
        let mut out = HqTensor3::zero(&t.qp);
        for (ka, ca) in left.terms() {
            for (&(b, c), cc) in t.terms() {
                out.add_term((*ka, b, c), ca.clone() * cc.clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &HqTensor3) -> HqTensor3 {
        assert_eq!(self.qp, other.qp);
        let mut out = HqTensor3::zero(&self.qp);
        for (&(a1, a2, a3), ca) in self.terms() {
            for (&(b1, b2, b3), cb) in other.terms() {
                let Some((k1, e1)) = key_mul(&self.qp, a1, b1) else { continue };
                let Some((k2, e2)) = key_mul(&self.qp, a2, b2) else { continue };
                let Some((k3, e3)) = key_mul(&self.qp, a3, b3) else { continue };
                out.add_term((k1, k2, k3), ca.clone() * cb.clone() * e1 * e2 * e3);
            }
        }
        out
    }
}

/// Coproduct, counit, and antipode, recorded by their values on generators
/// and extended to the normal-form basis multiplicatively (the antipode
/// anti-multiplicatively). Plain data: tests corrupt single entries and watch
/// the axiom checks pinpoint them.
#[derive(Debug, Clone)]
pub struct HopfMaps {
    pub qp: QParam,
    pub delta_sigma: HqTensor,
    pub delta_sigma_inv: HqTensor,
    pub delta_d1: HqTensor,
    pub delta_d2: HqTensor,
    pub eps_sigma: Scalar,
    pub eps_d1: Scalar,
    pub eps_d2: Scalar,
    pub s_sigma: HqElement,
    pub s_sigma_inv: HqElement,
    pub s_d1: HqElement,
    pub s_d2: HqElement,
}

impl HopfMaps {
    /// The structure maps:
    /// `Delta(D1) = D1 (x) sigma + 1 (x) D1`, `Delta(D2) = D2 (x) 1 + sigma (x) D2`,
    /// `Delta(sigma) = sigma (x) sigma`, `eps(Di) = 0`, `eps(sigma) = 1`,
    /// `S(D1) = -D1 sigma^{-1}`, `S(D2) = -sigma^{-1} D2`, `S(sigma) = sigma^{-1}`.
    pub fn standard(qp: &QParam) -> HopfMaps {
        let one = qp.field().one();
        let s = |e: i64| HqElement::sigma(qp, e);
        let mut delta_d1 = HqTensor::of(&HqElement::d1(qp), &s(1));
        delta_d1 = delta_d1.add(&HqTensor::of(&HqElement::one(qp), &HqElement::d1(qp)));
        let mut delta_d2 = HqTensor::of(&HqElement::d2(qp), &HqElement::one(qp));
        delta_d2 = delta_d2.add(&HqTensor::of(&s(1), &HqElement::d2(qp)));
        // -D1 sigma^{-1} = -q^{-1} sigma^{-1} D1 in normal form
        let qinv = qp.q.inv().expect("q nonzero");
        let s_d1 = HqElement::term(qp, (-1, 1, 0), -qinv);
        let s_d2 = HqElement::term(qp, (-1, 0, 1), -one.clone());
        HopfMaps {
            qp: qp.clone(),
            delta_sigma: HqTensor::of(&s(1), &s(1)),
            delta_sigma_inv: HqTensor::of(&s(-1), &s(-1)),
            delta_d1,
            delta_d2,
            eps_sigma: one.clone(),
            eps_d1: qp.field().zero(),
            eps_d2: qp.field().zero(),
            s_sigma: s(-1),
            s_sigma_inv: s(1),
            s_d1,
            s_d2,
        }
    }

    /// Coproduct on a basis element, then extended linearly.
    pub fn coproduct(&self, x: &HqElement) -> HqTensor {
        let mut out = HqTensor::zero(&self.qp);
        for (&(i, j, k), c) in x.terms() {
            let ds = if i >= 0 { &self.delta_sigma } else { &self.delta_sigma_inv };
            let mut acc = HqTensor::one(&self.qp);
            for _ in 0..i.unsigned_abs() {
                acc = acc.mul(ds);
            }
            for _ in 0..j {
                acc = acc.mul(&self.delta_d1);
            }
            for _ in 0..k {
                acc = acc.mul(&self.delta_d2);
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    pub fn counit(&self, x: &HqElement) -> Scalar {
        let mut out = self.qp.field().zero();
        for (&(i, j, k), c) in x.terms() {
            let mut v = self.eps_sigma.pow_i64(i).expect("eps(sigma) nonzero");
            for _ in 0..j {
                v *= self.eps_d1.clone();
            }
            for _ in 0..k {
                v *= self.eps_d2.clone();
            }
            out += c.clone() * v;
        }
        out
    }

    /// Antipode on a basis element: anti-multiplicative, so the generator
    /// images compose in reverse order.
    pub fn antipode(&self, x: &HqElement) -> HqElement {
        let mut out = HqElement::zero(&self.qp);
        for (&(i, j, k), c) in x.terms() {
            let mut acc = HqElement::one(&self.qp);
            for _ in 0..k {
                acc = acc.mul(&self.s_d2);
            }
            for _ in 0..j {
                acc = acc.mul(&self.s_d1);
            }
            let ss = if i >= 0 { &self.s_sigma } else { &self.s_sigma_inv };
            for _ in 0..i.unsigned_abs() {
                acc = acc.mul(ss);
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// `(Delta (x) id)` applied to a tensor.
    pub fn coproduct_left(&self, t: &HqTensor) -> HqTensor3 {
        let mut out = HqTensor3::zero(&self.qp);
        for (&(a, b), c) in t.terms() {
            let da = self.coproduct(&HqElement::term(&self.qp, a, self.qp.field().one()));
            let right = HqElement::term(&self.qp, b, c.clone());
            out = out.add(&HqTensor3::of(&da, &right));
        }
        out
    }

    /// `(id (x) Delta)` applied to a tensor.
    pub fn coproduct_right(&self, t: &HqTensor) -> HqTensor3 {
        let mut out = HqTensor3::zero(&self.qp);
        for (&(a, b), c) in t.terms() {
            let db = self.coproduct(&HqElement::term(&self.qp, b, c.clone()));
            let left = HqElement::term(&self.qp, a, self.qp.field().one());
            out = out.add(&HqTensor3::of_left(&left, &db));
        }
        out
    }
}

/// Normal-form basis elements with `|i| <= bound` and `j, k <= bound`,
/// clipped below the truncation order.
pub fn pbw_basis(qp: &QParam, bound: u32) -> Vec<PbwKey> {
    let dmax = match qp.truncation_order() {
        Some(l) => bound.min(l - 1),
        None => bound,
    };
    let mut keys = Vec::new();
    for i in -(bound as i64)..=(bound as i64) {
        for j in 0..=dmax {
            for k in 0..=dmax {
                keys.push((i, j, k));
            }
        }
    }
    keys
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive axiom check over the bounded basis: generator relations are
/// respected by all three maps, the coproduct is coassociative and counital,
/// the antipode law holds, and on all basis pairs the coproduct and counit
/// are multiplicative while the antipode is anti-multiplicative.
pub fn verify_hopf_axioms(maps: &HopfMaps, bound: u32) -> CheckReport {
    let qp = &maps.qp;
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let one_el = HqElement::one(qp);
    let basis = pbw_basis(qp, bound);

    // images of generators must satisfy the defining relations
    let q = qp.q.clone();
    {
        let d1 = &maps.delta_d1;
        let d2 = &maps.delta_d2;
        let sg = &maps.delta_sigma;
        let sgi = &maps.delta_sigma_inv;
        checked += 4;
        if d1.mul(d2) != d2.mul(d1) {
            failures.push("coproduct images of D1 and D2 do not commute".to_string());
        }
        if sg.mul(sgi) != HqTensor::one(qp) {
            failures.push(
                "coproduct images of sigma and sigma^{-1} are not inverse".to_string(),
            );
        }
        for (name, di) in [("D1", d1), ("D2", d2)] {
            if sg.mul(di).scale(&q) != di.mul(sg) {
                failures.push(format!(
                    "coproduct images break q sigma {name} = {name} sigma"
                ));
            }
        }
        let sd1 = &maps.s_d1;
        let sd2 = &maps.s_d2;
        let ss = &maps.s_sigma;
        let ssi = &maps.s_sigma_inv;
        checked += 4;
        if sd1.mul(sd2) != sd2.mul(sd1) {
            failures.push("antipode images of D1 and D2 do not commute".to_string());
        }
        if ss.mul(ssi) != one_el {
            failures
                .push("antipode images of sigma and sigma^{-1} are not inverse".to_string());
        }
        // the relation reverses under an anti-map: q S(Di) S(sigma) = S(sigma) S(Di)
        for (name, sdi) in [("D1", sd1), ("D2", sd2)] {
            if sdi.mul(ss).scale(&q) != ss.mul(sdi) {
                failures.push(format!(
                    "antipode images break the sigma relation for {name}"
                ));
            }
        }
        if let Some(l) = qp.truncation_order() {
            checked += 2;
            let mut p1 = HqTensor::one(qp);
            let mut p2 = HqTensor::one(qp);
            for _ in 0..l {
                p1 = p1.mul(d1);
                p2 = p2.mul(d2);
            }
            if !p1.is_zero() {
                failures.push(format!("coproduct image of D1 is not nilpotent of order {l}"));
            }
            if !p2.is_zero() {
                failures.push(format!("coproduct image of D2 is not nilpotent of order {l}"));
            }
        }
    }

    for &key in &basis {
        let x = HqElement::term(qp, key, qp.field().one());
        let dx = maps.coproduct(&x);
        checked += 1;
        if maps.coproduct_left(&dx) != maps.coproduct_right(&dx) {
            failures.push(format!("coassociativity fails on {}", key_str(key)));
        }
        // counit law: contract either leg of Delta(x) with eps
        checked += 1;
        let mut left = HqElement::zero(qp);
        let mut right = HqElement::zero(qp);
        for (&(a, b), c) in dx.terms() {
            let ea = maps.counit(&HqElement::term(qp, a, qp.field().one()));
            left.add_term(b, c.clone() * ea);
            let eb = maps.counit(&HqElement::term(qp, b, qp.field().one()));
            right.add_term(a, c.clone() * eb);
        }
        if left != x {
            failures.push(format!("left counit law fails on {}", key_str(key)));
        }
        if right != x {
            failures.push(format!("right counit law fails on {}", key_str(key)));
        }
        // antipode law: mu (S (x) id) Delta = eta eps = mu (id (x) S) Delta
        checked += 1;
        let target = one_el.scale(&maps.counit(&x));
        let mut s_left = HqElement::zero(qp);
        let mut s_right = HqElement::zero(qp);
        for (&(a, b), c) in dx.terms() {
            let sa = maps.antipode(&HqElement::term(qp, a, c.clone()));
            s_left = s_left.add(&sa.mul(&HqElement::term(qp, b, qp.field().one())));
            let sb = maps.antipode(&HqElement::term(qp, b, qp.field().one()));
            s_right = s_right
                .add(&HqElement::term(qp, a, c.clone()).mul(&sb));
        }
        if s_left != target {
            failures.push(format!("left antipode law fails on {}", key_str(key)));
        }
        if s_right != target {
            failures.push(format!("right antipode law fails on {}", key_str(key)));
        }
    }

    // multiplicativity on basis pairs
    for &ka in &basis {
        let a = HqElement::term(qp, ka, qp.field().one());
        let da = maps.coproduct(&a);
        let sa = maps.antipode(&a);
        let ea = maps.counit(&a);
        for &kb in &basis {
            let b = HqElement::term(qp, kb, qp.field().one());
            let ab = a.mul(&b);
            checked += 1;
            if maps.coproduct(&ab) != da.mul(&maps.coproduct(&b)) {
                failures.push(format!(
                    "coproduct not multiplicative on {} and {}",
                    key_str(ka),
                    key_str(kb)
                ));
            }
            if maps.counit(&ab) != ea.clone() * maps.counit(&b) {
                failures.push(format!(
                    "counit not multiplicative on {} and {}",
                    key_str(ka),
                    key_str(kb)
                ));
            }
            if maps.antipode(&ab) != maps.antipode(&b).mul(&sa) {
                failures.push(format!(
                    "antipode not anti-multiplicative on {} and {}",
                    key_str(ka),
                    key_str(kb)
                ));
            }
        }
    }

    CheckReport { checked, failures }
}

/// Coefficients `F_0 .. F_order` of `exp_q(t D1 (x) D2)`:
/// `F_i = D1^i (x) D2^i / (i)!_q`. At a primitive `l`-th root of unity the
/// series stops: `F_i = 0` for `i >= l`.
pub fn expq_series(qp: &QParam, order: u32) -> Result<Vec<HqTensor>, crate::scalar::ScalarError> {
    let mut out = Vec::with_capacity(order as usize + 1);
    for i in 0..=order {
        if let Some(l) = qp.truncation_order() {
            if i >= l {
                out.push(HqTensor::zero(qp));
                continue;
            }
        }
        let fact = qfactorial(i, &qp.q);
        let coeff = fact.inv()?;
        out.push(HqTensor::term(qp, ((0, i, 0), (0, 0, i)), coeff));
    }
    Ok(out)
}

/// Order-by-order twisting-element conditions for a series
/// `F = sum_i F_i t^i`:
///
/// 1. counit normalization: contracting either leg of `F_i` with the counit
///    gives `1` for `i = 0` and `0` for `i > 0`;
/// 2. the cocycle condition
///    `sum_{i+j=n} (Delta (x) id)(F_i) (F_j (x) 1)
///       = sum_{i+j=n} (id (x) Delta)(F_i) (1 (x) F_j)` for every `n <= order`;
/// 3. centrality under the braiding: with the flip braiding,
///    `(c (x) H)(H (x) c)(F_n (x) h) = h (x) F_n` for basis elements `h`;
/// 4. the normalization `F_0 = 1 (x) 1` that upgrades a twisting series to a
///    universal deformation formula.
pub fn verify_twisting(
    maps: &HopfMaps,
    fs: &[HqTensor],
    order: u32,
    h_bound: u32,
) -> CheckReport {
    let qp = &maps.qp;
    let mut failures = Vec::new();
    let mut checked = 0usize;
    let order = order.min(fs.len() as u32 - 1);

    for (i, fi) in fs.iter().enumerate().take(order as usize + 1) {
        checked += 1;
        let mut left = HqElement::zero(qp);
        let mut right = HqElement::zero(qp);
        for (&(a, b), c) in fi.terms() {
            let ea = maps.counit(&HqElement::term(qp, a, qp.field().one()));
            left.add_term(b, c.clone() * ea);
            let eb = maps.counit(&HqElement::term(qp, b, qp.field().one()));
            right.add_term(a, c.clone() * eb);
        }
        let expected = if i == 0 {
            HqElement::one(qp)
        } else {
            HqElement::zero(qp)
        };
        if left != expected || right != expected {
            failures.push(format!("counit normalization fails at order {i}"));
        }
    }

    for n in 0..=order as usize {
        checked += 1;
        let mut lhs = HqTensor3::zero(qp);
        let mut rhs = HqTensor3::zero(qp);
        for i in 0..=n {
            let j = n - i;
            let fi = &fs[i];
            let fj = &fs[j];
            let fj_left = HqTensor3::of(fj, &HqElement::one(qp));
            lhs = lhs.add(&maps.coproduct_left(fi).mul(&fj_left));
            let fj_right = HqTensor3::of_left(&HqElement::one(qp), fj);
            rhs = rhs.add(&maps.coproduct_right(fi).mul(&fj_right));
        }
        if lhs != rhs {
            failures.push(format!("cocycle condition fails at order {n}"));
        }
    }

    // centrality for the flip braiding, checked literally
    let basis = pbw_basis(qp, h_bound);
    for (n, fn_) in fs.iter().enumerate().take(order as usize + 1) {
        for &h in &basis {
            checked += 1;
            let mut moved = HqTensor3::zero(qp);
            for (&(a, b), c) in fn_.terms() {
                // (H (x) c): a (x) b (x) h -> a (x) h (x) b
                // (c (x) H): a (x) h (x) b -> h (x) a (x) b
                moved.add_term((h, a, b), c.clone());
            }
            let direct =
                HqTensor3::of_left(&HqElement::term(qp, h, qp.field().one()), fn_);
            if moved != direct {
                failures.push(format!(
                    "centrality fails for order {n} against {}",
                    key_str(h)
                ));
            }
        }
    }

    checked += 1;
    if fs[0] != HqTensor::one(qp) {
        failures.push("F_0 is not 1 (x) 1".to_string());
    }

    CheckReport { checked, failures }
}

/// The coproduct power law used throughout:
/// `Delta(D1^j) = sum_m C(j,m)_q D1^m (x) sigma^m D1^{j-m}`.
/// Exposed for tests that pin the closed form against the recursive product.
pub fn coproduct_d1_power_closed(qp: &QParam, j: u32) -> HqTensor {
    let mut out = HqTensor::zero(qp);
    for m in 0..=j {
        if let Some(l) = qp.truncation_order() {
            if m >= l || (j - m) >= l {
                continue;
            }
        }
        out.add_term(
            ((0, m, 0), (m as i64, j - m, 0)),
            qbinomial(j, m, &qp.q),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn qp_q(n: i64) -> QParam {
        QParam::new(FieldSpec::Q.integer(n)).unwrap()
    }

    fn qp_f7(n: i64) -> QParam {
        QParam::new(FieldSpec::Fp(7).integer(n)).unwrap()
    }

    #[test]
    fn product_respects_the_sigma_relation() {
        // D1 sigma = q sigma D1 at q = 3
        let qp = qp_q(3);
        let lhs = HqElement::d1(&qp).mul(&HqElement::sigma(&qp, 1));
        let rhs = HqElement::sigma(&qp, 1)
            .mul(&HqElement::d1(&qp))
            .scale(&FieldSpec::Q.integer(3));
        assert_eq!(lhs, rhs);
        // sigma^{-1} undoes sigma
        let prod = HqElement::sigma(&qp, -1).mul(&HqElement::sigma(&qp, 1));
        assert_eq!(prod, HqElement::one(&qp));
    }

    #[test]
    fn product_is_associative_on_a_basis_sample() {
        for qp in [qp_q(3), qp_f7(2), qp_q(-1)] {
            let basis = pbw_basis(&qp, 2);
            let pick =
                |i: usize| HqElement::term(&qp, basis[i % basis.len()], qp.field().one());
            for step in 0..40 {
                let a = pick(step * 7 + 1);
                let b = pick(step * 13 + 2);
                let c = pick(step * 29 + 3);
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }
        }
    }

    #[test]
    fn truncation_kills_high_powers() {
        let qp = qp_q(-1); // primitive square root: D^2 = 0
        let d1 = HqElement::d1(&qp);
        assert!(d1.mul(&d1).is_zero());
        let qp = qp_f7(2); // order 3
        let d2 = HqElement::d2(&qp);
        assert!(!d2.mul(&d2).is_zero());
        assert!(d2.pow(3).is_zero());
    }

    #[test]
    fn antipode_normal_forms() {
        let qp = qp_q(3);
        let maps = HopfMaps::standard(&qp);
        // S(D1) = -D1 sigma^{-1} = -(1/3) sigma^{-1} D1
        let expected = HqElement::term(
            &qp,
            (-1, 1, 0),
            -FieldSpec::Q.parse("1/3").unwrap(),
        );
        assert_eq!(maps.s_d1, expected);
        // S(sigma^2) = sigma^{-2}
        let s2 = maps.antipode(&HqElement::sigma(&qp, 2));
        assert_eq!(s2, HqElement::sigma(&qp, -2));
    }

    #[test]
    fn coproduct_power_closed_form_matches_products() {
        for qp in [qp_q(1), qp_q(-1), qp_q(3), qp_f7(2)] {
            let maps = HopfMaps::standard(&qp);
            for j in 0..=4u32 {
                let key = match qp.truncation_order() {
                    Some(l) if j >= l => continue,
                    _ => (0i64, j, 0u32),
                };
                let direct = maps.coproduct(&HqElement::term(&qp, key, qp.field().one()));
                assert_eq!(direct, coproduct_d1_power_closed(&qp, j), "j = {j}");
            }
        }
    }

    #[test]
    fn hopf_axioms_hold_for_standard_maps() {
        for qp in [qp_q(1), qp_q(-1), qp_f7(2)] {
            let maps = HopfMaps::standard(&qp);
            let report = verify_hopf_axioms(&maps, 2);
            assert!(report.passed(), "failures: {:?}", report.failures);
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn corrupted_antipode_is_detected() {
        let qp = qp_q(1);
        let mut maps = HopfMaps::standard(&qp);
        maps.s_d1 = maps.s_d1.neg(); // +D1 sigma^{-1} instead of -D1 sigma^{-1}
        let report = verify_hopf_axioms(&maps, 2);
        assert!(report
            .failures
            .iter()
            .any(|f| f.contains("antipode law fails on D1")));
    }

    #[test]
    fn corrupted_coproduct_is_detected() {
        let qp = qp_f7(2);
        let mut maps = HopfMaps::standard(&qp);
        // drop the 1 (x) D1 summand
        maps.delta_d1 = HqTensor::of(&HqElement::d1(&qp), &HqElement::sigma(&qp, 1));
        let report = verify_hopf_axioms(&maps, 2);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.contains("counit")));
    }

    #[test]
    fn expq_truncates_at_roots_of_unity() {
        let qp = qp_f7(2); // order 3
        let fs = expq_series(&qp, 6).unwrap();
        assert_eq!(fs.len(), 7);
        assert!(!fs[2].is_zero());
        for f in &fs[3..] {
            assert!(f.is_zero());
        }
        // F_2 = D1^2 (x) D2^2 / (2)!_q with (2)!_q = 1 + q = 3
        let c = fs[2].coeff(&((0, 2, 0), (0, 0, 2)));
        assert_eq!(c, FieldSpec::Fp(7).integer(3).inv().unwrap());
    }

    #[test]
    fn twisting_conditions_hold_for_the_series() {
        for (qp, order) in [(qp_q(1), 6u32), (qp_q(-1), 6), (qp_f7(2), 6)] {
            let maps = HopfMaps::standard(&qp);
            let fs = expq_series(&qp, order).unwrap();
            let report = verify_twisting(&maps, &fs, order, 1);
            assert!(report.passed(), "q case failed: {:?}", report.failures);
        }
    }

    #[test]
    fn corrupted_series_coefficient_is_detected() {
        let qp = qp_q(1);
        let mut fs = expq_series(&qp, 4).unwrap();
        fs[2] = fs[2].scale(&FieldSpec::Q.integer(5));
        let maps = HopfMaps::standard(&qp);
        let report = verify_twisting(&maps, &fs, 4, 1);
        assert!(report
            .failures
            .iter()
            .any(|f| f.contains("cocycle condition fails at order 2")));
    }

    #[test]
    fn nonunit_f0_flagged_as_non_udf() {
        let qp = qp_q(1);
        let mut fs = expq_series(&qp, 2).unwrap();
        fs[0] = fs[0].scale(&FieldSpec::Q.integer(2));
        let maps = HopfMaps::standard(&qp);
        let report = verify_twisting(&maps, &fs, 2, 0);
        assert!(report.failures.iter().any(|f| f.contains("F_0")));
    }
}

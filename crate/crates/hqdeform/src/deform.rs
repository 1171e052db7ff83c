//! The deformed product on a crossed product carrying a structure.
//!
//! The product is an exact polynomial in a central formal parameter `t`:
//!
//! ```text
//! a * b = sum_i t^i (1/(i)!_q) delta_1^i(alpha^{-i}(a)) delta_2^i(b)
//! ```
//!
//! where the sum stops below the multiplicative order of `q` when that order
//! is finite (the q-factorial vanishes there and the corresponding twist
//! component is zero). The `t^0` coefficient is the original product and the
//! `t^1` coefficient is the infinitesimal [`infinitesimal`].
//!
//! Provides [`TSeries`] (polynomials in `t` with algebra-element
//! coefficients), [`deformed_product`], [`series_product`] for iterated
//! products, and randomized [`check_associativity`] / [`check_unit`]
//! drivers used by the verification reports.

use crate::crossed::{CrossedElement, Ctx};
use crate::poly::Poly;
use crate::scalar::qint;
use crate::structure::{alpha_apply, delta_apply, HqStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("the series did not terminate within {0} orders; the structure data is inconsistent")]
    NonTerminating(u32),
}

/// A polynomial in the deformation parameter with algebra coefficients.
/// `coeffs[i]` is the coefficient of `t^i`; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct TSeries {
    pub coeffs: Vec<CrossedElement>,
}

impl TSeries {
    pub fn zero() -> TSeries {
        TSeries { coeffs: Vec::new() }
    }

    pub fn constant(a: CrossedElement) -> TSeries {
        let mut s = TSeries { coeffs: vec![a] };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `t`, or `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^i`; zero when `i` exceeds the degree. Needs a
    /// context to make the zero element.
    pub fn coeff(&self, ctx: &Ctx, i: usize) -> CrossedElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CrossedElement::zero(ctx))
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(c);
        }
        let mut s = TSeries { coeffs };
        s.trim();
        s
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        self.add(&TSeries {
            coeffs: other.coeffs.iter().map(|c| c.neg()).collect(),
        })
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "t*({c})")?,
                _ => write!(f, "t^{i}*({c})")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The infinitesimal of the deformation:
/// `Phi(a, b) = delta_1(alpha^{-1}(a)) delta_2(b)`.
pub fn infinitesimal(st: &HqStructure, a: &CrossedElement, b: &CrossedElement) -> CrossedElement {
    delta_apply(st, 1, &alpha_apply(st, -1, a)).mul(&delta_apply(st, 2, b))
}

/// The Hochschild cocycle defect of the infinitesimal on a triple:
/// `a Phi(b,c) - Phi(ab,c) + Phi(a,bc) - Phi(a,b) c`, which vanishes exactly
/// when the first-order term of the deformed product is associative.
pub fn infinitesimal_cocycle_defect(
    st: &HqStructure,
    a: &CrossedElement,
    b: &CrossedElement,
    c: &CrossedElement,
) -> CrossedElement {
    a.mul(&infinitesimal(st, b, c))
        .sub(&infinitesimal(st, &a.mul(b), c))
        .add(&infinitesimal(st, a, &b.mul(c)))
        .sub(&infinitesimal(st, a, b).mul(c))
}

/// The deformed product of two algebra elements as an exact series in `t`.
pub fn deformed_product(
    st: &HqStructure,
    a: &CrossedElement,
    b: &CrossedElement,
) -> Result<TSeries, DeformError> {
    let ctx = &st.ctx;
    let field = ctx.field;
    // each order applies delta_1 once more to a and delta_2 once more to b;
    // for consistent data delta_2 strictly lowers the x_2 degree of b, so
    // the series is finite even without a root-of-unity cutoff
    let cap = b.max_degree() + 2;
    let mut coeffs = Vec::new();
    let mut d1 = a.clone(); // delta_1^i(a)
    let mut d2 = b.clone(); // delta_2^i(b)
    let mut qfact = field.one(); // (i)!_q
    let mut i: u32 = 0;
    loop {
        if let Some(l) = st.qp.truncation_order() {
            if i >= l {
                break;
            }
        }
        if i > 0 {
            qfact *= qint(i, &st.qp.q);
        }
        let inv = qfact.inv().expect("q-factorial nonzero below the cutoff");
        let term = alpha_apply(st, -(i as i64), &d1).mul(&d2).scale(&inv);
        coeffs.push(term);
        // advance to the next order
        d1 = delta_apply(st, 1, &d1);
        d2 = delta_apply(st, 2, &d2);
        if d1.is_zero() || d2.is_zero() {
            break;
        }
        i += 1;
        if i > cap {
            return Err(DeformError::NonTerminating(cap));
        }
    }
    let mut s = TSeries { coeffs };
    s.trim();
    Ok(s)
}

/// Deformed product of two series, extending [`deformed_product`] bilinearly
/// with `t` central.
pub fn series_product(
    st: &HqStructure,
    a: &TSeries,
    b: &TSeries,
) -> Result<TSeries, DeformError> {
    let mut out = TSeries::zero();
    for (i, ca) in a.coeffs.iter().enumerate() {
        for (j, cb) in b.coeffs.iter().enumerate() {
            if ca.is_zero() || cb.is_zero() {
                continue;
            }
            let prod = deformed_product(st, ca, cb)?;
            let mut shifted = Vec::with_capacity(i + j + prod.coeffs.len());
            for _ in 0..i + j {
                shifted.push(CrossedElement::zero(&st.ctx));
            }
            shifted.extend(prod.coeffs);
            out = out.add(&TSeries { coeffs: shifted });
        }
    }
    Ok(out)
}

/// Draws a random element with at most `terms` components, polynomial degree
/// at most `max_degree`, and small integer coefficients.
pub fn sample_element(
    ctx: &Ctx,
    rng: &mut ChaCha8Rng,
    max_degree: u16,
    terms: usize,
) -> CrossedElement {
    let n = ctx.n_vars;
    let mut out = CrossedElement::zero(ctx);
    for _ in 0..terms.max(1) {
        let g = rng.gen_range(0..ctx.group.n);
        let mut exps = vec![0u16; n];
        let mut budget = max_degree;
        for e in exps.iter_mut() {
            let step = rng.gen_range(0..=budget);
            *e = step;
            budget -= step;
        }
        let c = ctx.field.integer(rng.gen_range(-3..=3i64));
        out.add_component(g, Poly::monomial(n, &exps, c));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocReport {
    pub triples_checked: usize,
    pub failures: Vec<String>,
}

impl AssocReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `(a*b)*c = a*(b*c)` on seeded random triples of bounded degree.
pub fn check_associativity(
    st: &HqStructure,
    triples: usize,
    max_degree: u16,
    seed: u64,
) -> Result<AssocReport, DeformError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..triples {
        let a = sample_element(&st.ctx, &mut rng, max_degree, 2);
        let b = sample_element(&st.ctx, &mut rng, max_degree, 2);
        let c = sample_element(&st.ctx, &mut rng, max_degree, 2);
        let ab = deformed_product(st, &a, &b)?;
        let bc = deformed_product(st, &b, &c)?;
        let lhs = series_product(st, &ab, &TSeries::constant(c.clone()))?;
        let rhs = series_product(st, &TSeries::constant(a.clone()), &bc)?;
        if lhs != rhs {
            failures.push(format!(
                "triple {k}: ({a}) * ({b}) * ({c}) associates differently"
            ));
        }
    }
    Ok(AssocReport { triples_checked: triples, failures })
}

/// Checks that the identity of the algebra stays a unit for the deformed
/// product on seeded random elements.
pub fn check_unit(
    st: &HqStructure,
    samples: usize,
    max_degree: u16,
    seed: u64,
) -> Result<AssocReport, DeformError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = CrossedElement::one(&st.ctx);
    let mut failures = Vec::new();
    for k in 0..samples {
        let a = sample_element(&st.ctx, &mut rng, max_degree, 2);
        let left = deformed_product(st, &one, &a)?;
        let right = deformed_product(st, &a, &one)?;
        let expect = TSeries::constant(a.clone());
        if left != expect || right != expect {
            failures.push(format!("sample {k}: unit law fails on {a}"));
        }
    }
    Ok(AssocReport { triples_checked: samples, failures })
}

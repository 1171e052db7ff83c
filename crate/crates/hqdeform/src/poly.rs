//! Sparse multivariate polynomials over an exact field, linear endomorphisms
//! of the variable span, and group representations acting on both.
//!
//! Provides:
//! * [`Monomial`]: an exponent vector ordered by graded lexicographic order,
//!   which is the canonical term order everywhere in this crate.
//! * [`Poly`]: a sparse polynomial in `x1..xn`. No zero coefficient is ever
//!   stored, so structural equality is polynomial equality.
//! * [`LinearEndo`]: a k-linear map of the variable span, extended to the
//!   whole polynomial ring as an algebra endomorphism by substitution.
//! * [`Representation`]: one invertible matrix per group element, validated
//!   as a homomorphism, acting on polynomials through substitution.

use crate::group::Group;
use crate::linalg::{self, Matrix};
use crate::scalar::{FieldSpec, Scalar};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("linear map is singular")]
    Singular,
    #[error("not a representation: {0}")]
    BadRepresentation(String),
}

/// Exponent vector of one monomial. Ordering is graded lex: compare total
/// degree first, then exponents left to right with `x1` heaviest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(n_vars: usize) -> Monomial {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Monomial {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0[i]
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial. Terms map monomials to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub n_vars: usize,
    pub field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(n_vars: usize, field: FieldSpec) -> Poly {
        Poly { n_vars, field, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Scalar) -> Poly {
        let mut p = Poly::zero(n_vars, c.field());
        p.add_term(Monomial::one(n_vars), c);
        p
    }

    pub fn one(n_vars: usize, field: FieldSpec) -> Poly {
        Poly::constant(n_vars, field.one())
    }

    pub fn var(n_vars: usize, i: usize, field: FieldSpec) -> Poly {
        let mut p = Poly::zero(n_vars, field);
        p.add_term(Monomial::var(n_vars, i), field.one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        assert_eq!(m.0.len(), self.n_vars, "monomial arity mismatch");
        match self.terms.entry(m) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_coeff(&self) -> Scalar {
        self.coeff(&Monomial::one(self.n_vars))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars, self.field);
        }
        Poly {
            n_vars: self.n_vars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = Poly::zero(self.n_vars, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.n_vars, self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Algebra map determined by `x_i -> images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.n_vars, "one image per variable");
        let out_vars = images.first().map_or(self.n_vars, |p| p.n_vars);
        let mut out = Poly::zero(out_vars, self.field);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e as u32));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Builds `c * x^e` directly.
    pub fn monomial(n_vars: usize, exps: &[u16], c: Scalar) -> Poly {
        let mut p = Poly::zero(n_vars, c.field());
        p.add_term(Monomial(exps.to_vec()), c);
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // descending graded lex, leading term first
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let coeff_str = match c {
                Scalar::Fp { v, .. } => v.to_string(),
                Scalar::Q(_) => c.to_string(),
            };
            let (sign, mag) = match coeff_str.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff_str),
            };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A k-linear endomorphism of the variable span. `mat[i][j]` is the
/// coefficient of `x_{i+1}` in the image of `x_{j+1}` (columns are images).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEndo {
    pub n: usize,
    pub field: FieldSpec,
    pub mat: Vec<Vec<Scalar>>,
}

impl LinearEndo {
    pub fn identity(n: usize, field: FieldSpec) -> LinearEndo {
        let mat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        LinearEndo { n, field, mat }
    }

    pub fn from_matrix(field: FieldSpec, mat: Vec<Vec<Scalar>>) -> LinearEndo {
        let n = mat.len();
        assert!(mat.iter().all(|r| r.len() == n), "matrix must be square");
        LinearEndo { n, field, mat }
    }

    pub fn is_identity(&self) -> bool {
        self == &LinearEndo::identity(self.n, self.field)
    }

    /// Image of the variable `x_{j+1}` as a linear polynomial.
    pub fn apply_var(&self, j: usize) -> Poly {
        let mut p = Poly::zero(self.n, self.field);
        for i in 0..self.n {
            p.add_term(Monomial::var(self.n, i), self.mat[i][j].clone());
        }
        p
    }

    /// The induced algebra endomorphism of the polynomial ring.
    pub fn apply_poly(&self, p: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.n).map(|j| self.apply_var(j)).collect();
        p.substitute(&images)
    }

    /// `self` after `other`: `(self.compose(other))(v) = self(other(v))`.
    pub fn compose(&self, other: &LinearEndo) -> LinearEndo {
        assert_eq!(self.n, other.n);
        let mut mat = vec![vec![self.field.zero(); self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = self.field.zero();
                for k in 0..self.n {
                    if !self.mat[i][k].is_zero() && !other.mat[k][j].is_zero() {
                        acc += self.mat[i][k].clone() * other.mat[k][j].clone();
                    }
                }
                mat[i][j] = acc;
            }
        }
        LinearEndo { n: self.n, field: self.field, mat }
    }

    fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zero(self.n, self.n, self.field);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.mat[i][j].clone());
            }
        }
        m
    }

    pub fn determinant(&self) -> Scalar {
        linalg::determinant(&self.to_matrix())
    }

    pub fn inverse(&self) -> Result<LinearEndo, PolyError> {
        let inv = linalg::invert(&self.to_matrix()).ok_or(PolyError::Singular)?;
        let mat = (0..self.n)
            .map(|i| (0..self.n).map(|j| inv.get(i, j).clone()).collect())
            .collect();
        Ok(LinearEndo { n: self.n, field: self.field, mat })
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow_i64(&self, e: i64) -> Result<LinearEndo, PolyError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = LinearEndo::identity(self.n, self.field);
        for _ in 0..e.unsigned_abs() {
            acc = base.compose(&acc);
        }
        Ok(acc)
    }
}

/// A linear action of a finite group on the variable span: one matrix per
/// element, indexed like the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub mats: Vec<LinearEndo>,
}

impl Representation {
    pub fn endo(&self, g: usize) -> &LinearEndo {
        &self.mats[g]
    }

    /// `^g P`.
    pub fn act(&self, g: usize, p: &Poly) -> Poly {
        self.mats[g].apply_poly(p)
    }

    /// `^g x_j` as a polynomial.
    pub fn act_var(&self, g: usize, j: usize) -> Poly {
        self.mats[g].apply_var(j)
    }

    /// The trivial action.
    pub fn trivial(group: &Group, n_vars: usize, field: FieldSpec) -> Representation {
        Representation {
            mats: vec![LinearEndo::identity(n_vars, field); group.n],
        }
    }
}

/// Checks that `rep` is a homomorphism into GL(V): identity at `e`, matrices
/// multiply like the group, and every matrix is invertible.
pub fn validate_representation(
    group: &Group,
    rep: &Representation,
) -> Result<(), PolyError> {
    if rep.mats.len() != group.n {
        return Err(PolyError::BadRepresentation(format!(
            "{} matrices for a group of order {}",
            rep.mats.len(),
            group.n
        )));
    }
    let n = rep.mats[0].n;
    if rep.mats.iter().any(|m| m.n != n) {
        return Err(PolyError::BadRepresentation(
            "matrices have inconsistent sizes".to_string(),
        ));
    }
    if !rep.mats[group.identity()].is_identity() {
        return Err(PolyError::BadRepresentation(
            "identity element does not act as the identity".to_string(),
        ));
    }
    for g in group.elements() {
        if rep.mats[g].determinant().is_zero() {
            return Err(PolyError::BadRepresentation(format!(
                "matrix for {} is singular",
                group.name(g)
            )));
        }
    }
    for a in group.elements() {
        for b in group.elements() {
            let lhs = rep.mats[a].compose(&rep.mats[b]);
            if lhs != rep.mats[group.mul(a, b)] {
                return Err(PolyError::BadRepresentation(format!(
                    "matrices for {} and {} do not compose to the matrix for {}",
                    group.name(a),
                    group.name(b),
                    group.name(group.mul(a, b))
                )));
            }
        }
    }
    Ok(())
}

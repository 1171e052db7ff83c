//! Exact field scalars and q-integer arithmetic.
//!
//! Provides:
//! * [`FieldSpec`]: the two supported coefficient fields, the rationals and
//!   prime fields `F_p` with `p < 2^31`.
//! * [`Scalar`]: an exact element of one of those fields. Arithmetic never
//!   rounds; mixing scalars from different fields is a bug and panics.
//! * [`QParam`]: a nonzero scalar `q` together with its multiplicative order,
//!   used everywhere truncation at a root of unity matters.
//! * q-combinatorics: [`qint`], [`qfactorial`], [`qbinomial`] (the Gaussian
//!   binomial, computed by the q-Pascal recurrence so it stays defined at
//!   roots of unity), and [`mult_order`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit below 2^31")]
    ModulusTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars belong to different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("cannot parse {0:?} as a scalar over {1}")]
    Parse(String, String),
    #[error("q must be nonzero")]
    ZeroQ,
}

/// Which coefficient field computation happens over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// Arbitrary-precision rationals.
    Q,
    /// Integers mod `p`, `p` prime, `p < 2^31`.
    Fp(u32),
}

impl FieldSpec {
    /// Checks the modulus: prime and below `2^31`. `Q` always passes.
    pub fn validate(self) -> Result<(), ScalarError> {
        match self {
            FieldSpec::Q => Ok(()),
            FieldSpec::Fp(p) => {
                if p >= 1 << 31 {
                    return Err(ScalarError::ModulusTooLarge(p as u64));
                }
                if !is_prime_u32(p) {
                    return Err(ScalarError::NotPrime(p as u64));
                }
                Ok(())
            }
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Q(BigRational::zero()),
            FieldSpec::Fp(p) => Scalar::Fp { p, v: 0 },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Q(BigRational::one()),
            FieldSpec::Fp(p) => Scalar::Fp { p, v: 1 % p },
        }
    }

    /// The integer `n` mapped into the field.
    pub fn integer(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Fp(p) => Scalar::Fp {
                p,
                v: n.rem_euclid(p as i64) as u32,
            },
        }
    }

    /// Parses `"a"`, `"-a"`, or `"a/b"`. Over `F_p` the quotient is `a * b^{-1}`.
    pub fn parse(self, s: &str) -> Result<Scalar, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string(), self.to_string());
        // accept the prime-field display form "a mod p" when p matches
        let s = match s.split_once(" mod ") {
            Some((value, modulus)) => {
                let claimed: u32 = modulus.trim().parse().map_err(|_| bad())?;
                match self {
                    FieldSpec::Fp(p) if p == claimed => value.trim(),
                    _ => return Err(bad()),
                }
            }
            None => s,
        };
        let (num_str, den_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str.parse().map_err(|_| bad())?;
        let den: BigInt = match den_str {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self {
            FieldSpec::Q => Ok(Scalar::Q(BigRational::new(num, den))),
            FieldSpec::Fp(p) => {
                let n = Scalar::Fp { p, v: bigint_mod_p(&num, p) };
                let d = Scalar::Fp { p, v: bigint_mod_p(&den, p) };
                n.div(&d)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

fn bigint_mod_p(n: &BigInt, p: u32) -> u32 {
    let m = n % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    let digits = m.to_u32_digits().1;
    digits.first().copied().unwrap_or(0)
}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u32, 3, 5] {
        if n == d {
            return true;
        }
        if n % d == 0 {
            return false;
        }
    }
    // trial division by 6k +/- 1 reaches sqrt(2^31) ~ 46341 quickly
    let mut d = 7u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 4) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// An exact element of `Q` or of `F_p`. Every value knows its field; binary
/// operations require both operands to live in the same field and panic
/// otherwise (elements of distinct fields never meet in a correct run).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u32, v: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Q,
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                other.field()
            );
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: fp_inv(*v, *p) },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check_same_field(other);
        Ok(self.clone() * other.inv()?)
    }

    /// `self^e` for any integer exponent; negative exponents invert first.
    pub fn pow_i64(&self, e: i64) -> Result<Scalar, ScalarError> {
        let (base, e) = if e < 0 {
            (self.inv()?, e.unsigned_abs())
        } else {
            (self.clone(), e as u64)
        };
        let mut acc = self.field().one();
        let mut sq = base;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Ok(acc)
    }
}

fn fp_mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn fp_inv(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p
    let mut acc = 1u32;
    let mut sq = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, sq, p);
        }
        sq = fp_mul(sq, sq, p);
        e >>= 1;
    }
    acc
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.check_same_field(&rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { p, v: ((a as u64 + b as u64) % p as u64) as u32 }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        let neg = -rhs;
        self + neg
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.check_same_field(&rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { p, v: fp_mul(a, b, p) }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p, v: if v == 0 { 0 } else { p - v } },
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.clone() + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = self.clone() - rhs;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { p, v } => write!(f, "{v} mod {p}"),
        }
    }
}

/// The multiplicative order of `q`, or `None` when `q` is not a root of unity.
/// Over `F_p` the order always exists and divides `p - 1`; over `Q` only
/// `1` and `-1` are roots of unity.
pub fn mult_order(q: &Scalar) -> Result<Option<u32>, ScalarError> {
    if q.is_zero() {
        return Err(ScalarError::ZeroQ);
    }
    match q {
        Scalar::Q(r) => {
            if r.is_one() {
                Ok(Some(1))
            } else if (-r.clone()).is_one() {
                Ok(Some(2))
            } else {
                Ok(None)
            }
        }
        Scalar::Fp { p, v } => {
            let group = *p as u64 - 1;
            let mut best = group;
            // test each divisor of p-1; the smallest with q^d = 1 is the order
            let mut divs = Vec::new();
            let mut d = 1u64;
            while d * d <= group {
                if group % d == 0 {
                    divs.push(d);
                    divs.push(group / d);
                }
                d += 1;
            }
            divs.sort_unstable();
            for d in divs {
                if (Scalar::Fp { p: *p, v: *v }).pow_i64(d as i64).unwrap().is_one() {
                    best = d;
                    break;
                }
            }
            Ok(Some(best as u32))
        }
    }
}

/// A nonzero deformation parameter together with its multiplicative order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QParam {
    pub q: Scalar,
    /// `Some(l)` when `q` has finite multiplicative order `l`, else `None`.
    pub order: Option<u32>,
}

impl QParam {
    pub fn new(q: Scalar) -> Result<QParam, ScalarError> {
        let order = mult_order(&q)?;
        Ok(QParam { q, order })
    }

    pub fn field(&self) -> FieldSpec {
        self.q.field()
    }

    /// `Some(l)` when `q` is a primitive `l`-th root of unity with `l >= 2`:
    /// the case where `D_1^l = D_2^l = 0` is imposed and series truncate.
    pub fn truncation_order(&self) -> Option<u32> {
        match self.order {
            Some(l) if l >= 2 => Some(l),
            _ => None,
        }
    }
}

/// `(n)_q = 1 + q + ... + q^{n-1}`; `(0)_q = 0`.
pub fn qint(n: u32, q: &Scalar) -> Scalar {
    let mut acc = q.field().zero();
    let mut pow = q.field().one();
    for _ in 0..n {
        acc += pow.clone();
        pow *= q.clone();
    }
    acc
}

/// `(n)!_q = (1)_q (2)_q ... (n)_q`; `(0)!_q = 1`.
pub fn qfactorial(n: u32, q: &Scalar) -> Scalar {
    let mut acc = q.field().one();
    for i in 1..=n {
        acc *= qint(i, q);
    }
    acc
}

/// Gaussian binomial coefficient, by the q-Pascal recurrence
/// `C(n,k)_q = C(n-1,k-1)_q + q^k C(n-1,k)_q`.
///
/// Stays defined at roots of unity, where the quotient-of-factorials formula
/// would divide by zero; there `C(l,k)_q = 0` for `0 < k < l` when `q` is a
/// primitive `l`-th root of unity.
pub fn qbinomial(n: u32, k: u32, q: &Scalar) -> Scalar {
    let zero = q.field().zero();
    let one = q.field().one();
    if k > n {
        return zero;
    }
    // row-by-row DP over Pascal rows
    let mut row = vec![one.clone()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let left = if j > 0 { row[(j - 1) as usize].clone() } else { zero.clone() };
            let right = if j < m {
                q.pow_i64(j as i64).unwrap() * row[j as usize].clone()
            } else {
                zero.clone()
            };
            next.push(left + right);
        }
        row = next;
    }
    row[k as usize].clone()
}

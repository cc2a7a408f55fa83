//! Exact arithmetic in the field Q(√p : p prime)(i).
//!
//! Every element is stored canonically as a finite sum Σ r_z·√z over
//! pairwise distinct positive squarefree integers z, with Gaussian-rational
//! coefficients r_z. The key z = 1 holds the rational-plus-imaginary part.
//! Canonical form is unique, so equality is map equality.

mod cyclotomic;
mod parse;

pub use cyclotomic::{cyclotomic_polynomial, from_cyclotomic, to_cyclotomic};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

/// Arbitrary-precision rational.
pub type Rat = BigRational;
/// Gaussian rational a + b·i.
pub type Gq = Complex<Rat>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(i64),
    #[error("expected a squarefree integer, got {0}")]
    NotSquarefree(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element has a nonzero imaginary part")]
    NotReal,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no square root of {0} exists in Q(sqrt p)(i)")]
    NoSquareRoot(String),
    #[error("cyclotomic order {0} exceeds the supported limit 24")]
    CyclotomicOrderTooLarge(u64),
    #[error("element does not lie in Q(sqrt p)(i): {0}")]
    NotInField(String),
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn gq_zero() -> Gq {
    Complex::new(Rat::zero(), Rat::zero())
}

pub fn gq_rat(r: Rat) -> Gq {
    Complex::new(r, Rat::zero())
}

pub fn gq_int(n: i64) -> Gq {
    gq_rat(rat_int(n))
}

/// Splits n > 0 as s²·z with z squarefree; returns (z, s).
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    let mut z = 1u64;
    let mut s = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                z *= p;
            }
        }
        p += 1;
    }
    (z * m, s)
}

fn is_squarefree(n: u64) -> bool {
    n > 0 && squarefree_decompose(n).1 == 1
}

fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// An element of Q(√p : p prime)(i) in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactScalar {
    terms: BTreeMap<u64, Gq>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_gq(gq_rat(r))
    }

    pub fn from_gq(c: Gq) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(1, c);
        }
        ExactScalar { terms }
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Self::from_gq(Complex::new(Rat::zero(), Rat::one()))
    }

    /// c·√z for squarefree z ≥ 1. Internal builder; z is not reduced.
    fn single(z: u64, c: Gq) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(z, c);
        }
        ExactScalar { terms }
    }

    /// Canonical form of Σ c·√n over raw (coefficient, radicand) pairs.
    ///
    /// Radicands must be positive; use [`ExactScalar::sqrt_rational`] for
    /// square roots of negative rationals.
    pub fn normalize(raw: &[(Gq, i64)]) -> Result<Self, ExactError> {
        let mut acc = ExactScalar::zero();
        for (c, n) in raw {
            if *n <= 0 {
                return Err(ExactError::NonPositiveRadicand(*n));
            }
            let (z, s) = squarefree_decompose(*n as u64);
            acc.add_term(z, c * gq_int(s as i64));
        }
        Ok(acc)
    }

    fn add_term(&mut self, z: u64, c: Gq) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(z).or_insert_with(gq_zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&z);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// True when the element is a plain rational number.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&z| z == 1) && self.is_real()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_rational() {
            return Some(self.terms[&1].re.clone());
        }
        None
    }

    pub fn as_gq(&self) -> Option<Gq> {
        if self.is_zero() {
            return Some(gq_zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&1) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Component-wise complex conjugate (fixes each √z, maps i to −i).
    pub fn conj(&self) -> Self {
        ExactScalar {
            terms: self.terms.iter().map(|(z, c)| (*z, c.conj())).collect(),
        }
    }

    /// Real part, as an element of the real subfield.
    pub fn real_part(&self) -> Self {
        ExactScalar {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.re.is_zero())
                .map(|(z, c)| (*z, gq_rat(c.re.clone())))
                .collect(),
        }
    }

    /// Imaginary part (real element v with self = real_part + i·v).
    pub fn imag_part(&self) -> Self {
        ExactScalar {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.im.is_zero())
                .map(|(z, c)| (*z, gq_rat(c.im.clone())))
                .collect(),
        }
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (u64, &Gq)> {
        self.terms.iter().map(|(z, c)| (*z, c))
    }

    /// The distinct radicands > 1 appearing in the canonical form.
    pub fn radicands(&self) -> Vec<u64> {
        self.terms.keys().copied().filter(|&z| z > 1).collect()
    }

    /// A canonical square root of the rational q: for q = s·a/b with
    /// s ∈ {±1}, returns (√(a·b)/b)·(i if s < 0 else 1). The branch
    /// convention for negative q is fixed as √(−q) = i·√q.
    pub fn sqrt_rational(q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let negative = q.is_negative();
        let a = q.numer().abs();
        let b = q.denom().abs();
        let ab: BigInt = &a * &b;
        let ab_u64 = u64::try_from(&ab).expect("radicand exceeds u64 range");
        let (z, s) = squarefree_decompose(ab_u64);
        let coeff = Rat::new(BigInt::from(s), b);
        let c = if negative {
            Complex::new(Rat::zero(), coeff)
        } else {
            gq_rat(coeff)
        };
        Self::single(z, c)
    }

    pub fn scale_gq(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExactScalar {
            terms: self.terms.iter().map(|(z, t)| (*z, t * c)).collect(),
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        self.scale_gq(&gq_rat(r.clone()))
    }

    /// Multiplicative inverse, per the power-relation method: find the least
    /// m with u^m a Q(i)-linear combination of lower powers, then
    /// u⁻¹ = (u^{m−1} − Σ_{j≥1} q_j u^{j−1}) / q₀.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(c) = self.as_gq() {
            return Ok(Self::from_gq(c.inv()));
        }
        let (m, q) = self.power_relation();
        // u^m = Σ_{j<m} q_j u^j with q_0 ≠ 0 by minimality of m.
        let q0 = q[0].clone();
        debug_assert!(!q0.is_zero());
        let mut acc = self.pow(m as u32 - 1);
        let mut upow = Self::one();
        for qj in q.iter().take(m).skip(1) {
            acc = acc - upow.scale_gq(qj);
            upow = &upow * self;
        }
        Ok(acc.scale_gq(&q0.inv()))
    }

    /// Least m ≥ 1 with u^m ∈ span_{Q(i)}{1, u, …, u^{m−1}}, together with
    /// the coefficients of that combination.
    fn power_relation(&self) -> (usize, Vec<Gq>) {
        // Echelon rows over Q(i), indexed by radicand. Each row remembers
        // its expansion over the powers u^0..u^j inserted so far.
        let mut rows: Vec<(u64, BTreeMap<u64, Gq>, Vec<Gq>)> = Vec::new();
        let mut upow = Self::one();
        for m in 0.. {
            let mut vec = upow.terms.clone();
            let mut combo = vec![gq_zero(); m + 1];
            combo[m] = gq_int(1);
            for (pivot, row, rcombo) in &rows {
                if let Some(c) = vec.get(pivot).cloned() {
                    let factor = c / &row[pivot];
                    for (z, rv) in row {
                        let e = vec.entry(*z).or_insert_with(gq_zero);
                        *e -= &factor * rv;
                        if e.is_zero() {
                            vec.remove(z);
                        }
                    }
                    for (j, rc) in rcombo.iter().enumerate() {
                        combo[j] -= &factor * rc;
                    }
                }
            }
            if vec.is_empty() {
                // 0 = Σ_{j≤m} combo_j u^j with combo_m = 1.
                let q: Vec<Gq> = combo.iter().take(m).map(|c| -c.clone()).collect();
                return (m, q);
            }
            let pivot = *vec.keys().next().unwrap();
            rows.push((pivot, vec, combo));
            upow = &upow * self;
        }
        unreachable!()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Degree of Q(u) over Q for real u: 2^s where s is the F₂-rank of
    /// the group generated by the radicands present.
    pub fn field_degree(&self) -> Result<u64, ExactError> {
        if !self.is_real() {
            return Err(ExactError::NotReal);
        }
        Ok(1u64 << surd_group_rank(&self.radicands()))
    }

    /// Least n with √k ∈ Q(ζ_n) for squarefree k ≥ 1: n = k when k is odd
    /// with an even number of prime divisors ≡ 3 mod 4, and n = 4k otherwise.
    pub fn min_cyclotomic_order(k: u64) -> Result<u64, ExactError> {
        if !is_squarefree(k) {
            return Err(ExactError::NotSquarefree(k));
        }
        if k == 1 {
            return Ok(1);
        }
        let e = prime_factors(k).iter().filter(|&&p| p % 4 == 3).count();
        if k % 2 == 1 && e % 2 == 0 {
            Ok(k)
        } else {
            Ok(4 * k)
        }
    }

    /// Exact sign of a nonzero real element, by interval refinement with
    /// rational √z bounds. Returns Equal only for the zero element.
    pub fn sign_real(&self) -> Result<Ordering, ExactError> {
        if !self.is_real() {
            return Err(ExactError::NotReal);
        }
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut prec = 8u32;
        loop {
            let mut lo = Rat::zero();
            let mut hi = Rat::zero();
            for (z, c) in &self.terms {
                let (slo, shi) = sqrt_bounds(*z, prec);
                let r = &c.re;
                if r.is_negative() {
                    lo += r * &shi;
                    hi += r * &slo;
                } else {
                    lo += r * &slo;
                    hi += r * &shi;
                }
            }
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            prec *= 2;
            assert!(prec <= 1 << 20, "sign refinement failed to converge");
        }
    }

    pub fn abs_real(&self) -> Result<Self, ExactError> {
        match self.sign_real()? {
            Ordering::Less => Ok(-self.clone()),
            _ => Ok(self.clone()),
        }
    }

    /// Attempts a square root within the field: handles rationals,
    /// single-surd multiples c·√z, and denestable quadratic surds a + b√c.
    pub fn try_sqrt(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::sqrt_rational(&r));
        }
        if self.is_real() && self.terms.len() == 1 {
            // A single term c·√z with z > 1: its square root needs z^{1/4},
            // which lies outside the field.
            return Err(ExactError::NoSquareRoot(self.to_string()));
        }
        if self.is_real() && self.terms.len() == 2 && self.terms.contains_key(&1) {
            // a + b√c: denests when a² − b²c is a rational square.
            let a = self.terms[&1].re.clone();
            let (&z, bc) = self.terms.iter().find(|(&z, _)| z > 1).unwrap();
            let b = bc.re.clone();
            let disc = &a * &a - &b * &b * rat_int(z as i64);
            let s = Self::sqrt_rational(&disc);
            if let Some(srat) = s.as_rational() {
                if !srat.is_negative() {
                    let two = rat_int(2);
                    let u = Self::sqrt_rational(&((&a + &srat) / &two));
                    let v = Self::sqrt_rational(&((&a - &srat) / &two));
                    let half = &u + &v;
                    let cand = if b.is_negative() { &u - &v } else { half };
                    if &(&cand * &cand) == self {
                        return Ok(cand);
                    }
                }
            }
            return Err(ExactError::NoSquareRoot(self.to_string()));
        }
        Err(ExactError::NoSquareRoot(self.to_string()))
    }

    /// Total order on canonical forms (term-list lexicographic); used only
    /// for deterministic sorting, not for magnitude comparison.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter();
        let mut b = other.terms.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((za, ca)), Some((zb, cb))) => {
                    let ord = za
                        .cmp(zb)
                        .then_with(|| ca.re.cmp(&cb.re))
                        .then_with(|| ca.im.cmp(&cb.im));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

/// F₂-rank of the multiplicative group generated by squarefree radicands.
pub fn surd_group_rank(radicands: &[u64]) -> u32 {
    let mut primes: Vec<u64> = Vec::new();
    for &z in radicands {
        for p in prime_factors(z) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let mut rows: Vec<u64> = Vec::new();
    for &z in radicands {
        if z == 1 {
            continue;
        }
        let mut mask = 0u64;
        for (j, &p) in primes.iter().enumerate() {
            if z % p == 0 {
                mask |= 1 << j;
            }
        }
        let mut v = mask;
        for &r in &rows {
            let pivot = 63 - r.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            rows.push(v);
        }
    }
    rows.len() as u32
}

/// Rational bounds lo ≤ √z ≤ hi with hi − lo = 2^{-prec}.
fn sqrt_bounds(z: u64, prec: u32) -> (Rat, Rat) {
    let scale = BigInt::one() << (2 * prec);
    let scaled = BigInt::from(z) * &scale;
    let root = scaled.sqrt();
    let den = BigInt::one() << prec;
    let lo = Rat::new(root.clone(), den.clone());
    let hi = Rat::new(root + 1, den);
    (lo, hi)
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.add_term(*z, c.clone());
        }
        out
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.add_term(*z, -c.clone());
        }
        out
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (z1, c1) in &self.terms {
            for (z2, c2) in &rhs.terms {
                let g = num_integer::gcd(*z1, *z2);
                let z = (z1 / g) * (z2 / g);
                out.add_term(z, c1 * c2 * gq_int(g as i64));
            }
        }
        out
    }
}

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inverse().expect("division by zero ExactScalar");
        self * &inv
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            terms: self.terms.into_iter().map(|(z, c)| (z, -c)).collect(),
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        for (z, c) in &rhs.terms {
            self.add_term(*z, c.clone());
        }
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        for (z, c) in &rhs.terms {
            self.add_term(*z, -c.clone());
        }
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl num_traits::Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl num_traits::One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_scalar(self, f)
    }
}

impl std::str::FromStr for ExactScalar {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_scalar(s)
    }
}

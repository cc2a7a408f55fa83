//! Conversion between cyclotomic coordinates and the surd field.
//!
//! An element given as Σ c_j ζ_n^j (rational c_j) is rewritten as
//! Σ r_k √k + Σ s_k i√k over the squarefree k whose surds lie in Q(ζ_n),
//! using Gauss sums for the basis surds. Supported for n ≤ 24 only; the
//! pipeline never produces larger orders at the ranks this crate handles.

use super::{gq_rat, rat_int, ExactError, ExactScalar, Rat};
use crate::linalg::Mat;
use num_traits::{One, Zero};

const MAX_ORDER: u64 = 24;

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Remainder of a modulo monic b.
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert!(b.last().is_some_and(|c| c.is_one()));
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while r.len() >= b.len() {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for (j, bj) in b.iter().enumerate() {
            let sub = &lead * bj;
            r[shift + j] -= sub;
        }
        poly_trim(&mut r);
    }
    r
}

/// Exact quotient of a by monic b (requires b | a).
fn poly_div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert!(b.last().is_some_and(|c| c.is_one()));
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut q = vec![Rat::zero(); r.len().saturating_sub(b.len() - 1)];
    while r.len() >= b.len() {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        q[shift] = lead.clone();
        for (j, bj) in b.iter().enumerate() {
            let sub = &lead * bj;
            r[shift + j] -= sub;
        }
        poly_trim(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<Rat> {
    assert!(n >= 1);
    // x^n − 1 divided by the product of Φ_d over proper divisors d of n.
    let mut num = vec![Rat::zero(); n as usize + 1];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    let mut den = vec![Rat::one()];
    for d in 1..n {
        if n % d == 0 {
            den = poly_mul(&den, &cyclotomic_polynomial(d));
        }
    }
    poly_div_exact(&num, &den)
}

fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Element of Q(ζ_n) in the power basis ζ^0 … ζ^{φ(n)−1}.
#[derive(Clone, Debug, PartialEq)]
struct CycElt {
    coords: Vec<Rat>,
}

struct CycField {
    n: u64,
    phi: usize,
    modulus: Vec<Rat>,
}

impl CycField {
    fn new(n: u64) -> Self {
        let modulus = cyclotomic_polynomial(n);
        CycField { n, phi: euler_phi(n) as usize, modulus }
    }

    fn zero(&self) -> CycElt {
        CycElt { coords: vec![Rat::zero(); self.phi] }
    }

    fn reduce(&self, raw: &[Rat]) -> CycElt {
        let r = poly_rem(raw, &self.modulus);
        let mut coords = vec![Rat::zero(); self.phi];
        coords[..r.len()].clone_from_slice(&r);
        CycElt { coords }
    }

    /// ζ_n^e as an element.
    fn zeta_pow(&self, e: u64) -> CycElt {
        let e = (e % self.n) as usize;
        let mut raw = vec![Rat::zero(); e + 1];
        raw[e] = Rat::one();
        self.reduce(&raw)
    }

    fn add(&self, a: &CycElt, b: &CycElt) -> CycElt {
        CycElt {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    fn scale(&self, a: &CycElt, r: &Rat) -> CycElt {
        CycElt { coords: a.coords.iter().map(|x| x * r).collect() }
    }

    fn mul(&self, a: &CycElt, b: &CycElt) -> CycElt {
        self.reduce(&poly_mul(&a.coords, &b.coords))
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    // Euler's criterion by fast modular exponentiation.
    let mut base = a % p;
    let mut exp = (p - 1) / 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    if acc == 1 {
        1
    } else if acc == p - 1 {
        -1
    } else {
        0
    }
}

/// The canonical embedding of √k (imaginary = false) or i√k (true) in
/// Q(ζ_n), when it exists: built from Gauss sums, √2 = ζ₈ + ζ₈⁻¹, and
/// i = ζ₄, with the classical sign of the Gauss sum.
fn surd_vector(field: &CycField, k: u64, imaginary: bool) -> Option<CycElt> {
    let n = field.n;
    let mut g = field.zeta_pow(0); // 1
    let mut f = 0u64; // number of primes ≡ 3 mod 4 in k
    for p in super::prime_factors(k) {
        if p == 2 {
            if n % 8 != 0 {
                return None;
            }
            let sqrt2 = field.add(&field.zeta_pow(n / 8), &field.zeta_pow(n - n / 8));
            g = field.mul(&g, &sqrt2);
            continue;
        }
        if n % p != 0 {
            return None;
        }
        if p % 4 == 3 {
            f += 1;
        }
        // Gauss sum Σ_a (a|p) ζ_p^a = √p (p ≡ 1) or i√p (p ≡ 3).
        let mut gp = field.zero();
        for a in 1..p {
            let s = legendre(a, p);
            let z = field.zeta_pow((n / p) * a);
            let term = field.scale(&z, &rat_int(s));
            gp = field.add(&gp, &term);
        }
        g = field.mul(&g, &gp);
    }
    // g = i^f √k; multiply by i^t with t ≡ target − f (mod 4).
    let target = u64::from(imaginary);
    let t = (4 + target % 4 - f % 4) % 4;
    if t == 0 {
        return Some(g);
    }
    if t == 2 {
        return Some(field.scale(&g, &rat_int(-1)));
    }
    // Odd power of i needed.
    if n % 4 != 0 {
        return None;
    }
    let i = field.zeta_pow(n / 4);
    let gi = field.mul(&g, &i);
    if t == 1 {
        Some(gi)
    } else {
        Some(field.scale(&gi, &rat_int(-1)))
    }
}

/// Squarefree k ≥ 1 whose primes all divide 2n (candidates for membership).
fn squarefree_candidates(n: u64) -> Vec<u64> {
    let mut primes = vec![2u64];
    primes.extend(super::prime_factors(n).into_iter().filter(|&p| p != 2));
    primes.sort_unstable();
    let mut out = Vec::new();
    for mask in 0..(1u32 << primes.len()) {
        let mut k = 1u64;
        for (j, &p) in primes.iter().enumerate() {
            if mask >> j & 1 == 1 {
                k *= p;
            }
        }
        out.push(k);
    }
    out.sort_unstable();
    out
}

/// Rewrites Σ c_j ζ_n^j (c_j = coeffs\[j\]) as an element of Q(√p)(i).
///
/// Errors when n > 24 or when the element does not lie in the surd field.
pub fn from_cyclotomic(coeffs: &[Rat], n: u64) -> Result<ExactScalar, ExactError> {
    if n == 0 || n > MAX_ORDER {
        return Err(ExactError::CyclotomicOrderTooLarge(n));
    }
    let field = CycField::new(n);
    let v = field.reduce(coeffs);
    // Assemble the available surd basis: √k and i√k columns.
    let mut labels: Vec<(u64, bool)> = Vec::new();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for k in squarefree_candidates(n) {
        for imaginary in [false, true] {
            if let Some(vec) = surd_vector(&field, k, imaginary) {
                labels.push((k, imaginary));
                cols.push(vec.coords);
            }
        }
    }
    let m = Mat::from_cols(cols);
    let Some(x) = m.solve(&v.coords) else {
        return Err(ExactError::NotInField(format!(
            "cyclotomic element of order {n} is outside the surd field"
        )));
    };
    let mut acc = ExactScalar::zero();
    for ((k, imaginary), c) in labels.iter().zip(&x) {
        if c.is_zero() {
            continue;
        }
        let coeff = if *imaginary {
            num_complex::Complex::new(Rat::zero(), c.clone())
        } else {
            gq_rat(c.clone())
        };
        acc += &ExactScalar::normalize(&[(coeff, *k as i64)])?;
    }
    Ok(acc)
}

/// Embeds a surd-field element into ζ_n power-basis coordinates
/// (length φ(n)); errors when some radicand is unavailable in Q(ζ_n).
pub fn to_cyclotomic(u: &ExactScalar, n: u64) -> Result<Vec<Rat>, ExactError> {
    if n == 0 || n > MAX_ORDER {
        return Err(ExactError::CyclotomicOrderTooLarge(n));
    }
    let field = CycField::new(n);
    let mut acc = field.zero();
    for (z, c) in u.iter_terms() {
        if !c.re.is_zero() {
            let Some(vec) = surd_vector(&field, z, false) else {
                return Err(ExactError::NotInField(format!("sqrt({z}) not in Q(zeta_{n})")));
            };
            acc = field.add(&acc, &field.scale(&vec, &c.re));
        }
        if !c.im.is_zero() {
            let Some(vec) = surd_vector(&field, z, true) else {
                return Err(ExactError::NotInField(format!("i*sqrt({z}) not in Q(zeta_{n})")));
            };
            acc = field.add(&acc, &field.scale(&vec, &c.im));
        }
    }
    Ok(acc.coords)
}

#[cfg(test)]
mod tests {
    use super::super::ExactScalar;
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let phi1: Vec<i64> = vec![-1, 1];
        assert_eq!(cyclotomic_polynomial(1), phi1.iter().map(|&x| rat_int(x)).collect::<Vec<_>>());
        // Φ_12 = x^4 − x^2 + 1
        let phi12 = cyclotomic_polynomial(12);
        let expect = [1i64, 0, -1, 0, 1];
        assert_eq!(phi12, expect.iter().map(|&x| rat_int(x)).collect::<Vec<_>>());
    }

    #[test]
    fn gauss_sum_sqrt5() {
        // Σ (a|5) ζ_5^a = √5: coefficient vector over ζ_5^0..3 after reduction.
        let mut coeffs = vec![Rat::zero(); 5];
        coeffs[1] = rat_int(1);
        coeffs[2] = rat_int(-1);
        coeffs[3] = rat_int(-1);
        coeffs[4] = rat_int(1);
        let v = from_cyclotomic(&coeffs, 5).unwrap();
        assert_eq!(v, "1*sqrt(5)".parse().unwrap());
    }

    #[test]
    fn sqrt2_in_zeta8() {
        // ζ₈ + ζ₈⁷ = √2
        let mut coeffs = vec![Rat::zero(); 8];
        coeffs[1] = rat_int(1);
        coeffs[7] = rat_int(1);
        let v = from_cyclotomic(&coeffs, 8).unwrap();
        assert_eq!(v, "1*sqrt(2)".parse().unwrap());
    }

    #[test]
    fn i_sqrt3_in_zeta3() {
        // 2ζ₃ + 1 = √−3 = i√3
        let mut coeffs = vec![Rat::zero(); 3];
        coeffs[0] = rat_int(1);
        coeffs[1] = rat_int(2);
        let v = from_cyclotomic(&coeffs, 3).unwrap();
        assert_eq!(v, "1i*sqrt(3)".parse().unwrap());
    }

    #[test]
    fn round_trips() {
        for (text, n) in [
            ("1*sqrt(2)+1*sqrt(3)", 24u64),
            ("1/2*sqrt(5)-2", 5),
            ("(1+1i)*sqrt(6)-3i", 24),
            ("1i*sqrt(7)", 7),
        ] {
            let u: ExactScalar = text.parse().unwrap();
            let coords = to_cyclotomic(&u, n).unwrap();
            let back = from_cyclotomic(&coords, n).unwrap();
            assert_eq!(back, u, "round trip through zeta_{n} for {text}");
        }
    }

    #[test]
    fn rejections() {
        // ζ_7 + ζ_7^{-1} has degree 3 over Q: not a surd element.
        let mut coeffs = vec![Rat::zero(); 7];
        coeffs[1] = rat_int(1);
        coeffs[6] = rat_int(1);
        assert!(matches!(
            from_cyclotomic(&coeffs, 7),
            Err(ExactError::NotInField(_))
        ));
        assert!(matches!(
            from_cyclotomic(&[Rat::one()], 25),
            Err(ExactError::CyclotomicOrderTooLarge(25))
        ));
        let u: ExactScalar = "1*sqrt(2)".parse().unwrap();
        assert!(to_cyclotomic(&u, 12).is_err());
    }
}

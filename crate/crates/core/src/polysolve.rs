//! Exact polynomial-system solving over the rationals: Buchberger Gröbner
//! bases in lexicographic order and the structured zero-setting search used
//! by the non-principal Cayley-triple construction.
//!
//! The search sets all but i indeterminates to zero for i = 1, 2, …, keeps
//! restrictions whose reduced basis has a recognized triangular shape
//! (pure quadrics T² = a, quadric combinations T_c = Σ a_m T_m², and plain
//! linear equations), and lifts those to exact surd solutions.

use crate::error::LieError;
use crate::exact::{ExactScalar, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Monomial exponent vector; lexicographic order with variable 0 most
/// significant.
pub type Monomial = Vec<u32>;

/// Multivariate polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    /// Terms keyed by exponent vector; no zero coefficients.
    pub terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut m = vec![0u32; nvars];
        m[j] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(m, Rat::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rat::one() / c;
                self.scale(&inv)
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Substitutes 0 for every variable outside `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let dead = m
                .iter()
                .enumerate()
                .any(|(j, &e)| e > 0 && !keep.contains(&j));
            if !dead {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Exact evaluation at surd values.
    pub fn eval(&self, vals: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut t = ExactScalar::from_rat(c.clone());
            for (j, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &vals[j];
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl fmt::Display for Poly {
    /// Grammar: `poly := term (('+'|'-') term)*`,
    /// `term := rational ['*' var ['^' int]]…` with variables `T1…Tn`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let ca = c.abs();
            if ca.denom() == &num_bigint::BigInt::from(1) {
                write!(f, "{}", ca.numer())?;
            } else {
                write!(f, "{}/{}", ca.numer(), ca.denom())?;
            }
            for (j, &e) in m.iter().enumerate() {
                if e == 1 {
                    write!(f, "*T{}", j + 1)?;
                } else if e > 1 {
                    write!(f, "*T{}^{}", j + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// A system of rational polynomials in named indeterminates T1…Tn.
#[derive(Debug, Clone)]
pub struct PolySystem {
    pub nvars: usize,
    pub polys: Vec<Poly>,
}

impl PolySystem {
    pub fn new(nvars: usize, polys: Vec<Poly>) -> Self {
        PolySystem { nvars, polys: polys.into_iter().filter(|p| !p.is_zero()).collect() }
    }

    pub fn eval_all_zero(&self, vals: &[ExactScalar]) -> bool {
        self.polys.iter().all(|p| p.eval(vals).is_zero())
    }
}

fn monomial_divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn monomial_lcm(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn monomial_div(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Multivariate division: the remainder of p modulo the basis.
fn normal_form(p: &Poly, basis: &[Poly]) -> Poly {
    let mut rem = Poly::zero(p.nvars);
    let mut work = p.clone();
    'outer: while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            if let Some((gm, gc)) = g.leading() {
                if monomial_divides(gm, &lm) {
                    let q = monomial_div(&lm, gm);
                    let f = &lc / gc;
                    let mut shift = Poly::zero(p.nvars);
                    shift.add_term(q, f);
                    work = work.sub(&shift.mul(g));
                    continue 'outer;
                }
            }
        }
        rem.add_term(lm.clone(), lc.clone());
        work.terms.remove(&lm);
    }
    rem
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = monomial_lcm(fm, gm);
    let mut a = Poly::zero(f.nvars);
    a.add_term(monomial_div(&l, fm), Rat::one() / fc);
    let mut b = Poly::zero(f.nvars);
    b.add_term(monomial_div(&l, gm), Rat::one() / gc);
    a.mul(f).sub(&b.mul(g))
}

/// Reduced Gröbner basis in lexicographic order (Buchberger).
pub fn groebner_basis(system: &PolySystem) -> Vec<Poly> {
    let mut basis: Vec<Poly> = system
        .polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    if basis.is_empty() {
        return Vec::new();
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (fi, fj) = (&basis[i], &basis[j]);
        // Buchberger's coprimality criterion.
        let (mi, _) = fi.leading().unwrap();
        let (mj, _) = fj.leading().unwrap();
        if mi.iter().zip(mj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let s = s_poly(fi, fj);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            let r = r.monic();
            for k in 0..basis.len() {
                pairs.push((k, basis.len()));
            }
            basis.push(r);
        }
    }
    // Interreduce: drop redundant leading terms, fully reduce tails.
    let mut keep: Vec<Poly> = Vec::new();
    for i in 0..basis.len() {
        let (mi, _) = basis[i].leading().unwrap();
        let dominated = basis.iter().enumerate().any(|(j, g)| {
            j != i
                && !g.is_zero()
                && monomial_divides(g.leading().unwrap().0, mi)
                && (g.leading().unwrap().0 != mi || j < i)
        });
        if !dominated {
            keep.push(basis[i].clone());
        }
    }
    let mut reduced: Vec<Poly> = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&keep[i], &others);
        if !r.is_zero() {
            reduced.push(r.monic());
        }
    }
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    reduced
}

/// Weak Nullstellensatz test: solvable over C iff the reduced basis is
/// not {1}.
pub fn solvable_over_c(system: &PolySystem) -> bool {
    let gb = groebner_basis(system);
    !gb.iter().any(|p| {
        p.leading()
            .map(|(m, _)| m.iter().all(|&e| e == 0))
            .unwrap_or(false)
    })
}

/// A satisfying assignment found by the structured search.
#[derive(Debug, Clone)]
pub struct StructuredSolution {
    pub values: Vec<ExactScalar>,
    /// Variables kept nonzero in the successful restriction.
    pub kept: Vec<usize>,
}

/// Recognized-shape solver for one restricted (zero-set) system; the basis
/// must consist of T² = a, T_c = Σ a_m T_m² (with every T_m of the first
/// shape), or linear T = a equations.
fn solve_recognized(nvars: usize, kept: &[usize], gb: &[Poly]) -> Option<Vec<ExactScalar>> {
    let mut vals: Vec<Option<ExactScalar>> = vec![None; nvars];
    for j in 0..nvars {
        if !kept.contains(&j) {
            vals[j] = Some(ExactScalar::zero());
        }
    }
    // First pass: pure quadrics and linears in a single variable.
    let mut quadric_vars: Vec<usize> = Vec::new();
    let mut deferred: Vec<&Poly> = Vec::new();
    for g in gb {
        let (lm, _) = g.leading()?;
        let lv: Vec<usize> = lm
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, _)| j)
            .collect();
        let [j] = lv[..] else { return None };
        let tail: Vec<(&Monomial, &Rat)> = g.terms.iter().filter(|(m, _)| *m != lm).collect();
        if lm[j] == 2 && lm.iter().enumerate().all(|(k, &e)| k == j || e == 0) {
            // T_j² − a
            if tail.len() > 1 {
                return None;
            }
            let a = match tail.first() {
                None => Rat::zero(),
                Some((m, c)) => {
                    if m.iter().any(|&e| e > 0) {
                        return None;
                    }
                    -(*c).clone()
                }
            };
            vals[j] = Some(ExactScalar::sqrt_rational(&a));
            quadric_vars.push(j);
        } else if lm[j] == 1 && lm.iter().enumerate().all(|(k, &e)| k == j || e == 0) {
            // Linear leading variable: directly a constant, or a quadric
            // combination resolved in a second pass.
            let pure_constant = tail.iter().all(|(m, _)| m.iter().all(|&e| e == 0));
            if pure_constant {
                let a = tail
                    .first()
                    .map(|(_, c)| -(*c).clone())
                    .unwrap_or_else(Rat::zero);
                vals[j] = Some(ExactScalar::from_rat(a));
            } else {
                deferred.push(g);
            }
        } else {
            return None;
        }
    }
    // Second pass: T_c = Σ a_m T_m² with every T_m already solved by a
    // quadric (or zero), plus an optional constant.
    for g in &deferred {
        let (lm, _) = g.leading()?;
        let j = lm.iter().position(|&e| e > 0)?;
        let mut acc = ExactScalar::zero();
        for (m, c) in g.terms.iter().filter(|(m, _)| *m != lm) {
            let sup: Vec<usize> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, _)| k)
                .collect();
            match sup[..] {
                [] => acc = &acc + &ExactScalar::from_rat(c.clone()),
                [k] if m[k] == 2 => {
                    let vk = vals[k].clone()?;
                    let sq = &vk * &vk;
                    acc = &acc + &sq.scale_gq(&crate::exact::gq_rat(c.clone()));
                }
                _ => return None,
            }
        }
        vals[j] = Some(-acc);
    }
    vals.into_iter().collect()
}

/// The zero-setting search of the non-principal case: for i = 1, 2, … keep
/// only i indeterminates (subsets in size-then-lexicographic order), prune
/// restrictions unsolvable over C, and accept the first recognized shape
/// whose exact solution satisfies the original system.
pub fn structured_solve(system: &PolySystem) -> Result<StructuredSolution, LieError> {
    structured_solve_filtered(system, |_| true)
}

/// As [`structured_solve`], with an extra acceptance predicate applied to
/// every verified assignment (the first acceptable one in the canonical
/// order wins).
pub fn structured_solve_filtered(
    system: &PolySystem,
    accept: impl Fn(&[ExactScalar]) -> bool,
) -> Result<StructuredSolution, LieError> {
    for subset in subsets_size_then_lex(system.nvars) {
        if let Some(sol) = try_restriction(system, &subset) {
            if accept(&sol) {
                return Ok(StructuredSolution { values: sol, kept: subset });
            }
        }
    }
    Err(LieError::NoSolutionFound(
        "structured search exhausted all zero-set restrictions".into(),
    ))
}

/// All nonempty variable subsets, by size then lexicographically.
pub fn subsets_size_then_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=n {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            out.push(subset.clone());
            // advance to the next lexicographic size-subset
            let mut i = size;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if subset[i] != i + n - size {
                    subset[i] += 1;
                    for j in i + 1..size {
                        subset[j] = subset[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}

fn try_restriction(system: &PolySystem, kept: &[usize]) -> Option<Vec<ExactScalar>> {
    let restricted: Vec<Poly> = system.polys.iter().map(|p| p.restrict(kept)).collect();
    let rsys = PolySystem::new(system.nvars, restricted);
    let gb = groebner_basis(&rsys);
    if gb
        .iter()
        .any(|p| p.leading().map(|(m, _)| m.iter().all(|&e| e == 0)).unwrap_or(false))
    {
        return None; // inconsistent over C
    }
    let vals = solve_recognized(system.nvars, kept, &gb)?;
    if system.eval_all_zero(&vals) {
        Some(vals)
    } else {
        None
    }
}

/// All restricted subsystems in search order, serialized in the polynomial
/// grammar; used by the CLI --dump-systems flag.
pub fn dump_restrictions(system: &PolySystem) -> Vec<String> {
    subsets_size_then_lex(system.nvars)
        .into_iter()
        .map(|subset| {
            let restricted: Vec<String> = system
                .polys
                .iter()
                .map(|p| p.restrict(&subset).to_string())
                .collect();
            format!(
                "keep {{{}}}: {}",
                subset.iter().map(|j| format!("T{}", j + 1)).collect::<Vec<_>>().join(","),
                restricted.join("; ")
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in terms {
            out.add_term(m.to_vec(), rat_int(*c));
        }
        out
    }

    #[test]
    fn groebner_simple() {
        // {T² − 2} is already a basis.
        let s = PolySystem::new(1, vec![p(1, &[(&[2], 1), (&[0], -2)])]);
        let gb = groebner_basis(&s);
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0], p(1, &[(&[2], 1), (&[0], -2)]));
        // {T₁ − 1, T₁ − 2} is inconsistent: basis {1}.
        let s2 = PolySystem::new(1, vec![p(1, &[(&[1], 1), (&[0], -1)]), p(1, &[(&[1], 1), (&[0], -2)])]);
        let gb2 = groebner_basis(&s2);
        assert_eq!(gb2.len(), 1);
        assert!(gb2[0].leading().unwrap().0.iter().all(|&e| e == 0));
        assert!(!solvable_over_c(&s2));
    }

    #[test]
    fn groebner_elimination() {
        // {T₁T₂ − 1, T₁² − T₂} eliminates to T₂³ − 1.
        let s = PolySystem::new(
            2,
            vec![p(2, &[(&[1, 1], 1), (&[0, 0], -1)]), p(2, &[(&[2, 0], 1), (&[0, 1], -1)])],
        );
        let gb = groebner_basis(&s);
        let elim = p(2, &[(&[0, 3], 1), (&[0, 0], -1)]);
        assert!(gb.contains(&elim), "basis: {gb:?}");
        assert!(solvable_over_c(&s));
    }

    #[test]
    fn groebner_idempotent() {
        let s = PolySystem::new(
            2,
            vec![p(2, &[(&[1, 1], 1), (&[0, 0], -1)]), p(2, &[(&[2, 0], 1), (&[0, 1], -1)])],
        );
        let gb = groebner_basis(&s);
        let gb2 = groebner_basis(&PolySystem::new(2, gb.clone()));
        assert_eq!(gb, gb2);
    }

    #[test]
    fn spoly_reductions_vanish() {
        let s = PolySystem::new(
            2,
            vec![p(2, &[(&[1, 1], 1), (&[0, 0], -1)]), p(2, &[(&[2, 0], 1), (&[0, 1], -1)])],
        );
        let gb = groebner_basis(&s);
        for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                let s = s_poly(&gb[i], &gb[j]);
                assert!(normal_form(&s, &gb).is_zero());
            }
        }
    }

    #[test]
    fn solvable_examples() {
        // T² + 1 is solvable over C.
        let s = PolySystem::new(1, vec![p(1, &[(&[2], 1), (&[0], 1)])]);
        assert!(solvable_over_c(&s));
        // {T², T − 1} is not.
        let s2 = PolySystem::new(1, vec![p(1, &[(&[2], 1)]), p(1, &[(&[1], 1), (&[0], -1)])]);
        assert!(!solvable_over_c(&s2));
        // The empty system is.
        let s3 = PolySystem::new(0, vec![]);
        assert!(solvable_over_c(&s3));
    }

    #[test]
    fn structured_examples() {
        // {T₁² − 2, T₂} → T₁ = √2, T₂ = 0.
        let s = PolySystem::new(2, vec![p(2, &[(&[2, 0], 1), (&[0, 0], -2)]), p(2, &[(&[0, 1], 1)])]);
        let sol = structured_solve(&s).unwrap();
        assert_eq!(sol.values[0], ExactScalar::sqrt_rational(&rat_int(2)));
        assert!(sol.values[1].is_zero());
        // {T₁² + 1} → T₁ = i.
        let s2 = PolySystem::new(1, vec![p(1, &[(&[2], 1), (&[0], 1)])]);
        let sol2 = structured_solve(&s2).unwrap();
        assert_eq!(sol2.values[0], ExactScalar::i());
        // {T₁² − 2, T₂ − 3T₁²} → T₁ = √2, T₂ = 6.
        let s3 = PolySystem::new(
            2,
            vec![p(2, &[(&[2, 0], 1), (&[0, 0], -2)]), p(2, &[(&[0, 1], 1), (&[2, 0], -3)])],
        );
        let sol3 = structured_solve(&s3).unwrap();
        assert_eq!(sol3.values[0], ExactScalar::sqrt_rational(&rat_int(2)));
        assert_eq!(sol3.values[1], ExactScalar::from_int(6));
        assert!(s3.eval_all_zero(&sol3.values));
    }

    #[test]
    fn structured_failure_is_reported() {
        // x + y − 1 = 0 with x², y² forced zero: no recognized-shape
        // restriction satisfies the full system.
        let s = PolySystem::new(
            2,
            vec![
                p(2, &[(&[2, 0], 1)]),
                p(2, &[(&[0, 2], 1)]),
                p(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], -1)]),
            ],
        );
        assert!(matches!(structured_solve(&s), Err(LieError::NoSolutionFound(_))));
    }

    #[test]
    fn restriction_order_is_size_then_lex() {
        let s = PolySystem::new(3, vec![p(3, &[(&[1, 0, 0], 1)])]);
        let dumps = dump_restrictions(&s);
        assert!(dumps[0].starts_with("keep {T1}"));
        assert!(dumps[1].starts_with("keep {T2}"));
        assert!(dumps[2].starts_with("keep {T3}"));
        assert!(dumps[3].starts_with("keep {T1,T2}"));
        assert!(dumps[4].starts_with("keep {T1,T3}"));
        assert!(dumps[5].starts_with("keep {T2,T3}"));
        assert!(dumps[6].starts_with("keep {T1,T2,T3}"));
    }
}

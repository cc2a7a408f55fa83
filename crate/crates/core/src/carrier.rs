//! Carrier algebras of nilpotent elements in 𝔭^c and the catalog of
//! nonzero nilpotent K^c-orbits.
//!
//! A carrier is the Z-graded semisimple subalgebra s(e,t) attached to a
//! nilpotent e: with t a maximal torus of the normalizer N₀(e) and μ the
//! weight of e, the graded pieces are a_k = {x : [t,x] = kμ(t)x} and
//! s = [a,a]. Orbits biject with conjugacy classes of such subalgebras, so
//! the catalog is built by searching the 𝔥₀^c-weight lines for standard
//! carrier candidates and keeping those that really are the carrier of
//! their own general-position element.

use crate::error::LieError;
use crate::exact::{rat_int, ExactScalar, Rat};
use crate::linalg::{Mat, Span};
use crate::realform::{scale, weight_lines, Parity, RealForm, WeightLine};
use crate::rootsystem::{classify_cartan, type_string, Element, SimpleType};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Normalized simple-root datum of a carrier.
#[derive(Debug, Clone)]
pub struct CarrierSimple {
    /// Raw weight line carrying e (kept for the adapted-basis case split).
    pub line_e: WeightLine,
    pub line_f: WeightLine,
    /// Normalized sl2-style generators: [k,e] = 2e, [e,f] = k, [k,f] = −2f.
    pub e: Element,
    pub f: Element,
    pub k: Element,
    /// Homogeneity degree ε ∈ {0,1}.
    pub degree: i64,
    /// Weight over the cartan0 basis of the form.
    pub weight: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct CarrierAlgebra {
    /// Graded components s_k, each a list of weight vectors.
    pub components: BTreeMap<i64, Vec<Element>>,
    /// Defining element H = h/2.
    pub defining: Element,
    /// Basis of the Cartan subalgebra 𝔥₀^c ∩ s₀.
    pub cartan: Vec<Element>,
    pub simples: Vec<CarrierSimple>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub comps: Vec<(SimpleType, usize)>,
    pub principal: bool,
}

impl CarrierAlgebra {
    pub fn dim(&self) -> usize {
        self.components.values().map(|v| v.len()).sum()
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn type_string(&self) -> String {
        type_string(&self.comps)
    }

    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        self.components
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, v)| (*k, v.len()))
            .collect()
    }

    pub fn basis(&self) -> Vec<Element> {
        self.components.values().flatten().cloned().collect()
    }

    pub fn component(&self, k: i64) -> &[Element] {
        self.components.get(&k).map_or(&[], |v| v.as_slice())
    }
}

/// `true` iff every simple root has degree 1; asserts that s₀ is then a
/// torus (abelian, equal to the Cartan part).
pub fn is_principal(c: &CarrierAlgebra) -> bool {
    if c.simples.iter().all(|s| s.degree == 1) {
        assert_eq!(
            c.component(0).len(),
            c.cartan.len(),
            "principal carrier must have toral s₀"
        );
        true
    } else {
        false
    }
}

/// Catalog entry: a carrier with a homogeneous sl2-triple through a
/// general-position element of s₁.
#[derive(Debug, Clone)]
pub struct OrbitEntry {
    pub carrier: CarrierAlgebra,
    pub f: Element,
    pub h: Element,
    pub e: Element,
    pub key: OrbitKey,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitKey {
    pub type_string: String,
    pub graded_dims: Vec<(i64, usize)>,
    /// Lexicographically minimal coordinates of the defining element over
    /// its Weyl(𝔨^c)-orbit, serialized.
    pub defining: Vec<String>,
}

/// N₀(e) = {x ∈ 𝔨^c : [x,e] ∈ Ce}, as a basis over the model.
pub fn normalizer_n0(form: &RealForm, e: &[ExactScalar]) -> Result<Vec<Element>, LieError> {
    if e.iter().all(|c| c.is_zero()) {
        return Err(LieError::Invalid("normalizer of the zero element".into()));
    }
    if !form.in_p(e) {
        return Err(LieError::Invalid("element must lie in 𝔭^c".into()));
    }
    if !form.model.is_ad_nilpotent(e) {
        return Err(LieError::Invalid("element must be nilpotent".into()));
    }
    let dim = form.model.dim;
    let nk = form.kbasis.len();
    // Columns: [K_i, e] for each 𝔨^c basis vector, then −e; kernel rows
    // give the coefficients (c, λ) with [Σ c_i K_i, e] = λ e.
    let mut cols: Vec<Vec<ExactScalar>> = Vec::with_capacity(nk + 1);
    for kb in &form.kbasis {
        cols.push(form.model.bracket(kb, e));
    }
    cols.push(e.iter().map(|c| -c).collect());
    let m = Mat::from_cols(cols);
    let mut out = Vec::new();
    for ker in m.kernel() {
        let mut x = vec![ExactScalar::zero(); dim];
        for (i, c) in ker.iter().take(nk).enumerate() {
            if !c.is_zero() {
                for (j, b) in form.kbasis[i].iter().enumerate() {
                    x[j] = &x[j] + &(b * c);
                }
            }
        }
        if x.iter().any(|c| !c.is_zero()) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Minimal polynomial of a matrix, monic, constant term first.
fn minimal_polynomial(m: &Mat<ExactScalar>) -> Vec<ExactScalar> {
    let n = m.rows;
    let mut rows: Vec<(usize, Vec<ExactScalar>, Vec<ExactScalar>)> = Vec::new();
    let mut power: Mat<ExactScalar> = Mat::identity(n);
    for deg in 0.. {
        // Reduce against recorded rows, tracking the combination.
        let mut w = power.data.clone();
        let mut combo = vec![ExactScalar::zero(); deg + 1];
        combo[deg] = ExactScalar::one();
        for (pivot, row, rcombo) in &rows {
            if !w[*pivot].is_zero() {
                let fct = &w[*pivot] / &row[*pivot];
                for j in 0..n * n {
                    if !row[j].is_zero() {
                        let sub = &fct * &row[j];
                        w[j] = &w[j] - &sub;
                    }
                }
                for (j, rc) in rcombo.iter().enumerate() {
                    let sub = &fct * rc;
                    combo[j] = &combo[j] - &sub;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => {
                // Σ combo_j A^j = 0 with combo_deg = 1.
                return combo;
            }
            Some(pivot) => {
                rows.push((pivot, w, combo));
            }
        }
        power = power.matmul(m);
    }
    unreachable!()
}

fn poly_deriv(p: &[ExactScalar]) -> Vec<ExactScalar> {
    (1..p.len())
        .map(|i| p[i].mul_rat(&rat_int(i as i64)))
        .collect()
}

fn poly_divmod(a: &[ExactScalar], b: &[ExactScalar]) -> (Vec<ExactScalar>, Vec<ExactScalar>) {
    let mut r: Vec<ExactScalar> = a.to_vec();
    let trim = |v: &mut Vec<ExactScalar>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let mut q = vec![ExactScalar::zero(); r.len().saturating_sub(b.len() - 1)];
    while r.len() >= b.len() && !b.is_empty() {
        let lead = &r[r.len() - 1] / &b[b.len() - 1];
        let shift = r.len() - b.len();
        q[shift] = lead.clone();
        for (j, bj) in b.iter().enumerate() {
            let sub = &lead * bj;
            r[shift + j] = &r[shift + j] - &sub;
        }
        trim(&mut r);
    }
    (q, r)
}

fn poly_gcd(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    let trim = |v: &mut Vec<ExactScalar>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    // monic
    if let Some(lead) = x.last().cloned() {
        let inv = lead.inverse().expect("nonzero leading coefficient");
        for c in x.iter_mut() {
            *c = &*c * &inv;
        }
    }
    x
}

fn poly_eval_matrix(p: &[ExactScalar], m: &Mat<ExactScalar>) -> Mat<ExactScalar> {
    let n = m.rows;
    let mut acc = Mat::zeros(n, n);
    // Horner scheme.
    for c in p.iter().rev() {
        acc = acc.matmul(m);
        for i in 0..n {
            acc[(i, i)] = &acc[(i, i)] + c;
        }
    }
    acc
}

/// The semisimple part of v in the abstract Jordan decomposition: Newton
/// iteration on ad(v) towards the root of the squarefree part of its
/// minimal polynomial, pulled back through ad.
pub fn semisimple_part(form: &RealForm, v: &[ExactScalar]) -> Result<Element, LieError> {
    let model = &form.model;
    let a = model.ad(v);
    let m = minimal_polynomial(&a);
    let md = poly_deriv(&m);
    let g = poly_gcd(&m, &md);
    if g.len() <= 1 {
        return Ok(v.to_vec()); // squarefree minimal polynomial: already semisimple
    }
    let (mred, rem) = poly_divmod(&m, &g);
    assert!(rem.is_empty());
    let mredd = poly_deriv(&mred);
    let mut s = a.clone();
    for _ in 0..64 {
        let val = poly_eval_matrix(&mred, &s);
        if val.is_zero_matrix() {
            break;
        }
        let dval = poly_eval_matrix(&mredd, &s);
        let dinv = dval
            .inverse()
            .ok_or_else(|| LieError::Invalid("Jordan Newton step not invertible".into()))?;
        let corr = val.matmul(&dinv);
        for i in 0..s.rows {
            for j in 0..s.cols {
                s[(i, j)] = &s[(i, j)] - &corr[(i, j)];
            }
        }
    }
    assert!(poly_eval_matrix(&mred, &s).is_zero_matrix(), "Newton did not converge");
    // Solve ad(x) = S.
    let dim = model.dim;
    let mut cols: Vec<Vec<ExactScalar>> = Vec::with_capacity(dim);
    for i in 0..dim {
        cols.push(model.ad(&model.basis_vec(i)).data);
    }
    let sys = Mat::from_cols(cols);
    let x = sys
        .solve(&s.data)
        .ok_or_else(|| LieError::Invalid("semisimple part escapes the algebra".into()))?;
    Ok(x)
}

/// Maximal toral subalgebra of n₀ extending the seed: greedily adjoins
/// semisimple parts of centralizer elements; on return the complement of
/// the torus in its centralizer carries no semisimple element.
pub fn maximal_torus(
    form: &RealForm,
    n0: &[Element],
    seed: &[Element],
) -> Result<Vec<Element>, LieError> {
    let model = &form.model;
    let dim = model.dim;
    let mut torus: Vec<Element> = Vec::new();
    let mut tspan = Span::new(dim);
    for s in seed {
        if tspan.insert(s) {
            torus.push(s.clone());
        }
    }
    loop {
        // Centralizer of the torus inside n₀.
        let z: Vec<Element> = if torus.is_empty() {
            n0.to_vec()
        } else {
            let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
            for v in n0 {
                let mut row = Vec::new();
                for t in &torus {
                    row.extend(model.bracket(t, v));
                }
                rows.push(row);
            }
            let m = Mat::from_cols(rows);
            m.kernel()
                .into_iter()
                .map(|combo| {
                    let mut x = vec![ExactScalar::zero(); dim];
                    for (i, c) in combo.iter().enumerate() {
                        if !c.is_zero() {
                            for (j, b) in n0[i].iter().enumerate() {
                                x[j] = &x[j] + &(b * c);
                            }
                        }
                    }
                    x
                })
                .collect()
        };
        let mut extended = false;
        for v in &z {
            if tspan.contains(v) {
                continue;
            }
            if model.is_ad_nilpotent(v) {
                continue;
            }
            let vs = semisimple_part(form, v)?;
            if !tspan.contains(&vs) {
                tspan.insert(&vs);
                torus.push(vs);
                extended = true;
                break;
            }
        }
        if !extended {
            // Maximality: every centralizer direction outside the torus
            // must have its semisimple part inside the torus.
            for v in &z {
                if tspan.contains(v) {
                    continue;
                }
                let vs = semisimple_part(form, v)?;
                if !tspan.contains(&vs) {
                    return Err(LieError::Invalid("torus extension missed".into()));
                }
            }
            return Ok(torus);
        }
    }
}

/// Context for coordinate computations inside a subspace: the subspace
/// basis completed to a basis of the model, inverted once.
struct SubspaceCoords {
    dim_sub: usize,
    inv: Mat<ExactScalar>,
}

impl SubspaceCoords {
    fn new(dim: usize, basis: &[Element]) -> Result<Self, LieError> {
        let mut cols: Vec<Element> = basis.to_vec();
        let mut span = Span::new(dim);
        for b in basis {
            if !span.insert(b) {
                return Err(LieError::Invalid("dependent subspace basis".into()));
            }
        }
        for i in 0..dim {
            let mut v = vec![ExactScalar::zero(); dim];
            v[i] = ExactScalar::one();
            if span.insert(&v) {
                cols.push(v);
            }
        }
        let m = Mat::from_cols(cols);
        let inv = m
            .inverse()
            .ok_or_else(|| LieError::Invalid("basis completion failed".into()))?;
        Ok(SubspaceCoords { dim_sub: basis.len(), inv })
    }

    /// Coordinates over the subspace basis; None if v is outside.
    fn coords(&self, v: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
        let full = self.inv.apply(v);
        if full[self.dim_sub..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(full[..self.dim_sub].to_vec())
    }
}

/// Ratio c with [h, v] = c·v; None when v is not an eigenvector.
fn eigen_ratio(model: &crate::rootsystem::ChevalleyModel, h: &[ExactScalar], v: &[ExactScalar]) -> Option<ExactScalar> {
    let hv = model.bracket(h, v);
    let k = v.iter().position(|c| !c.is_zero())?;
    let c = &hv[k] / &v[k];
    if scale(v, &c) == hv {
        Some(c)
    } else {
        None
    }
}

/// The carrier algebra s(e, t) of a nilpotent e ∈ 𝔭^c relative to a torus
/// t ⊆ 𝔥₀^c normalizing the line of e.
pub fn carrier_of(
    form: &RealForm,
    e: &[ExactScalar],
    torus: &[Element],
) -> Result<CarrierAlgebra, LieError> {
    let model = &form.model;
    let cartanctx = SubspaceCoords::new(model.dim, &form.cartan0)?;
    // The torus must be inside 𝔥₀^c for the standard carrier construction.
    let torus_coords: Vec<Vec<ExactScalar>> = torus
        .iter()
        .map(|t| {
            cartanctx
                .coords(t)
                .ok_or_else(|| LieError::Invalid("torus not inside 𝔥₀^c".into()))
        })
        .collect::<Result<_, _>>()?;
    // μ(t_j) from [t_j, e] = μ_j e.
    let mut mu = Vec::with_capacity(torus.len());
    for t in torus {
        let c = eigen_ratio(model, t, e)
            .ok_or_else(|| LieError::Invalid("torus does not normalize the line of e".into()))?;
        let r = c
            .as_rational()
            .ok_or_else(|| LieError::Invalid("torus weight of e is not rational".into()))?;
        mu.push(r);
    }
    if mu.iter().all(|m| m.is_zero()) {
        return Err(LieError::Invalid("the torus annihilates e".into()));
    }

    // Weight lines bucketed into a_k by their torus-restricted weight.
    let lines = weight_lines(form);
    let line_weight_on_torus = |line: &WeightLine| -> Vec<Rat> {
        torus_coords
            .iter()
            .map(|tc| {
                let mut acc = Rat::zero();
                for (w, c) in line.weight.iter().zip(tc) {
                    acc += w * &c.as_rational().expect("cartan0 coordinates are rational");
                }
                acc
            })
            .collect()
    };
    let mut a: BTreeMap<i64, Vec<WeightLine>> = BTreeMap::new();
    let kmax = model.dim as i64;
    for line in &lines {
        let tw = line_weight_on_torus(line);
        for k in -kmax..=kmax {
            if k == 0 {
                continue;
            }
            let expect: Vec<Rat> = mu.iter().map(|m| m * rat_int(k)).collect();
            let parity_ok = match line.parity {
                Parity::K => k % 2 == 0,
                Parity::P => k % 2 != 0,
            };
            if parity_ok && tw == expect {
                a.entry(k).or_default().push(line.clone());
            }
        }
        // k = 0 requires weight 0 on the torus and even parity; nonzero
        // 𝔥₀-weight lines may still restrict to 0 on a smaller torus.
        if line.parity == Parity::K && line_weight_on_torus(line).iter().all(|x| x.is_zero()) {
            a.entry(0).or_default().push(line.clone());
        }
    }

    // s = [a, a], closed under brackets, bucketed by degree and full weight.
    let mut buckets: BTreeMap<(i64, Vec<Rat>), Vec<Element>> = BTreeMap::new();
    let full_weight = |line: &WeightLine| line.weight.clone();
    let mut pairs: Vec<(i64, Vec<Rat>, Element)> = Vec::new();
    for (&k, ls) in &a {
        for l in ls {
            pairs.push((k, full_weight(l), l.vector.clone()));
        }
    }
    // Include the Cartan directions of a_0 (all of 𝔥₀^c acts in degree 0).
    for h in &form.cartan0 {
        pairs.push((0, vec![Rat::zero(); form.cartan0.len()], h.clone()));
    }
    let mut closure: Vec<(i64, Vec<Rat>, Element)> = Vec::new();
    let mut spans: BTreeMap<(i64, Vec<Rat>), Span<ExactScalar>> = BTreeMap::new();
    let mut frontier: Vec<(i64, Vec<Rat>, Element)> = Vec::new();
    for (i, (k1, w1, v1)) in pairs.iter().enumerate() {
        for (k2, w2, v2) in pairs.iter().skip(i + 1) {
            let br = model.bracket(v1, v2);
            if br.iter().all(|c| c.is_zero()) {
                continue;
            }
            let k = k1 + k2;
            let w: Vec<Rat> = w1.iter().zip(w2).map(|(a, b)| a + b).collect();
            frontier.push((k, w, br));
        }
    }
    while let Some((k, w, v)) = frontier.pop() {
        let span = spans
            .entry((k, w.clone()))
            .or_insert_with(|| Span::new(model.dim));
        if !span.insert(&v) {
            continue;
        }
        closure.push((k, w.clone(), v.clone()));
        // Bracket the new vector against all of a.
        for (k2, w2, v2) in &pairs {
            let br = model.bracket(&v, v2);
            if br.iter().all(|c| c.is_zero()) {
                continue;
            }
            let nk = k + k2;
            let nw: Vec<Rat> = w.iter().zip(w2).map(|(a, b)| a + b).collect();
            frontier.push((nk, nw, br));
        }
    }
    for (k, w, v) in closure {
        buckets.entry((k, w)).or_default().push(v);
    }

    finish_carrier(form, e, buckets)
}

/// Validates the graded weight-bucket span as a carrier algebra and
/// assembles the structured data.
fn finish_carrier(
    form: &RealForm,
    e: &[ExactScalar],
    buckets: BTreeMap<(i64, Vec<Rat>), Vec<Element>>,
) -> Result<CarrierAlgebra, LieError> {
    let model = &form.model;
    let dim = model.dim;
    let zero_w = vec![Rat::zero(); form.cartan0.len()];
    // Nonzero-weight buckets must be single lines.
    for ((k, w), v) in &buckets {
        if w != &zero_w && v.len() != 1 {
            return Err(LieError::Invalid("weight space of the carrier not 1-dimensional".into()));
        }
        let parity_ok = match k % 2 == 0 {
            true => v.iter().all(|x| form.in_k(x)),
            false => v.iter().all(|x| form.in_p(x)),
        };
        if !parity_ok {
            return Err(LieError::Invalid("graded component in the wrong parity space".into()));
        }
    }
    let mut components: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
    for ((k, _), v) in &buckets {
        components.entry(*k).or_default().extend(v.iter().cloned());
    }
    let sbasis: Vec<Element> = components.values().flatten().cloned().collect();
    let sdim = sbasis.len();
    if sdim == 0 {
        return Err(LieError::Invalid("empty carrier".into()));
    }
    let ctx = SubspaceCoords::new(dim, &sbasis)?;
    // Subalgebra closure and derived-algebra equality: [s,s] spans s.
    let mut derived = Span::new(dim);
    for (i, a) in sbasis.iter().enumerate() {
        for b in sbasis.iter().skip(i + 1) {
            let br = model.bracket(a, b);
            if ctx.coords(&br).is_none() {
                return Err(LieError::Invalid("carrier candidate not closed under brackets".into()));
            }
            derived.insert(&br);
        }
    }
    if derived.rank() != sdim {
        return Err(LieError::Invalid("carrier is not equal to its derived algebra".into()));
    }
    // Semisimplicity: Killing form of s nondegenerate.
    let ads: Vec<Mat<ExactScalar>> = sbasis
        .iter()
        .map(|b| {
            let mut m = Mat::zeros(sdim, sdim);
            for (j, c) in sbasis.iter().enumerate() {
                let coords = ctx.coords(&model.bracket(b, c)).expect("closed");
                for (i, x) in coords.into_iter().enumerate() {
                    m[(i, j)] = x;
                }
            }
            m
        })
        .collect();
    let mut kill = Mat::zeros(sdim, sdim);
    for i in 0..sdim {
        for j in i..sdim {
            let mut tr = ExactScalar::zero();
            for p in 0..sdim {
                for q in 0..sdim {
                    if !ads[i][(p, q)].is_zero() && !ads[j][(q, p)].is_zero() {
                        tr = &tr + &(&ads[i][(p, q)] * &ads[j][(q, p)]);
                    }
                }
            }
            kill[(i, j)] = tr.clone();
            kill[(j, i)] = tr;
        }
    }
    if kill.det().is_zero() {
        return Err(LieError::Invalid("carrier candidate is not semisimple".into()));
    }
    // dim s₀ = dim s₁.
    let d0 = components.get(&0).map_or(0, |v| v.len());
    let d1 = components.get(&1).map_or(0, |v| v.len());
    if d0 != d1 {
        return Err(LieError::Invalid(format!("dim s₀ = {d0} ≠ dim s₁ = {d1}")));
    }
    // e in s₁ and in general position.
    let s1 = components.get(&1).cloned().unwrap_or_default();
    let s0 = components.get(&0).cloned().unwrap_or_default();
    let s1ctx = SubspaceCoords::new(dim, &s1)?;
    if s1ctx.coords(e).is_none() {
        return Err(LieError::Invalid("e is not in s₁".into()));
    }
    let mut image = Span::new(dim);
    for x in &s0 {
        image.insert(&model.bracket(x, e));
    }
    if image.rank() != d1 {
        return Err(LieError::Invalid("e is not in general position".into()));
    }
    // Defining element: H ∈ s₀ with [H, b] = k·b on every graded piece;
    // the linear system is built column-wise in the unknown over s₀.
    let ns0 = s0.len();
    let mut sys_cols: Vec<Vec<ExactScalar>> = vec![Vec::new(); ns0];
    let mut sys_rhs: Vec<ExactScalar> = Vec::new();
    for (k, vs) in &components {
        for v in vs {
            for (j, x0) in s0.iter().enumerate() {
                let br = model.bracket(x0, v);
                sys_cols[j].extend(br);
            }
            sys_rhs.extend(v.iter().map(|c| c.mul_rat(&rat_int(*k))));
        }
    }
    let sys = Mat::from_cols(sys_cols);
    let csol = sys
        .solve(&sys_rhs)
        .ok_or_else(|| LieError::Invalid("no defining element".into()))?;
    let mut defining = vec![ExactScalar::zero(); dim];
    for (j, c) in csol.iter().enumerate() {
        if !c.is_zero() {
            for (t, b) in s0[j].iter().enumerate() {
                defining[t] = &defining[t] + &(b * c);
            }
        }
    }
    // Cartan subalgebra 𝔥₀^c ∩ s₀ = the zero-weight, degree-0 bucket.
    let cartan = buckets
        .get(&(0, zero_w.clone()))
        .cloned()
        .unwrap_or_default();
    if cartan.is_empty() {
        return Err(LieError::Invalid("carrier has no Cartan part".into()));
    }
    // The defining element must lie in the Cartan part.
    let cartanctx = SubspaceCoords::new(dim, &cartan)?;
    if cartanctx.coords(&defining).is_none() {
        return Err(LieError::Invalid("defining element outside 𝔥₀^c ∩ s₀".into()));
    }
    // Simple roots: positive = (deg, weight) lexicographically positive;
    // simple = positive not a sum of two positives.
    let mut root_buckets: Vec<(i64, Vec<Rat>, Element)> = buckets
        .iter()
        .filter(|((_, w), _)| w != &zero_w)
        .map(|((k, w), v)| (*k, w.clone(), v[0].clone()))
        .collect();
    // Restriction of the weight to the Cartan part must be nonzero.
    for (_, w, _) in &root_buckets {
        let nonzero = cartan.iter().any(|c| {
            let coords = SubspaceCoords::new(dim, &form.cartan0)
                .ok()
                .and_then(|cc| cc.coords(c));
            match coords {
                Some(cc) => {
                    let mut acc = Rat::zero();
                    for (wi, ci) in w.iter().zip(&cc) {
                        acc += wi * &ci.as_rational().unwrap_or_else(Rat::zero);
                    }
                    !acc.is_zero()
                }
                None => false,
            }
        });
        if !nonzero {
            return Err(LieError::Invalid(
                "carrier root restricts to zero on its Cartan".into(),
            ));
        }
    }
    let is_pos = |k: i64, w: &[Rat]| -> bool {
        if k != 0 {
            return k > 0;
        }
        for x in w {
            if !x.is_zero() {
                return x > &Rat::zero();
            }
        }
        false
    };
    root_buckets.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let positives: Vec<&(i64, Vec<Rat>, Element)> =
        root_buckets.iter().filter(|(k, w, _)| is_pos(*k, w)).collect();
    let mut simples_raw: Vec<&(i64, Vec<Rat>, Element)> = Vec::new();
    for cand in &positives {
        let mut is_sum = false;
        for p1 in &positives {
            for p2 in &positives {
                if p1.0 + p2.0 == cand.0 {
                    let sum: Vec<Rat> = p1.1.iter().zip(&p2.1).map(|(a, b)| a + b).collect();
                    if sum == cand.1 {
                        is_sum = true;
                    }
                }
            }
        }
        if !is_sum {
            simples_raw.push(cand);
        }
    }
    if 2 * positives.len() != root_buckets.len() {
        return Err(LieError::Invalid("carrier roots are not symmetric".into()));
    }
    // Normalize canonical generators.
    let line_lookup = |w: &[Rat], parity: Parity| -> Option<WeightLine> {
        weight_lines(form)
            .into_iter()
            .find(|l| l.weight == w && l.parity == parity)
    };
    let mut simples = Vec::new();
    for (k, w, v) in &simples_raw {
        if *k != 0 && *k != 1 {
            return Err(LieError::Invalid(format!("simple root of degree {k} (must be 0 or 1)")));
        }
        let neg_w: Vec<Rat> = w.iter().map(|x| -x.clone()).collect();
        let fv = buckets
            .get(&(-k, neg_w.clone()))
            .map(|v| v[0].clone())
            .ok_or_else(|| LieError::Invalid("missing opposite root space".into()))?;
        let t = model.bracket(v, &fv);
        let c = eigen_ratio(model, &t, v)
            .and_then(|c| c.as_rational())
            .ok_or_else(|| LieError::Invalid("degenerate simple pair".into()))?;
        if c.is_zero() {
            return Err(LieError::Invalid("degenerate simple pair".into()));
        }
        let factor = ExactScalar::from_rat(rat_int(2) / &c);
        let kvec = scale(&t, &factor);
        let fnorm = scale(&fv, &factor);
        let parity = if *k % 2 == 0 { Parity::K } else { Parity::P };
        let line_e = line_lookup(w, parity).unwrap_or(WeightLine {
            weight: w.clone(),
            vector: v.clone(),
            parity,
            origin: crate::realform::LineOrigin::Root(0),
        });
        let line_f = line_lookup(&neg_w, parity).unwrap_or(WeightLine {
            weight: neg_w.clone(),
            vector: fv.clone(),
            parity,
            origin: crate::realform::LineOrigin::Root(0),
        });
        simples.push(CarrierSimple {
            line_e,
            line_f,
            e: v.clone(),
            f: fnorm,
            k: kvec,
            degree: *k,
            weight: w.clone(),
        });
    }
    // Cartan matrix C[i][j] = value of β_i on k_j.
    let s = simples.len();
    if s != cartan.len() {
        return Err(LieError::Invalid(format!(
            "carrier rank mismatch: {} simples vs Cartan dimension {}",
            s,
            cartan.len()
        )));
    }
    let mut cm = vec![vec![0i64; s]; s];
    for i in 0..s {
        for j in 0..s {
            let c = eigen_ratio(model, &simples[j].k, &simples[i].e)
                .and_then(|c| c.as_rational())
                .ok_or_else(|| LieError::Invalid("Cartan entry not rational".into()))?;
            if !c.is_integer() {
                return Err(LieError::Invalid("Cartan entry not integral".into()));
            }
            cm[i][j] = i64::try_from(c.to_integer()).unwrap();
            if i != j && cm[i][j] > 0 {
                return Err(LieError::Invalid("positive off-diagonal Cartan entry".into()));
            }
        }
        if cm[i][i] != 2 {
            return Err(LieError::Invalid("Cartan diagonal must be 2".into()));
        }
    }
    let comps = classify_cartan(&cm)?;
    // σ- and θ-stability of the carrier.
    for b in &sbasis {
        if ctx.coords(&form.sigma_apply(b)).is_none() {
            return Err(LieError::Invalid("carrier is not σ-stable".into()));
        }
        if ctx.coords(&form.theta_apply(b)).is_none() {
            return Err(LieError::Invalid("carrier is not θ-stable".into()));
        }
    }
    let principal = simples.iter().all(|x| x.degree == 1);
    if principal && components.get(&0).map_or(0, |v| v.len()) != cartan.len() {
        return Err(LieError::Invalid("principal carrier with non-toral s₀".into()));
    }
    Ok(CarrierAlgebra {
        components,
        defining,
        cartan,
        simples,
        cartan_matrix: cm,
        comps,
        principal,
    })
}

/// Solves [e, f] = h, [h, f] = −2f for f (the Jacobson-Morozov partner).
pub fn complete_triple(
    form: &RealForm,
    h: &[ExactScalar],
    e: &[ExactScalar],
) -> Result<Element, LieError> {
    let model = &form.model;
    let dim = model.dim;
    let ade = model.ad(e);
    let adh = model.ad(h);
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    let mut rhs: Vec<ExactScalar> = Vec::new();
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            row.push(ade[(i, j)].clone());
        }
        rows.push(row);
        rhs.push(h[i].clone());
    }
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut c = adh[(i, j)].clone();
            if i == j {
                c = &c + &ExactScalar::from_int(2);
            }
            row.push(c);
        }
        rows.push(row);
        rhs.push(ExactScalar::zero());
    }
    let m = Mat::from_rows(rows);
    m.solve(&rhs)
        .ok_or_else(|| LieError::Invalid("no sl2 completion for (h, e)".into()))
}

/// Enumerates the nonzero nilpotent K^c-orbits in 𝔭^c as carrier catalog
/// entries with homogeneous sl2-triples.
pub fn enumerate_orbits(form: &RealForm) -> Result<Vec<OrbitEntry>, LieError> {
    if form.is_compact() {
        return Ok(Vec::new());
    }
    let model = &form.model;
    let _dim = model.dim;
    let lines = weight_lines(form);
    let maxrank = form.cartan0.len();

    // Partner lookup: same parity, opposite weight.
    let partner = |l: &WeightLine| -> Option<usize> {
        let neg: Vec<Rat> = l.weight.iter().map(|x| -x.clone()).collect();
        lines
            .iter()
            .position(|m| m.weight == neg && m.parity == l.parity)
    };
    let partners: Vec<Option<usize>> = lines.iter().map(partner).collect();

    let mut found: BTreeMap<OrbitKey, OrbitEntry> = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = (0..lines.len()).map(|i| vec![i]).collect();
    while let Some(subset) = stack.pop() {
        if let Some(entry) = try_candidate(form, &lines, &partners, &subset)? {
            found.entry(entry.key.clone()).or_insert(entry);
        }
        if subset.len() < maxrank {
            let last = *subset.last().unwrap();
            for next in last + 1..lines.len() {
                let mut s = subset.clone();
                s.push(next);
                if quick_filter(form, &lines, &partners, &s) {
                    stack.push(s);
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Cheap pairwise filters for a candidate simple set.
fn quick_filter(
    form: &RealForm,
    lines: &[WeightLine],
    partners: &[Option<usize>],
    subset: &[usize],
) -> bool {
    let model = &form.model;
    // Weights linearly independent, pairwise sums nonzero, partners exist.
    let mut wmat: Vec<Vec<Rat>> = Vec::new();
    for &i in subset {
        if partners[i].is_none() {
            return false;
        }
        wmat.push(lines[i].weight.clone());
    }
    let m = Mat::from_rows(wmat);
    if m.rank() != subset.len() {
        return false;
    }
    for (a, &i) in subset.iter().enumerate() {
        for &j in subset.iter().skip(a + 1) {
            let sum: Vec<Rat> = lines[i]
                .weight
                .iter()
                .zip(&lines[j].weight)
                .map(|(x, y)| x + y)
                .collect();
            if sum.iter().all(|x| x.is_zero()) {
                return false;
            }
            // [e_i, f_j] = 0 (simple-system condition).
            let fj = &lines[partners[j].unwrap()];
            let br = model.bracket(&lines[i].vector, &fj.vector);
            if br.iter().any(|c| !c.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// Attempts to realize a line subset as a carrier catalog entry.
fn try_candidate(
    form: &RealForm,
    lines: &[WeightLine],
    partners: &[Option<usize>],
    subset: &[usize],
) -> Result<Option<OrbitEntry>, LieError> {
    let model = &form.model;
    let dim = model.dim;
    if !quick_filter(form, lines, partners, subset) {
        return Ok(None);
    }
    // Normalize generators; build Cartan integers.
    let mut gens: Vec<(Element, Element, Element, i64, Vec<Rat>)> = Vec::new();
    for &i in subset {
        let e = lines[i].vector.clone();
        let f = lines[partners[i].unwrap()].vector.clone();
        let t = model.bracket(&e, &f);
        let Some(c) = eigen_ratio(model, &t, &e).and_then(|c| c.as_rational()) else {
            return Ok(None);
        };
        if c.is_zero() {
            return Ok(None);
        }
        let factor = ExactScalar::from_rat(rat_int(2) / &c);
        let deg = match lines[i].parity {
            Parity::K => 0,
            Parity::P => 1,
        };
        gens.push((e, scale(&f, &factor), scale(&t, &factor), deg, lines[i].weight.clone()));
    }
    if gens.iter().all(|g| g.3 == 0) {
        return Ok(None);
    }
    // Cartan integers must be non-positive, integral, zero-symmetric,
    // and classifiable.
    let s = gens.len();
    let mut cm = vec![vec![0i64; s]; s];
    for i in 0..s {
        for j in 0..s {
            let Some(c) = eigen_ratio(model, &gens[j].2, &gens[i].0).and_then(|c| c.as_rational())
            else {
                return Ok(None);
            };
            if !c.is_integer() {
                return Ok(None);
            }
            cm[i][j] = i64::try_from(c.to_integer()).unwrap();
            if i != j && cm[i][j] > 0 {
                return Ok(None);
            }
        }
    }
    for i in 0..s {
        for j in 0..s {
            if (cm[i][j] == 0) != (cm[j][i] == 0) {
                return Ok(None);
            }
        }
    }
    if classify_cartan(&cm).is_err() {
        return Ok(None);
    }
    // General-position element in the closure's degree-1 part: start with
    // the sum of the degree-1 simple vectors.
    let mut e = vec![ExactScalar::zero(); dim];
    for g in &gens {
        if g.3 == 1 {
            for (t, c) in g.0.iter().enumerate() {
                e[t] = &e[t] + c;
            }
        }
    }
    if e.iter().all(|c| c.is_zero()) {
        return Ok(None);
    }
    if !form.model.is_ad_nilpotent(&e) {
        return Ok(None);
    }
    // Seed torus: N₀(e) ∩ 𝔥₀^c, then extend to a maximal torus.
    let n0 = normalizer_n0(form, &e)?;
    let seed = intersect_with_cartan(form, &n0)?;
    let torus = maximal_torus(form, &n0, &seed)?;
    let carrier = match carrier_of(form, &e, &torus) {
        Ok(c) => c,
        Err(_) => return Ok(None),
    };
    // The candidate generators must generate exactly this carrier: every
    // normalized generator must lie in it and the simple weights match.
    let sbasis = carrier.basis();
    let ctx = SubspaceCoords::new(dim, &sbasis)?;
    for g in &gens {
        if ctx.coords(&g.0).is_none() || ctx.coords(&g.1).is_none() {
            return Ok(None);
        }
    }
    if carrier.simples.len() != s {
        return Ok(None);
    }
    // Homogeneous triple through e.
    let h = scale(&carrier.defining, &ExactScalar::from_int(2));
    let f = complete_triple(form, &h, &e)?;
    validate_homogeneous(form, &f, &h, &e)?;
    let key = orbit_key(form, &carrier);
    Ok(Some(OrbitEntry { carrier, f, h, e, key }))
}

/// Basis of span(n0) ∩ 𝔥₀^c.
fn intersect_with_cartan(form: &RealForm, n0: &[Element]) -> Result<Vec<Element>, LieError> {
    let model = &form.model;
    let dim = model.dim;
    if n0.is_empty() {
        return Ok(Vec::new());
    }
    let mut cols: Vec<Element> = n0.to_vec();
    for c in &form.cartan0 {
        cols.push(c.iter().map(|x| -x).collect());
    }
    let m = Mat::from_cols(cols);
    let mut out = Vec::new();
    let mut span = Span::new(dim);
    for ker in m.kernel() {
        let mut x = vec![ExactScalar::zero(); dim];
        for (i, c) in ker.iter().take(n0.len()).enumerate() {
            if !c.is_zero() {
                for (j, b) in n0[i].iter().enumerate() {
                    x[j] = &x[j] + &(b * c);
                }
            }
        }
        if x.iter().any(|c| !c.is_zero()) && span.insert(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Validates a homogeneous sl2-triple: relations plus 𝔨/𝔭 membership.
pub fn validate_homogeneous(
    form: &RealForm,
    f: &[ExactScalar],
    h: &[ExactScalar],
    e: &[ExactScalar],
) -> Result<(), LieError> {
    let model = &form.model;
    let two_e = scale(e, &ExactScalar::from_int(2));
    let minus_two_f = scale(f, &ExactScalar::from_int(-2));
    if model.bracket(h, e) != two_e {
        return Err(LieError::Invalid("[h,e] ≠ 2e".into()));
    }
    if model.bracket(h, f) != minus_two_f {
        return Err(LieError::Invalid("[h,f] ≠ −2f".into()));
    }
    if model.bracket(e, f) != *h {
        return Err(LieError::Invalid("[e,f] ≠ h".into()));
    }
    if !form.in_p(e) || !form.in_p(f) {
        return Err(LieError::Invalid("e, f must lie in 𝔭^c".into()));
    }
    if !form.in_k(h) {
        return Err(LieError::Invalid("h must lie in 𝔨^c".into()));
    }
    Ok(())
}

/// Dedup key for catalog entries: carrier type, graded dimensions, and the
/// W(𝔨^c)-orbit-minimal coordinates of the defining element.
pub fn orbit_key(form: &RealForm, carrier: &CarrierAlgebra) -> OrbitKey {
    let model = &form.model;
    // Reflections of W(𝔨^c) from the 𝔨-parity weight lines.
    let lines = weight_lines(form);
    let mut reflections: Vec<(Vec<Rat>, Element)> = Vec::new();
    for l in &lines {
        if l.parity != Parity::K {
            continue;
        }
        let neg: Vec<Rat> = l.weight.iter().map(|x| -x.clone()).collect();
        if let Some(p) = lines.iter().find(|m| m.weight == neg && m.parity == Parity::K) {
            let t = model.bracket(&l.vector, &p.vector);
            if let Some(c) = eigen_ratio(model, &t, &l.vector).and_then(|c| c.as_rational()) {
                if !c.is_zero() {
                    let coroot = scale(&t, &ExactScalar::from_rat(rat_int(2) / &c));
                    reflections.push((l.weight.clone(), coroot));
                }
            }
        }
    }
    let weight_of = |h: &Element, w: &[Rat]| -> ExactScalar {
        // Value of the weight on h via cartan0 coordinates.
        let ctx = SubspaceCoords::new(model.dim, &form.cartan0).expect("cartan context");
        let coords = ctx.coords(h).expect("defining element inside 𝔥₀^c");
        let mut acc = ExactScalar::zero();
        for (wi, ci) in w.iter().zip(&coords) {
            acc = &acc + &ci.mul_rat(wi);
        }
        acc
    };
    let mut orbit: Vec<Element> = vec![carrier.defining.clone()];
    let mut i = 0;
    while i < orbit.len() {
        let h = orbit[i].clone();
        for (w, coroot) in &reflections {
            let val = weight_of(&h, w);
            if val.is_zero() {
                continue;
            }
            let img: Element = h
                .iter()
                .zip(coroot)
                .map(|(a, b)| a - &(b * &val))
                .collect();
            if !orbit.contains(&img) {
                orbit.push(img);
            }
        }
        i += 1;
        assert!(orbit.len() <= 4096, "Weyl orbit runaway");
    }
    let minimal = orbit
        .into_iter()
        .min_by(|a, b| {
            for (x, y) in a.iter().zip(b.iter()) {
                let ord = x.canonical_cmp(y);
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
        .unwrap();
    OrbitKey {
        type_string: carrier.type_string(),
        graded_dims: carrier.graded_dims(),
        defining: minimal.iter().map(|c| c.to_string()).collect(),
    }
}

//! Deciding isomorphism of two real forms of the same complex simple
//! algebra and constructing a Cartan-decomposition-preserving isomorphism:
//! the Weyl-group parameter reduction to standard form for inner type, the
//! four-step Cartan/basis normalization for outer type, and the final
//! generator scaling μ_i making ψ compatible with σ and σ'.

use crate::error::LieError;
use crate::exact::{rat_int, ExactScalar};
use crate::realform::{scale, InvolutionKind, RealForm};
use crate::rootsystem::{
    extend_from_generators, permutations, ChevalleyModel, Element, ModelMap, SimpleType,
};

/// A reduction move: a simple reflection from W_θ, or a diagram symmetry
/// relabeling the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Weyl(usize),
    Diagram(Vec<usize>),
}

/// Basis-of-simple-roots state: canonical generators, their root labels,
/// and the θ-parameters, maintained through reduction moves.
#[derive(Debug, Clone)]
pub struct ParameterState {
    pub gens: Vec<(Element, Element, Element)>,
    /// Root index of each current simple root.
    pub simples: Vec<usize>,
    pub lambda: Vec<i64>,
    pub pi: Vec<usize>,
    pub log: Vec<Move>,
}

/// Reads λ and π of θ on a generator set: θ(a_i) = λ_i a_{π(i)}.
fn read_parameters(
    form: &RealForm,
    gens: &[(Element, Element, Element)],
) -> Result<(Vec<i64>, Vec<usize>), LieError> {
    let rank = gens.len();
    let mut lambda = vec![0i64; rank];
    let mut pi = vec![usize::MAX; rank];
    for (i, (_, a, _)) in gens.iter().enumerate() {
        let ta = form.theta_apply(a);
        let mut found = None;
        for (j, (_, aj, _)) in gens.iter().enumerate() {
            let k = aj.iter().position(|c| !c.is_zero()).unwrap();
            if ta[k].is_zero() {
                continue;
            }
            let c = &ta[k] / &aj[k];
            if scale(aj, &c) == ta {
                found = Some((j, c));
                break;
            }
        }
        let Some((j, c)) = found else {
            return Err(LieError::Invalid("Δ is not θ-stable".into()));
        };
        pi[i] = j;
        lambda[i] = if c == ExactScalar::one() {
            1
        } else if c == ExactScalar::from_int(-1) {
            -1
        } else {
            return Err(LieError::Invalid("θ-parameter is not ±1".into()));
        };
    }
    for i in 0..rank {
        if pi[pi[i]] != i {
            return Err(LieError::Invalid("θ root action is not involutive on Δ".into()));
        }
    }
    Ok((lambda, pi))
}

impl ParameterState {
    pub fn initial(form: &RealForm) -> Result<Self, LieError> {
        let model = &form.model;
        let gens = model.canonical_generators();
        let simples: Vec<usize> = (0..model.rank()).map(|i| model.rs.simple_index(i)).collect();
        let (lambda, pi) = read_parameters(form, &gens)?;
        let mut state = ParameterState { gens, simples, lambda, pi, log: Vec::new() };
        state.normalize_pairs(form)?;
        Ok(state)
    }

    /// Step-3 normalization: on π-pairs replace the π(i)-th generators by
    /// the θ-images of the i-th, forcing λ = 1 off the fixed points.
    fn normalize_pairs(&mut self, form: &RealForm) -> Result<(), LieError> {
        for i in 0..self.gens.len() {
            let j = self.pi[i];
            if j > i {
                let (c, a, b) = &self.gens[i];
                self.gens[j] = (
                    form.theta_apply(c),
                    form.theta_apply(a),
                    form.theta_apply(b),
                );
            }
        }
        let (lambda, pi) = read_parameters(form, &self.gens)?;
        for i in 0..self.gens.len() {
            if pi[i] != i && lambda[i] != 1 {
                return Err(LieError::Invalid("pair normalization failed".into()));
            }
        }
        self.lambda = lambda;
        self.pi = pi;
        Ok(())
    }

    /// Cartan integers of the current simple basis.
    pub fn cartan_matrix(&self, model: &ChevalleyModel) -> Vec<Vec<i64>> {
        let rank = self.simples.len();
        let mut m = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                m[i][j] = model.rs.pairing[self.simples[i]][self.simples[j]];
            }
        }
        m
    }

    pub fn negatives(&self) -> usize {
        self.lambda.iter().filter(|&&l| l == -1).count()
    }
}

/// One W_θ reflection move: replaces generators and simple roots by their
/// (modified) images under s_{α_k} and re-derives the parameters, checking
/// them against the λ̃_j = λ_j λ_k^{⟨α_j,α_k⟩} rule.
pub fn weyl_parameter_update(
    form: &RealForm,
    state: &ParameterState,
    k: usize,
) -> Result<ParameterState, LieError> {
    if state.pi[k] != k {
        return Err(LieError::Invalid("reflection index must be θ-fixed (α_k ∈ Δ_θ)".into()));
    }
    let model = &form.model;
    let old_cartan = state.cartan_matrix(model);
    let kroot = state.simples[k];
    let mut simples = Vec::with_capacity(state.simples.len());
    let mut gens = Vec::with_capacity(state.simples.len());
    for &b in &state.simples {
        let w = model.rs.reflect(b, kroot);
        simples.push(w);
        gens.push((
            model.coroot_element(w),
            model.x(w),
            model.x(model.rs.negative_of(w)),
        ));
    }
    let (lambda0, pi0) = read_parameters(form, &gens)?;
    let mut out = ParameterState {
        gens,
        simples,
        lambda: lambda0,
        pi: pi0,
        log: state.log.clone(),
    };
    out.normalize_pairs(form)?;
    // The reflected basis must still be θ-stable with the same Cartan
    // matrix, and the parameters must follow the update rule.
    if out.cartan_matrix(model) != old_cartan {
        return Err(LieError::Invalid("reflection changed the Cartan matrix".into()));
    }
    for j in 0..out.lambda.len() {
        let expect = if out.pi[j] != j {
            1
        } else {
            let exp = old_cartan[j][k];
            let pw = if exp.rem_euclid(2) == 1 { state.lambda[k] } else { 1 };
            state.lambda[j] * pw
        };
        if out.lambda[j] != expect {
            return Err(LieError::Invalid(format!(
                "parameter update rule violated at j = {}",
                j + 1
            )));
        }
    }
    crate::rootsystem::verify_canonical_generators(model, &out.gens)?;
    out.log.push(Move::Weyl(k));
    Ok(out)
}

/// A diagram symmetry move: relabels generator slots by d (which must
/// preserve the Cartan matrix and normalize π).
pub fn diagram_move(
    form: &RealForm,
    state: &ParameterState,
    d: &[usize],
) -> Result<ParameterState, LieError> {
    let model = &form.model;
    let rank = state.simples.len();
    let old = state.cartan_matrix(model);
    for i in 0..rank {
        for j in 0..rank {
            if old[d[i]][d[j]] != old[i][j] {
                return Err(LieError::Invalid("diagram move must preserve the Cartan matrix".into()));
            }
        }
    }
    let gens: Vec<_> = (0..rank).map(|i| state.gens[d[i]].clone()).collect();
    let simples: Vec<_> = (0..rank).map(|i| state.simples[d[i]]).collect();
    let (lambda, pi) = read_parameters(form, &gens)?;
    let mut out = ParameterState { gens, simples, lambda, pi, log: state.log.clone() };
    out.normalize_pairs(form)?;
    out.log.push(Move::Diagram(d.to_vec()));
    Ok(out)
}

/// Diagram symmetries available for the type (as permutations of simple
/// root slots, in the labeling of this crate).
pub fn diagram_symmetries(kind: SimpleType, rank: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..rank).collect();
    match kind {
        SimpleType::A if rank >= 2 => {
            let rev: Vec<usize> = (0..rank).rev().collect();
            vec![id, rev]
        }
        SimpleType::D if rank == 4 => {
            // S3 on the outer nodes {0, 2, 3}.
            let mut out = Vec::new();
            for p in permutations(3) {
                let outer = [0usize, 2, 3];
                let mut d = vec![0usize; 4];
                d[1] = 1;
                for (slot, &node) in outer.iter().enumerate() {
                    d[node] = outer[p[slot]];
                }
                out.push(d);
            }
            out
        }
        SimpleType::D => {
            let mut swap: Vec<usize> = (0..rank).collect();
            swap.swap(rank - 2, rank - 1);
            vec![id, swap]
        }
        _ => vec![id],
    }
}

/// Permitted single-negative positions of the standard form (1-based),
/// shared with the enumeration.
fn permitted(kind: SimpleType, rank: usize, outer: bool) -> Vec<usize> {
    if outer {
        match kind {
            SimpleType::A => {
                if rank % 2 == 1 {
                    vec![(rank + 1) / 2]
                } else {
                    vec![]
                }
            }
            SimpleType::D => (1..=(rank.div_ceil(2) - 1)).collect(),
            _ => vec![],
        }
    } else {
        crate::realform::permitted_negative_indices(kind, rank)
    }
}

/// Reduces the parameters to standard form: at most one λ_k = −1, at a
/// permitted index. The move sequence is found by search over the finite
/// λ-space and replayed on the actual generator state.
pub fn standard_form(
    form: &RealForm,
    state: &ParameterState,
    kind: SimpleType,
    rank: usize,
) -> Result<ParameterState, LieError> {
    let model = &form.model;
    let cartan = state.cartan_matrix(model);
    let outer = state.pi.iter().enumerate().any(|(i, &p)| p != i);
    let perm = permitted(kind, rank, outer);
    let is_standard = |lambda: &[i64]| -> bool {
        let negs: Vec<usize> = lambda
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == -1)
            .map(|(i, _)| i + 1)
            .collect();
        match negs[..] {
            [] => true,
            [k] => perm.contains(&k),
            _ => false,
        }
    };
    // Breadth-first search in parameter space.
    let moves: Vec<Move> = {
        let mut ms: Vec<Move> = (0..rank)
            .filter(|&k| state.pi[k] == k)
            .map(Move::Weyl)
            .collect();
        for d in diagram_symmetries(kind, rank) {
            if d.iter().enumerate().all(|(i, &x)| x == i) {
                continue;
            }
            // The move must normalize the θ root action.
            let compat = (0..rank).all(|i| state.pi[d[i]] == d[state.pi[i]]);
            if compat {
                ms.push(Move::Diagram(d));
            }
        }
        ms
    };
    let apply_lambda = |lambda: &[i64], mv: &Move| -> Vec<i64> {
        match mv {
            Move::Weyl(k) => (0..rank)
                .map(|j| {
                    if state.pi[j] != j {
                        1
                    } else {
                        let exp = cartan[j][*k];
                        let pw = if exp.rem_euclid(2) == 1 { lambda[*k] } else { 1 };
                        lambda[j] * pw
                    }
                })
                .collect(),
            Move::Diagram(d) => (0..rank).map(|i| lambda[d[i]]).collect(),
        }
    };
    let mut frontier = vec![(state.lambda.clone(), Vec::<Move>::new())];
    let mut seen = vec![state.lambda.clone()];
    let path = 'search: {
        if is_standard(&state.lambda) {
            break 'search Vec::new();
        }
        loop {
            let mut next = Vec::new();
            for (lam, path) in &frontier {
                for mv in &moves {
                    let nl = apply_lambda(lam, mv);
                    if seen.contains(&nl) {
                        continue;
                    }
                    let mut np = path.clone();
                    np.push(mv.clone());
                    if is_standard(&nl) {
                        break 'search np;
                    }
                    seen.push(nl.clone());
                    next.push((nl, np));
                }
            }
            if next.is_empty() {
                return Err(LieError::Invalid("no reduction to standard form found".into()));
            }
            frontier = next;
        }
    };
    let mut cur = state.clone();
    for mv in path {
        cur = match mv {
            Move::Weyl(k) => weyl_parameter_update(form, &cur, k)?,
            Move::Diagram(d) => diagram_move(form, &cur, &d)?,
        };
    }
    if !is_standard(&cur.lambda) {
        return Err(LieError::Invalid("replayed reduction is not standard".into()));
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Isomorphic,
    NotIsomorphic,
}

pub struct IsomorphismResult {
    pub verdict: Verdict,
    /// On success: ψ with ψθ = θ'ψ and ψσ = σ'ψ, as a model map.
    pub map: Option<ModelMap>,
}

impl IsomorphismResult {
    fn no() -> Self {
        IsomorphismResult { verdict: Verdict::NotIsomorphic, map: None }
    }
}

/// σ(a_i) = r_i b_{π(i)} on a generator state.
fn sigma_coefficients(
    form: &RealForm,
    state: &ParameterState,
) -> Result<Vec<ExactScalar>, LieError> {
    let mut out = Vec::with_capacity(state.gens.len());
    for (i, (_, a, _)) in state.gens.iter().enumerate() {
        let sa = form.sigma_apply(a);
        let b = &state.gens[state.pi[i]].2;
        let k = b.iter().position(|c| !c.is_zero()).unwrap();
        let r = &sa[k] / &b[k];
        if scale(b, &r) != sa {
            return Err(LieError::Invalid("σ(a_i) is not a multiple of b_{π(i)}".into()));
        }
        if !r.is_real() {
            return Err(LieError::Invalid("r_i is not real".into()));
        }
        out.push(r);
    }
    Ok(out)
}

/// Certifies ψθ = θ'ψ and ψσ = σ'ψ.
fn certify(
    f: &RealForm,
    g: &RealForm,
    psi: &ModelMap,
) -> Result<(), LieError> {
    let a = psi.compose(&f.theta);
    let b = g.theta.compose(psi);
    if !a.equals(&b) {
        return Err(LieError::Invalid("ψθ ≠ θ'ψ".into()));
    }
    let c = psi.compose(&f.sigma);
    let d = g.sigma.compose(psi);
    if !c.equals(&d) {
        return Err(LieError::Invalid("ψσ ≠ σ'ψ".into()));
    }
    Ok(())
}

/// Isomorphism decision for two inner forms over isomorphic complex models.
pub fn isomorphism_inner(f: &RealForm, g: &RealForm) -> Result<IsomorphismResult, LieError> {
    if f.spec.kind != InvolutionKind::Inner || g.spec.kind != InvolutionKind::Inner {
        return Ok(IsomorphismResult::no());
    }
    let kind = f.model.rs.cartan.kind;
    let rank = f.model.rank();
    if g.model.rs.cartan.kind != kind || g.model.rank() != rank {
        return Ok(IsomorphismResult::no());
    }
    let sf = standard_form(f, &ParameterState::initial(f)?, kind, rank)?;
    let sg = standard_form(g, &ParameterState::initial(g)?, kind, rank)?;
    if sf.lambda != sg.lambda {
        return Ok(IsomorphismResult::no());
    }
    let rf = sigma_coefficients(f, &sf)?;
    let rg = sigma_coefficients(g, &sg)?;
    let mut images = Vec::with_capacity(rank);
    for i in 0..rank {
        // sign(r_i) = sign(−λ_i) on both sides, so the ratio is positive
        // and μ_i = √(r_i/r'_i) is real.
        let ratio = &rf[i] / &rg[i];
        if ratio.sign_real()? != std::cmp::Ordering::Greater {
            return Err(LieError::Invalid("r-sign mismatch contradicts the sign law".into()));
        }
        let mu = ratio.try_sqrt()?;
        let mu_inv = mu.inverse()?;
        let (c, a, b) = &sg.gens[i];
        images.push((c.clone(), scale(a, &mu), scale(b, &mu_inv)));
    }
    let psi = extend_from_generators(&f.model, &sf.gens, &g.model, &images, false)?;
    certify(f, g, &psi)?;
    Ok(IsomorphismResult { verdict: Verdict::Isomorphic, map: Some(psi) })
}

/// The outer-type decision: builds θ-stable simple bases from a regular
/// element of 𝔥_{0,R}, aligns π and λ per type, scales by μ_i = 1/√|r_i|,
/// and certifies the resulting ψ.
pub fn isomorphism_outer(f: &RealForm, g: &RealForm) -> Result<IsomorphismResult, LieError> {
    if f.spec.kind != InvolutionKind::Outer || g.spec.kind != InvolutionKind::Outer {
        return Ok(IsomorphismResult::no());
    }
    let kind = f.model.rs.cartan.kind;
    let rank = f.model.rank();
    if g.model.rs.cartan.kind != kind || g.model.rank() != rank {
        return Ok(IsomorphismResult::no());
    }
    let sf = outer_normal_state(f)?;
    let sg = outer_normal_state(g)?;
    // π must agree after canonical ordering (both are put into the same
    // canonical π by outer_normal_state, or the forms differ).
    if sf.pi != sg.pi {
        return Ok(IsomorphismResult::no());
    }
    // λ alignment per type.
    let (sf, sg) = match kind {
        SimpleType::A if rank % 2 == 0 => {
            // π fixed-point-free: all parameters are 1 already.
            (sf, sg)
        }
        SimpleType::A => {
            if sf.lambda != sg.lambda {
                return Ok(IsomorphismResult::no());
            }
            (sf, sg)
        }
        SimpleType::D => {
            let sf = standard_form(f, &sf, kind, rank)?;
            let sg = standard_form(g, &sg, kind, rank)?;
            if sf.lambda != sg.lambda {
                return Ok(IsomorphismResult::no());
            }
            (sf, sg)
        }
        _ => return Err(LieError::Invalid("outer type must be A or D".into())),
    };
    // Final scaling: μ_i = 1/√|r_i| pairs-consistently on each side.
    let scaled_f = scale_for_sigma(f, &sf)?;
    let scaled_g = scale_for_sigma(g, &sg)?;
    // Sign patterns must now agree.
    let rf = sigma_coefficients(f, &scaled_f)?;
    let rg = sigma_coefficients(g, &scaled_g)?;
    for (a, b) in rf.iter().zip(&rg) {
        if a != b {
            return Ok(IsomorphismResult::no());
        }
    }
    let psi = extend_from_generators(&f.model, &scaled_f.gens, &g.model, &scaled_g.gens, false)?;
    certify(f, g, &psi)?;
    Ok(IsomorphismResult { verdict: Verdict::Isomorphic, map: Some(psi) })
}

/// Steps 1–4 of the outer normalization: θ-stable Δ from a regular element
/// of 𝔥_{0,R}, pair-normalized generators, canonical slot ordering.
fn outer_normal_state(form: &RealForm) -> Result<ParameterState, LieError> {
    let model = &form.model;
    let rank = model.rank();
    // Step 1: the centralizer of 𝔥₀^c must be the standard Cartan (our
    // forms are built on a maximally compact Cartan subalgebra).
    {
        let cols: Vec<Element> = form.cartan0.clone();
        let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
        for b in 0..model.dim {
            let bv = model.basis_vec(b);
            let mut row = Vec::new();
            for c in &cols {
                row.extend(model.bracket(c, &bv));
            }
            rows.push(row);
        }
        let m = crate::linalg::Mat::from_cols(rows);
        let kernel = m.kernel();
        // Kernel combinations over basis indices: centralizer dimension.
        if kernel.len() != rank {
            return Err(LieError::Invalid(
                "centralizer of 𝔥₀^c is not a Cartan subalgebra of the expected size".into(),
            ));
        }
    }
    // Step 2: regular h₀ ∈ 𝔥_{0,R} by deterministic small-integer search.
    let nb = form.cartan0.len();
    let mut h0 = None;
    'outer: for norm in 1..=6i64 {
        for combo in integer_combos(nb, norm) {
            let mut cand = model.zero();
            for (c, base) in combo.iter().zip(&form.cartan0) {
                if *c != 0 {
                    for (t, v) in base.iter().enumerate() {
                        cand[t] = &cand[t] + &v.mul_rat(&rat_int(*c));
                    }
                }
            }
            let mut regular = true;
            for r in 0..model.rs.num_roots() {
                // α(h₀) from the Cartan coordinates of h₀.
                let val = root_value(model, r, &cand);
                if val.is_zero() {
                    regular = false;
                    break;
                }
            }
            if regular {
                h0 = Some(cand);
                break 'outer;
            }
        }
    }
    let h0 = h0.ok_or_else(|| LieError::Invalid("no regular element found".into()))?;
    // Positive system α > 0 iff α(h₀) > 0; simples of it.
    let positives: Vec<usize> = (0..model.rs.num_roots())
        .filter(|&r| scalar_positive(&root_value(model, r, &h0)))
        .collect();
    let mut simples: Vec<usize> = Vec::new();
    for &r in &positives {
        let decomposes = positives.iter().any(|&p| {
            positives.iter().any(|&q| {
                model.rs.sum(p, q) == Some(r)
            })
        });
        if !decomposes {
            simples.push(r);
        }
    }
    if simples.len() != rank {
        return Err(LieError::Invalid("regular ordering gave a wrong simple count".into()));
    }
    // Canonical slot ordering: the Cartan matrix must equal the model's
    // and π must be the canonical involution of the type.
    let canonical_pi: Vec<usize> = match model.rs.cartan.kind {
        SimpleType::A => (0..rank).map(|i| rank - 1 - i).collect(),
        SimpleType::D => {
            let mut p: Vec<usize> = (0..rank).collect();
            p.swap(rank - 2, rank - 1);
            p
        }
        _ => return Err(LieError::Invalid("outer type must be A or D".into())),
    };
    let std_cartan = &model.rs.cartan.entries;
    for p in permutations(rank) {
        let ordered: Vec<usize> = (0..rank).map(|i| simples[p[i]]).collect();
        let cartan_ok = (0..rank).all(|i| {
            (0..rank).all(|j| model.rs.pairing[ordered[i]][ordered[j]] == std_cartan[i][j])
        });
        if !cartan_ok {
            continue;
        }
        let gens: Vec<_> = ordered
            .iter()
            .map(|&r| {
                (
                    model.coroot_element(r),
                    model.x(r),
                    model.x(model.rs.negative_of(r)),
                )
            })
            .collect();
        let Ok((lambda, pi)) = read_parameters(form, &gens) else {
            continue;
        };
        if pi != canonical_pi {
            continue;
        }
        let mut state = ParameterState { gens, simples: ordered, lambda, pi, log: Vec::new() };
        state.normalize_pairs(form)?;
        return Ok(state);
    }
    Err(LieError::Invalid("no canonical ordering matches the diagram involution".into()))
}

/// Value α(h) for h in the Cartan span, as an exact scalar.
fn root_value(model: &ChevalleyModel, r: usize, h: &[ExactScalar]) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for i in 0..model.rank() {
        if h[i].is_zero() {
            continue;
        }
        let pairing: i64 = (0..model.rank())
            .map(|j| model.rs.roots[r][j] * model.rs.cartan.entries[j][i])
            .sum();
        acc = &acc + &h[i].mul_rat(&rat_int(pairing));
    }
    acc
}

fn scalar_positive(x: &ExactScalar) -> bool {
    x.sign_real().map(|o| o == std::cmp::Ordering::Greater).unwrap_or(false)
}

/// Small-integer coefficient vectors of max-norm exactly `norm`.
fn integer_combos(n: usize, norm: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, idx: usize, norm: i64) {
        if idx == cur.len() {
            if cur.iter().any(|&c| c.abs() == norm) {
                out.push(cur.clone());
            }
            return;
        }
        for c in -norm..=norm {
            cur[idx] = c;
            rec(out, cur, idx + 1, norm);
        }
    }
    rec(&mut out, &mut cur, 0, norm);
    out
}

/// The final σ-normalization: replaces a_i, b_i by μ_i a_i, μ_i⁻¹ b_i with
/// μ_i = 1/√|r_i|, consistently on π-pairs.
fn scale_for_sigma(form: &RealForm, state: &ParameterState) -> Result<ParameterState, LieError> {
    let r = sigma_coefficients(form, state)?;
    let rank = state.gens.len();
    let mut out = state.clone();
    let mut done = vec![false; rank];
    for i in 0..rank {
        if done[i] {
            continue;
        }
        let j = state.pi[i];
        if r[i] != r[j] {
            return Err(LieError::Invalid("r_i ≠ r_{π(i)}".into()));
        }
        let mu = r[i].abs_real()?.inverse()?.try_sqrt()?;
        let mu_inv = mu.inverse()?;
        for &t in &[i, j] {
            if done[t] {
                continue;
            }
            let (c, a, b) = &state.gens[t];
            out.gens[t] = (c.clone(), scale(a, &mu), scale(b, &mu_inv));
            done[t] = true;
        }
    }
    // After the scaling the σ-coefficients are signs.
    for r in sigma_coefficients(form, &out)? {
        if r != ExactScalar::one() && r != ExactScalar::from_int(-1) {
            return Err(LieError::Invalid("scaling failed to normalize σ".into()));
        }
    }
    Ok(out)
}

/// Top-level verdict for two forms of the same supported complex type.
pub fn isomorphism(f: &RealForm, g: &RealForm) -> Result<IsomorphismResult, LieError> {
    if f.model.rs.cartan.kind != g.model.rs.cartan.kind || f.model.rank() != g.model.rank() {
        return Ok(IsomorphismResult::no());
    }
    match (f.spec.kind, g.spec.kind) {
        (InvolutionKind::Inner, InvolutionKind::Inner) => isomorphism_inner(f, g),
        (InvolutionKind::Outer, InvolutionKind::Outer) => isomorphism_outer(f, g),
        _ => Ok(IsomorphismResult::no()),
    }
}

/// Transports a nilpotent element through a certified isomorphism.
pub fn map_orbit(
    f: &RealForm,
    g: &RealForm,
    result: &IsomorphismResult,
    e: &[ExactScalar],
) -> Result<Element, LieError> {
    if result.verdict != Verdict::Isomorphic {
        return Err(LieError::Invalid("no isomorphism available".into()));
    }
    let psi = result.map.as_ref().unwrap();
    if !f.model.is_ad_nilpotent(e) {
        return Err(LieError::Invalid("element is not nilpotent".into()));
    }
    let img = psi.apply(e);
    if !g.model.is_ad_nilpotent(&img) {
        return Err(LieError::Invalid("image is not nilpotent".into()));
    }
    if g.sigma_apply(&img) != img {
        return Err(LieError::Invalid("image is not real".into()));
    }
    Ok(img)
}

/// The model automorphism of a Weyl word (composition of the reflection
/// automorphisms, left to right).
pub fn weyl_word_automorphism(model: &ChevalleyModel, word: &[usize]) -> Result<ModelMap, LieError> {
    let mut acc = ModelMap::identity(model.dim);
    for &k in word {
        let gens = model.canonical_generators();
        let (images, _) = crate::rootsystem::simple_reflection_action(model, k);
        let w = extend_from_generators(model, &gens, model, &images, false)?;
        acc = w.compose(&acc);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::{build_real_form, enumerate_involutions};

    fn form(kind: SimpleType, rank: usize, descriptor: &str) -> RealForm {
        let model = ChevalleyModel::create(kind, rank).unwrap();
        let specs = enumerate_involutions(kind, rank).unwrap();
        let spec = specs.iter().find(|s| s.descriptor == descriptor).unwrap();
        build_real_form(&model, spec).unwrap()
    }

    #[test]
    fn update_rule_examples() {
        // Inner A2 with λ = (−1,−1): acting with w₂ gives λ̃ = (1,−1).
        let model = ChevalleyModel::create(SimpleType::A, 2).unwrap();
        let spec = crate::realform::InvolutionSpec::inner(vec![-1, -1], "test");
        let f = build_real_form(&model, &spec).unwrap();
        let s0 = ParameterState::initial(&f).unwrap();
        assert_eq!(s0.lambda, vec![-1, -1]);
        let s1 = weyl_parameter_update(&f, &s0, 1).unwrap();
        assert_eq!(s1.lambda, vec![1, -1]);
        // j = k leaves λ_k unchanged; ⟨α_j,α_k⟩ = 0 leaves λ_j unchanged.
        let s2 = weyl_parameter_update(&f, &s1, 1).unwrap();
        assert_eq!(s2.lambda[1], s1.lambda[1]);
    }

    #[test]
    fn standard_form_a2() {
        // λ = (1,−1) reduces to (−1,1) since k ≤ ⌈2/2⌉ = 1.
        let model = ChevalleyModel::create(SimpleType::A, 2).unwrap();
        let spec = crate::realform::InvolutionSpec::inner(vec![1, -1], "test");
        let f = build_real_form(&model, &spec).unwrap();
        let s = ParameterState::initial(&f).unwrap();
        let std = standard_form(&f, &s, SimpleType::A, 2).unwrap();
        assert_eq!(std.lambda, vec![-1, 1]);
        // Already-standard states are fixed points.
        let again = standard_form(&f, &std, SimpleType::A, 2).unwrap();
        assert_eq!(again.lambda, std.lambda);
        assert_eq!(again.log.len(), std.log.len());
    }

    #[test]
    fn reflexivity_small() {
        for (kind, rank, d) in [
            (SimpleType::A, 1, "compact"),
            (SimpleType::A, 1, "k1"),
            (SimpleType::A, 2, "k1"),
            (SimpleType::G, 2, "k1"),
        ] {
            let f = form(kind, rank, d);
            let res = isomorphism_inner(&f, &f).unwrap();
            assert_eq!(res.verdict, Verdict::Isomorphic, "{kind}{rank}:{d}");
        }
    }

    #[test]
    fn distinct_forms_rejected() {
        let su2 = form(SimpleType::A, 1, "compact");
        let sl2 = form(SimpleType::A, 1, "k1");
        let res = isomorphism_inner(&su2, &sl2).unwrap();
        assert_eq!(res.verdict, Verdict::NotIsomorphic);
        // Outer vs inner: immediate rejection.
        let sl3 = form(SimpleType::A, 2, "outer");
        let su21 = form(SimpleType::A, 2, "k1");
        assert_eq!(isomorphism(&sl3, &su21).unwrap().verdict, Verdict::NotIsomorphic);
    }

    #[test]
    fn outer_reflexivity() {
        for (kind, rank, d) in [
            (SimpleType::A, 2, "outer"),
            (SimpleType::A, 3, "outer"),
            (SimpleType::A, 3, "outer:k2"),
        ] {
            let f = form(kind, rank, d);
            let res = isomorphism_outer(&f, &f).unwrap();
            assert_eq!(res.verdict, Verdict::Isomorphic, "{kind}{rank}:{d}");
        }
    }

    #[test]
    fn outer_distinct_classes() {
        let sl4 = form(SimpleType::A, 3, "outer:k2");
        let sustar = form(SimpleType::A, 3, "outer");
        let res = isomorphism_outer(&sl4, &sustar).unwrap();
        assert_eq!(res.verdict, Verdict::NotIsomorphic);
    }

    #[test]
    fn weyl_conjugated_reconstruction() {
        let f = form(SimpleType::A, 2, "k1");
        let w = weyl_word_automorphism(&f.model, &[0, 1]).unwrap();
        let g = f.conjugated_by(&w, "w01").unwrap();
        let res = isomorphism_inner(&f, &g).unwrap();
        assert_eq!(res.verdict, Verdict::Isomorphic);
        // Mapped representatives stay nilpotent and real.
        let reps = crate::cayley::real_orbit_representatives(&f).unwrap();
        for r in reps {
            if let crate::cayley::OrbitResolution::Resolved { real, .. } = r {
                let img = map_orbit(&f, &g, &res, &real.e).unwrap();
                assert!(g.model.is_ad_nilpotent(&img));
            }
        }
    }

    #[test]
    fn rejected_moves_and_inputs() {
        // Reflections are only allowed at θ-fixed simple roots.
        let outer = form(SimpleType::A, 3, "outer");
        let state = ParameterState::initial(&outer).unwrap();
        assert!(weyl_parameter_update(&outer, &state, 0).is_err());
        assert!(weyl_parameter_update(&outer, &state, 1).is_ok());
        // map_orbit rejects non-nilpotent elements and missing verdicts.
        let f = form(SimpleType::A, 1, "k1");
        let res = isomorphism_inner(&f, &f).unwrap();
        let h = f.model.h(0);
        assert!(map_orbit(&f, &f, &res, &h).is_err());
        let no = IsomorphismResult::no();
        let x = f.model.x(f.model.rs.simple_index(0));
        assert!(map_orbit(&f, &f, &no, &x).is_err());
    }

    #[test]
    fn standard_form_confluent() {
        // Random valid move prefixes reach the same standard parameters.
        let model = ChevalleyModel::create(SimpleType::A, 3).unwrap();
        let spec = crate::realform::InvolutionSpec::inner(vec![-1, 1, -1], "test");
        let f = build_real_form(&model, &spec).unwrap();
        let base = ParameterState::initial(&f).unwrap();
        let reference = standard_form(&f, &base, SimpleType::A, 3).unwrap();
        let words: [&[usize]; 4] = [&[0], &[1, 2], &[2, 0, 1], &[1, 1, 0]];
        for word in words {
            let mut s = base.clone();
            for &k in word {
                s = weyl_parameter_update(&f, &s, k).unwrap();
            }
            let std = standard_form(&f, &s, SimpleType::A, 3).unwrap();
            assert_eq!(std.lambda, reference.lambda, "after prefix {word:?}");
        }
    }

    #[test]
    fn diagram_moves_merge_d4_triality() {
        // On D4 the inner forms with λ at nodes 1 and 3 are related by a
        // diagram symmetry; the standard-form reduction must merge them.
        let model = ChevalleyModel::create(SimpleType::D, 4).unwrap();
        let spec1 = crate::realform::InvolutionSpec::inner(vec![-1, 1, 1, 1], "t1");
        let spec3 = crate::realform::InvolutionSpec::inner(vec![1, 1, -1, 1], "t3");
        let f1 = build_real_form(&model, &spec1).unwrap();
        let f3 = build_real_form(&model, &spec3).unwrap();
        let res = isomorphism_inner(&f1, &f3).unwrap();
        assert_eq!(res.verdict, Verdict::Isomorphic);
    }
}

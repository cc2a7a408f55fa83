//! The Kostant-Sekiguchi pipeline: homogeneous sl2-triples from the carrier
//! catalog are upgraded to complex Cayley triples (by the linear-algebra
//! solution in the principal case, or the structured polynomial search in
//! the non-principal case) and then carried to real Cayley triples — the
//! nilpotent orbit representatives of the real form.

use crate::carrier::{enumerate_orbits, is_principal, CarrierAlgebra, OrbitEntry};
use crate::chevsys::{carrier_adapted_system, CarrierChevalley};
use crate::error::LieError;
use crate::exact::{rat_int, ExactScalar, Rat};
use crate::linalg::{Mat, Span};
use crate::polysolve::{structured_solve_filtered, Poly, PolySystem};
use crate::realform::{scale, RealForm};
use crate::rootsystem::Element;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleKind {
    Homogeneous,
    ComplexCayley,
    RealCayley,
}

/// An sl2-triple (f, h, e) with [h,e] = 2e, [h,f] = −2f, [e,f] = h.
#[derive(Debug, Clone)]
pub struct Sl2Triple {
    pub f: Element,
    pub h: Element,
    pub e: Element,
    pub kind: TripleKind,
}

impl Sl2Triple {
    pub fn new(f: Element, h: Element, e: Element, kind: TripleKind) -> Self {
        Sl2Triple { f, h, e, kind }
    }
}

/// Validates the sl2 relations and the kind-specific conditions, exactly.
pub fn validate_triple(form: &RealForm, t: &Sl2Triple) -> Result<(), LieError> {
    let model = &form.model;
    if model.bracket(&t.h, &t.e) != scale(&t.e, &ExactScalar::from_int(2)) {
        return Err(LieError::Invalid("[h,e] ≠ 2e".into()));
    }
    if model.bracket(&t.h, &t.f) != scale(&t.f, &ExactScalar::from_int(-2)) {
        return Err(LieError::Invalid("[h,f] ≠ −2f".into()));
    }
    if model.bracket(&t.e, &t.f) != t.h {
        return Err(LieError::Invalid("[e,f] ≠ h".into()));
    }
    match t.kind {
        TripleKind::Homogeneous => {
            if !form.in_p(&t.e) || !form.in_p(&t.f) || !form.in_k(&t.h) {
                return Err(LieError::Invalid("triple is not homogeneous".into()));
            }
        }
        TripleKind::ComplexCayley => {
            if !form.in_p(&t.e) || !form.in_p(&t.f) || !form.in_k(&t.h) {
                return Err(LieError::Invalid("triple is not homogeneous".into()));
            }
            if form.sigma_apply(&t.e) != t.f {
                return Err(LieError::Invalid("σ(e) ≠ f".into()));
            }
        }
        TripleKind::RealCayley => {
            for (name, v) in [("f", &t.f), ("h", &t.h), ("e", &t.e)] {
                if form.sigma_apply(v) != **v {
                    return Err(LieError::Invalid(format!("{name} is not σ-fixed")));
                }
            }
            let theta_e = form.theta_apply(&t.e);
            let minus_f: Element = t.f.iter().map(|c| -c).collect();
            if theta_e != minus_f {
                return Err(LieError::Invalid("θ(e) ≠ −f".into()));
            }
        }
    }
    Ok(())
}

/// Real Cayley triple → complex Cayley triple:
/// (½(ie + if + h), i(e − f), ½(−ie − if + h)).
pub fn cayley_transform(form: &RealForm, t: &Sl2Triple) -> Result<Sl2Triple, LieError> {
    if t.kind != TripleKind::RealCayley {
        return Err(LieError::Invalid("cayley_transform expects a real Cayley triple".into()));
    }
    validate_triple(form, t)?;
    let i = ExactScalar::i();
    let half = ExactScalar::from_rat(Rat::new(1.into(), 2.into()));
    let ie = scale(&t.e, &i);
    let if_ = scale(&t.f, &i);
    let f: Element = ie
        .iter()
        .zip(&if_)
        .zip(&t.h)
        .map(|((a, b), c)| (&(a + b) + c) * &half)
        .collect();
    let h: Element = t.e.iter().zip(&t.f).map(|(a, b)| &(a - b) * &i).collect();
    let e: Element = ie
        .iter()
        .zip(&if_)
        .zip(&t.h)
        .map(|((a, b), c)| (&(-(a + b)) + c) * &half)
        .collect();
    let out = Sl2Triple::new(f, h, e, TripleKind::ComplexCayley);
    validate_triple(form, &out)?;
    Ok(out)
}

/// Complex Cayley triple → real Cayley triple:
/// (½i(e − f + h), e + f, ½i(e − f − h)).
pub fn inverse_cayley_transform(form: &RealForm, t: &Sl2Triple) -> Result<Sl2Triple, LieError> {
    if t.kind != TripleKind::ComplexCayley {
        return Err(LieError::Invalid(
            "inverse_cayley_transform expects a complex Cayley triple".into(),
        ));
    }
    validate_triple(form, t)?;
    let ihalf = &ExactScalar::i() * &ExactScalar::from_rat(Rat::new(1.into(), 2.into()));
    let f: Element = t
        .e
        .iter()
        .zip(&t.f)
        .zip(&t.h)
        .map(|((a, b), c)| (&(a - b) + c) * &ihalf)
        .collect();
    let h: Element = t.e.iter().zip(&t.f).map(|(a, b)| a + b).collect();
    let e: Element = t
        .e
        .iter()
        .zip(&t.f)
        .zip(&t.h)
        .map(|((a, b), c)| (&(a - b) - c) * &ihalf)
        .collect();
    let out = Sl2Triple::new(f, h, e, TripleKind::RealCayley);
    validate_triple(form, &out)?;
    Ok(out)
}

/// The principal-case solution of [x, σ(x)] = h: x = Σ √d_α z_α over the
/// simple roots, with C·d = 2·𝟙 solved through the Cartan matrix.
pub fn principal_cayley_element(
    form: &RealForm,
    carrier: &CarrierAlgebra,
    cc: &CarrierChevalley,
    h: &[ExactScalar],
) -> Result<(Element, Vec<Rat>), LieError> {
    if !is_principal(carrier) {
        return Err(LieError::Invalid("principal solver on a non-principal carrier".into()));
    }
    let model = &form.model;
    let s = cc.rank();
    // β(h) = 2 for every simple root.
    for (_, a, _) in &cc.gens {
        if model.bracket(h, a) != scale(a, &ExactScalar::from_int(2)) {
            return Err(LieError::Invalid("characteristic must pair to 2 on simples".into()));
        }
    }
    let cm = Mat::from_rows(
        carrier
            .cartan_matrix
            .iter()
            .map(|row| row.iter().map(|&x| rat_int(x)).collect())
            .collect(),
    );
    let rhs = vec![rat_int(2); s];
    let d = cm
        .solve(&rhs)
        .ok_or_else(|| LieError::Invalid("singular carrier Cartan matrix".into()))?;
    for x in &d {
        if x.is_negative() {
            return Err(LieError::Invalid("negative coefficient in the principal system".into()));
        }
    }
    // h = Σ d_α k_α must hold.
    let mut hsum = vec![ExactScalar::zero(); model.dim];
    for (i, di) in d.iter().enumerate() {
        let si = cc.rs.simple_index(i);
        for (t, c) in cc.k_alpha[si].iter().enumerate() {
            hsum[t] = &hsum[t] + &c.mul_rat(di);
        }
    }
    if hsum != h {
        return Err(LieError::Invalid("characteristic is not Σ d_α k_α".into()));
    }
    let mut x = vec![ExactScalar::zero(); model.dim];
    for (i, di) in d.iter().enumerate() {
        let c = ExactScalar::sqrt_rational(di);
        let si = cc.rs.simple_index(i);
        for (t, zc) in cc.z[si].iter().enumerate() {
            x[t] = &x[t] + &(zc * &c);
        }
    }
    // [x, σ(x)] = h, exactly.
    let sx = form.sigma_apply(&x);
    if model.bracket(&x, &sx) != h {
        return Err(LieError::Invalid("principal solution fails [x,σ(x)] = h".into()));
    }
    Ok((x, d))
}

/// The quadratic system for [x, σ(x)] = h over a basis of s₁, with respect
/// to the adapted system: x = Σ T_α z_α and σ(z_α) = −z_{−α} in degree 1,
/// giving dim s₀ rational equations in dim s₁ variables.
pub fn cayley_system(
    form: &RealForm,
    cc: &CarrierChevalley,
    h: &[ExactScalar],
) -> Result<(PolySystem, Vec<usize>), LieError> {
    let model = &form.model;
    let d1 = cc.degree_one_roots();
    let n = d1.len();
    let s = cc.rank();
    // s₀ slots: the k_i, then the degree-0 roots.
    let deg0: Vec<usize> = (0..cc.rs.num_roots()).filter(|&a| cc.deg[a] == 0).collect();
    let nslots = s + deg0.len();
    // Coordinates of h over the k_i (h lies in the Cartan of the carrier).
    let kmat = Mat::from_cols(cc.gens.iter().map(|g| g.0.clone()).collect());
    let hk = kmat
        .solve(h)
        .ok_or_else(|| LieError::Invalid("characteristic outside the carrier Cartan".into()))?;
    let mut hcoords: Vec<Rat> = Vec::with_capacity(nslots);
    for c in &hk {
        hcoords.push(
            c.as_rational()
                .ok_or_else(|| LieError::Invalid("characteristic coordinates not rational".into()))?,
        );
    }
    hcoords.resize(nslots, Rat::zero());
    // Quadratic coefficients: −[z_α, z_{−β}] expanded over the slots.
    let mut polys: Vec<Poly> = vec![Poly::zero(n); nslots];
    for (ia, &alpha) in d1.iter().enumerate() {
        for (ib, &beta) in d1.iter().enumerate() {
            let nb = cc.rs.negative_of(beta);
            let br = model.bracket(&cc.z[alpha], &cc.z[nb]);
            if br.iter().all(|c| c.is_zero()) {
                continue;
            }
            let mut mono = vec![0u32; n];
            mono[ia] += 1;
            mono[ib] += 1;
            if alpha == beta {
                // [z_α, z_{−α}] = −k_α: contributes +T_α² k_α.
                for (i, coeff) in cc.rs.coroot[alpha].iter().enumerate() {
                    polys[i].add_term(mono.clone(), rat_int(*coeff));
                }
            } else if let Some(gamma) = cc.rs.sum(alpha, nb) {
                // coefficient against z_γ (degree 0 root slot).
                let k = cc.z[gamma].iter().position(|c| !c.is_zero()).unwrap();
                let m = &br[k] / &cc.z[gamma][k];
                if scale(&cc.z[gamma], &m) != br {
                    return Err(LieError::Invalid("bracket escapes the root space".into()));
                }
                let mr = m
                    .as_rational()
                    .ok_or_else(|| LieError::Invalid("mixed bracket coefficient not rational".into()))?;
                let slot = s + deg0.iter().position(|&g| g == gamma).unwrap();
                polys[slot].add_term(mono, -mr);
            } else {
                return Err(LieError::Invalid("unexpected bracket between s₁ and s₋₁".into()));
            }
        }
    }
    for (slot, p) in polys.iter_mut().enumerate() {
        p.add_term(vec![0; n], -hcoords[slot].clone());
    }
    Ok((PolySystem::new(n, polys), d1))
}

/// The non-principal solver: structured zero-setting over the quadratic
/// system, with every candidate verified against the true antilinear
/// bracket; falls back to a real/imaginary split of the coefficients when
/// the direct parametrization finds nothing.
pub fn nonprincipal_cayley_element(
    form: &RealForm,
    cc: &CarrierChevalley,
    h: &[ExactScalar],
) -> Result<Element, LieError> {
    let model = &form.model;
    let (system, d1) = cayley_system(form, cc, h)?;
    let assemble = |vals: &[ExactScalar]| -> Element {
        let mut x = vec![ExactScalar::zero(); model.dim];
        for (i, &alpha) in d1.iter().enumerate() {
            if vals[i].is_zero() {
                continue;
            }
            for (t, zc) in cc.z[alpha].iter().enumerate() {
                x[t] = &x[t] + &(zc * &vals[i]);
            }
        }
        x
    };
    let verify = |x: &Element| -> bool {
        let sx = form.sigma_apply(x);
        model.bracket(x, &sx) == *h
    };
    if let Ok(sol) = structured_solve_filtered(&system, |vals| verify(&assemble(vals))) {
        return Ok(assemble(&sol.values));
    }
    // Real/imaginary split: T_j = A_j + i B_j with 2n real unknowns.
    let n = d1.len();
    let split = split_system(&system, n);
    let assemble2 = |vals: &[ExactScalar]| -> Element {
        let joined: Vec<ExactScalar> = (0..n)
            .map(|j| &vals[j] + &(&ExactScalar::i() * &vals[n + j]))
            .collect();
        assemble(&joined)
    };
    match structured_solve_filtered(&split, |vals| verify(&assemble2(vals))) {
        Ok(sol) => Ok(assemble2(&sol.values)),
        Err(_) => {
            let dump: Vec<String> = system.polys.iter().map(|p| p.to_string()).collect();
            Err(LieError::NoSolutionFound(format!(
                "no structured solution of [x,σ(x)] = h; system in T1..T{}: {}",
                n,
                dump.join("; ")
            )))
        }
    }
}

/// Substitutes T_j = A_j + i·B_j into a rational quadratic system and
/// splits into real and imaginary parts (variables A_1..A_n, B_1..B_n).
/// Because the true conjugation negates B, the split encodes
/// [Σ(A+iB)z, σ(Σ(A+iB)z)]: diagonal products become A² + B², and the
/// mixed products A_jA_k + B_jB_k and B_jA_k − A_jB_k.
fn split_system(system: &PolySystem, n: usize) -> PolySystem {
    let mut out: Vec<Poly> = Vec::new();
    for p in &system.polys {
        let mut re = Poly::zero(2 * n);
        let mut im = Poly::zero(2 * n);
        for (m, c) in &p.terms {
            let sup: Vec<usize> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, _)| j)
                .collect();
            match sup[..] {
                [] => re.add_term(vec![0; 2 * n], c.clone()),
                [j] if m[j] == 2 => {
                    // T_j·conj(T_j) = A_j² + B_j²
                    let mut ma = vec![0u32; 2 * n];
                    ma[j] = 2;
                    re.add_term(ma, c.clone());
                    let mut mb = vec![0u32; 2 * n];
                    mb[n + j] = 2;
                    re.add_term(mb, c.clone());
                }
                [j, k] if m[j] == 1 && m[k] == 1 => {
                    // T_j·conj(T_k) + T_k·conj(T_j) appears with a single
                    // coefficient in the symmetric expansion; expand as
                    // 2(A_jA_k + B_jB_k) over the pair, matching the
                    // formal T_jT_k + T_kT_j convention of the builder.
                    let mut maa = vec![0u32; 2 * n];
                    maa[j] = 1;
                    maa[k] = 1;
                    re.add_term(maa, c.clone());
                    let mut mbb = vec![0u32; 2 * n];
                    mbb[n + j] = 1;
                    mbb[n + k] = 1;
                    re.add_term(mbb, c.clone());
                    let mut mba = vec![0u32; 2 * n];
                    mba[n + j] = 1;
                    mba[k] = 1;
                    im.add_term(mba, c.clone());
                    let mut mab = vec![0u32; 2 * n];
                    mab[j] = 1;
                    mab[n + k] = 1;
                    im.add_term(mab, -c.clone());
                }
                _ => unreachable!("cayley systems are quadratic"),
            }
        }
        if !re.is_zero() {
            out.push(re);
        }
        if !im.is_zero() {
            out.push(im);
        }
    }
    PolySystem::new(2 * n, out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverKind {
    Principal,
    Groebner,
    Database(String),
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverKind::Principal => write!(f, "principal"),
            SolverKind::Groebner => write!(f, "groebner"),
            SolverKind::Database(id) => write!(f, "database:{id}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub carrier_type: String,
    pub graded_dims: Vec<(i64, usize)>,
    pub principal: bool,
    pub solver: SolverKind,
    pub defining: Vec<String>,
}

#[derive(Debug)]
pub enum OrbitResolution {
    Resolved {
        entry: OrbitEntry,
        complex: Sl2Triple,
        real: Sl2Triple,
        provenance: Provenance,
    },
    Unresolved {
        entry: OrbitEntry,
        reason: String,
    },
}

/// External hook for resolving non-principal carriers (database lookups);
/// returns the element x with [x, σ(x)] = h and a tag, or None.
pub type NonprincipalHook<'a> =
    &'a dyn Fn(&RealForm, &CarrierAlgebra, &CarrierChevalley, &Element) -> Option<(Element, String)>;

/// Runs the whole correspondence for one form, per catalog entry; failures
/// are isolated as UNRESOLVED entries.
pub fn real_orbit_representatives_with(
    form: &RealForm,
    hook: Option<NonprincipalHook<'_>>,
) -> Result<Vec<OrbitResolution>, LieError> {
    let entries = enumerate_orbits(form)?;
    let mut out = Vec::new();
    for entry in entries {
        out.push(resolve_entry(form, entry, hook));
    }
    Ok(out)
}

pub fn real_orbit_representatives(form: &RealForm) -> Result<Vec<OrbitResolution>, LieError> {
    real_orbit_representatives_with(form, None)
}

/// Resolves a single catalog entry; failures become UNRESOLVED.
pub fn resolve_entry(
    form: &RealForm,
    entry: OrbitEntry,
    hook: Option<NonprincipalHook<'_>>,
) -> OrbitResolution {
    match resolve_entry_inner(form, &entry, hook) {
        Ok((complex, real, provenance)) => OrbitResolution::Resolved { entry, complex, real, provenance },
        Err(e) => OrbitResolution::Unresolved { entry, reason: e.to_string() },
    }
}

fn resolve_entry_inner(
    form: &RealForm,
    entry: &OrbitEntry,
    hook: Option<NonprincipalHook<'_>>,
) -> Result<(Sl2Triple, Sl2Triple, Provenance), LieError> {
    let model = &form.model;
    let cc = carrier_adapted_system(form, &entry.carrier)?;
    let h = entry.h.clone();
    // h is twice the defining element.
    if h != scale(&entry.carrier.defining, &ExactScalar::from_int(2)) {
        return Err(LieError::Invalid("characteristic is not twice the defining element".into()));
    }
    let (x, solver) = if entry.carrier.principal {
        let (x, _) = principal_cayley_element(form, &entry.carrier, &cc, &h)?;
        (x, SolverKind::Principal)
    } else if let Some((x, tag)) = hook.and_then(|f| f(form, &entry.carrier, &cc, &h)) {
        (x, SolverKind::Database(tag))
    } else {
        let x = nonprincipal_cayley_element(form, &cc, &h)?;
        (x, SolverKind::Groebner)
    };
    // Complex Cayley triple (σ(x), h, x); the conjugacy certification is
    // the defining-element identity plus carrier membership in general
    // position.
    let sx = form.sigma_apply(&x);
    let complex = Sl2Triple::new(sx, h.clone(), x.clone(), TripleKind::ComplexCayley);
    validate_triple(form, &complex)?;
    {
        let s1 = entry.carrier.component(1);
        let sctx = Mat::from_cols(s1.to_vec());
        if sctx.solve(&x).is_none() {
            return Err(LieError::Invalid("solution left s₁".into()));
        }
        let mut image = Span::new(model.dim);
        for b in entry.carrier.component(0) {
            image.insert(&model.bracket(b, &x));
        }
        if image.rank() != s1.len() {
            return Err(LieError::Invalid("solution is not in general position".into()));
        }
    }
    let real = inverse_cayley_transform(form, &complex)?;
    if !model.is_ad_nilpotent(&real.e) {
        return Err(LieError::Invalid("representative is not nilpotent".into()));
    }
    // Real coordinates over ℬ must be genuinely real.
    for v in [&real.f, &real.h, &real.e] {
        form.real_coords(v)?;
    }
    let provenance = Provenance {
        carrier_type: entry.carrier.type_string(),
        graded_dims: entry.carrier.graded_dims(),
        principal: entry.carrier.principal,
        solver,
        defining: entry.key.defining.clone(),
    };
    Ok((complex, real, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::{build_real_form, enumerate_involutions};
    use crate::rootsystem::{ChevalleyModel, SimpleType};

    fn form(kind: SimpleType, rank: usize, descriptor: &str) -> RealForm {
        let model = ChevalleyModel::create(kind, rank).unwrap();
        let specs = enumerate_involutions(kind, rank).unwrap();
        let spec = specs.iter().find(|s| s.descriptor == descriptor).unwrap();
        build_real_form(&model, spec).unwrap()
    }

    #[test]
    fn sl2r_representatives() {
        let f = form(SimpleType::A, 1, "k1");
        let reps = real_orbit_representatives(&f).unwrap();
        assert_eq!(reps.len(), 2);
        let mut es = Vec::new();
        for r in &reps {
            match r {
                OrbitResolution::Resolved { real, complex, provenance, .. } => {
                    validate_triple(&f, real).unwrap();
                    validate_triple(&f, complex).unwrap();
                    assert_eq!(provenance.solver, SolverKind::Principal);
                    es.push(real.e.clone());
                }
                OrbitResolution::Unresolved { reason, .. } => panic!("unresolved: {reason}"),
            }
        }
        // The two orbits of the partition [2] are exchanged by e ↦ −e:
        // the representatives either span two directions or are related by
        // a negative real factor (positive factors stay in one orbit).
        let m = Mat::from_cols(es.clone());
        if m.rank() == 1 {
            let k = es[0].iter().position(|c| !c.is_zero()).unwrap();
            let ratio = &es[1][k] / &es[0][k];
            assert_eq!(ratio.sign_real().unwrap(), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn sl3r_representatives() {
        let f = form(SimpleType::A, 2, "outer");
        let reps = real_orbit_representatives(&f).unwrap();
        assert_eq!(reps.len(), 2);
        for r in &reps {
            assert!(matches!(r, OrbitResolution::Resolved { .. }));
        }
    }

    #[test]
    fn su21_representatives() {
        let f = form(SimpleType::A, 2, "k1");
        let reps = real_orbit_representatives(&f).unwrap();
        assert_eq!(reps.len(), 3);
        for r in &reps {
            match r {
                OrbitResolution::Resolved { real, .. } => validate_triple(&f, real).unwrap(),
                OrbitResolution::Unresolved { reason, .. } => panic!("unresolved: {reason}"),
            }
        }
    }

    #[test]
    fn round_trip_on_pipeline_triples() {
        let f = form(SimpleType::A, 1, "k1");
        for r in real_orbit_representatives(&f).unwrap() {
            if let OrbitResolution::Resolved { real, complex, .. } = r {
                let fwd = cayley_transform(&f, &real).unwrap();
                assert_eq!(fwd.e, complex.e);
                assert_eq!(fwd.f, complex.f);
                assert_eq!(fwd.h, complex.h);
                let back = inverse_cayley_transform(&f, &fwd).unwrap();
                assert_eq!(back.e, real.e);
                assert_eq!(back.f, real.f);
                assert_eq!(back.h, real.h);
            }
        }
    }

    #[test]
    fn kind_validation_rejects_mislabels() {
        let f = form(SimpleType::A, 1, "k1");
        let reps = real_orbit_representatives(&f).unwrap();
        if let OrbitResolution::Resolved { real, .. } = &reps[0] {
            let mislabeled = Sl2Triple::new(
                real.f.clone(),
                real.h.clone(),
                real.e.clone(),
                TripleKind::ComplexCayley,
            );
            assert!(validate_triple(&f, &mislabeled).is_err());
            assert!(cayley_transform(&f, &mislabeled).is_err());
        }
    }

    #[test]
    fn principal_routed_through_groebner_agrees() {
        // Forcing a principal carrier through the polynomial search gives a
        // (possibly different) verified solution of the same equation.
        let f = form(SimpleType::A, 1, "k1");
        let entries = enumerate_orbits(&f).unwrap();
        let entry = &entries[0];
        let cc = carrier_adapted_system(&f, &entry.carrier).unwrap();
        let x = nonprincipal_cayley_element(&f, &cc, &entry.h).unwrap();
        let sx = f.sigma_apply(&x);
        assert_eq!(f.model.bracket(&x, &sx), entry.h);
        let (xp, d) = principal_cayley_element(&f, &entry.carrier, &cc, &entry.h).unwrap();
        assert_eq!(d, vec![rat_int(1)]);
        let sxp = f.sigma_apply(&xp);
        assert_eq!(f.model.bracket(&xp, &sxp), entry.h);
    }

    #[test]
    fn system_dimensions_match() {
        let f = form(SimpleType::A, 2, "k1");
        for entry in enumerate_orbits(&f).unwrap() {
            let cc = carrier_adapted_system(&f, &entry.carrier).unwrap();
            let (system, d1) = cayley_system(&f, &cc, &entry.h).unwrap();
            let dim_s0: usize = entry.carrier.component(0).len();
            let dim_s1: usize = entry.carrier.component(1).len();
            assert!(system.polys.iter().filter(|p| !p.is_zero()).count() <= dim_s0);
            assert_eq!(system.nvars, dim_s1);
            assert_eq!(d1.len(), dim_s1);
        }
    }
}

//! Chevalley systems adapted to a Cartan decomposition: the σ/θ coefficient
//! data on root vectors, the standard system z_α = ±x_α, scaling to an
//! adapted system for inner forms, and the adapted system of a carrier
//! algebra used to solve [x, σ(x)] = h.

use crate::carrier::CarrierAlgebra;
use crate::error::LieError;
use crate::exact::{rat_int, ExactScalar, Rat};
use crate::linalg::Mat;
use crate::realform::{root_permutation_from_pi, scale, InvolutionKind, LineOrigin, RealForm};
use crate::rootsystem::{
    extend_from_generators, CartanMatrix, ChevalleyModel, Element, ModelMap, RootSystem,
};
use num_traits::Signed;

/// Per-root involution data: θ(x_α) = λ_α x_{α∘θ} and σ(x_α) = r_α x_{−α∘θ}.
#[derive(Debug, Clone)]
pub struct ConjugationData {
    /// α ↦ α∘θ as root indices.
    pub root_theta: Vec<usize>,
    pub lambda: Vec<i64>,
    pub r: Vec<ExactScalar>,
}

impl ConjugationData {
    pub fn lambda_simple(&self, form: &RealForm, i: usize) -> i64 {
        self.lambda[form.model.rs.simple_index(i)]
    }

    pub fn r_simple(&self, form: &RealForm, i: usize) -> ExactScalar {
        self.r[form.model.rs.simple_index(i)].clone()
    }
}

/// Reads a map image as c·x_target; errors when not a monomial image.
fn monomial_image(
    model: &ChevalleyModel,
    img: &[ExactScalar],
) -> Result<(usize, ExactScalar), LieError> {
    let rank = model.rank();
    let support: Vec<usize> = img
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| k)
        .collect();
    let [k] = support[..] else {
        return Err(LieError::Invalid("image is not a multiple of a root vector".into()));
    };
    if k < rank {
        return Err(LieError::Invalid("image lies in the Cartan subalgebra".into()));
    }
    Ok((k - rank, img[k].clone()))
}

/// Computes the θ/σ coefficient data of a form and checks its relations.
pub fn conjugation_data(form: &RealForm) -> Result<ConjugationData, LieError> {
    let model = &form.model;
    let nroots = model.rs.num_roots();
    let mut root_theta = vec![0usize; nroots];
    let mut lambda = vec![0i64; nroots];
    let mut r = vec![ExactScalar::zero(); nroots];
    for a in 0..nroots {
        let (bt, lc) = monomial_image(model, &form.theta_apply(&model.x(a)))?;
        root_theta[a] = bt;
        lambda[a] = if lc == ExactScalar::one() {
            1
        } else if lc == ExactScalar::from_int(-1) {
            -1
        } else {
            return Err(LieError::Invalid("θ coefficient is not ±1".into()));
        };
        let (bs, rc) = monomial_image(model, &form.sigma_apply(&model.x(a)))?;
        if bs != model.rs.negative_of(bt) {
            return Err(LieError::Invalid("σ does not map g_α to g_{−α∘θ}".into()));
        }
        if !rc.is_real() {
            return Err(LieError::Invalid("r_α is not real".into()));
        }
        r[a] = rc;
    }
    // Δ must be θ-stable.
    for i in 0..model.rank() {
        let si = model.rs.simple_index(i);
        let img = root_theta[si];
        let coords = &model.rs.roots[img];
        if coords.iter().sum::<i64>() != 1 {
            return Err(LieError::Invalid("Δ is not stable under α ↦ α∘θ".into()));
        }
    }
    // Coefficient relations: λ constant on ±α and θ-orbits, r inverse
    // under negation, and the coroot images.
    for a in 0..nroots {
        let na = model.rs.negative_of(a);
        if lambda[a] != lambda[na] || lambda[a] != lambda[root_theta[a]] {
            return Err(LieError::Invalid("λ_α = λ_{−α} = λ_{α∘θ} fails".into()));
        }
        if !(&r[a] * &r[na]).is_one() {
            return Err(LieError::Invalid("r_α·r_{−α} = 1 fails".into()));
        }
        let nat = model.rs.negative_of(root_theta[a]);
        if r[nat] != r[a].inverse()? {
            return Err(LieError::Invalid("r_{−α∘θ} = r_α⁻¹ fails".into()));
        }
        // θ(h_α) = h_{α∘θ}, σ(h_α) = −h_{α∘θ}.
        let ha = model.coroot_element(a);
        let hat = model.coroot_element(root_theta[a]);
        if form.theta_apply(&ha) != hat {
            return Err(LieError::Invalid("θ(h_α) = h_{α∘θ} fails".into()));
        }
        let expect: Element = hat.iter().map(|c| -c).collect();
        if form.sigma_apply(&ha) != expect {
            return Err(LieError::Invalid("σ(h_α) = −h_{α∘θ} fails".into()));
        }
    }
    Ok(ConjugationData { root_theta, lambda, r })
}

/// A family of root vectors (w_α) with [w_α, w_{−α}] = −h_α whose sign
/// flip h ↦ −h, w_α ↦ w_{−α} is an automorphism.
#[derive(Debug, Clone)]
pub struct ChevalleySystem {
    pub w: Vec<Element>,
    pub adapted: bool,
}

/// z_α = x_α for positive α, −x_α for negative α.
pub fn standard_system(model: &ChevalleyModel) -> ChevalleySystem {
    let w = (0..model.rs.num_roots())
        .map(|a| {
            let x = model.x(a);
            if model.rs.is_positive(a) {
                x
            } else {
                x.into_iter().map(|c| -c).collect()
            }
        })
        .collect();
    ChevalleySystem { w, adapted: false }
}

/// Verifies the two Chevalley-system axioms.
pub fn verify_chevalley_system(model: &ChevalleyModel, sys: &ChevalleySystem) -> Result<(), LieError> {
    let nroots = model.rs.num_roots();
    let rank = model.rank();
    for a in 0..nroots {
        let na = model.rs.negative_of(a);
        let br = model.bracket(&sys.w[a], &sys.w[na]);
        let expect: Element = model.coroot_element(a).iter().map(|c| -c).collect();
        if br != expect {
            return Err(LieError::Invalid("[w_α, w_{−α}] = −h_α fails".into()));
        }
    }
    // The Chevalley automorphism: h ↦ −h, w_α ↦ w_{−α}.
    let dim = model.dim;
    let mut cols: Vec<Element> = Vec::with_capacity(dim);
    let mut imgs: Vec<Element> = Vec::with_capacity(dim);
    for i in 0..rank {
        cols.push(model.h(i));
        imgs.push(model.h(i).into_iter().map(|c| -c).collect());
    }
    for a in 0..nroots {
        cols.push(sys.w[a].clone());
        imgs.push(sys.w[model.rs.negative_of(a)].clone());
    }
    let cmat = Mat::from_cols(cols);
    let imat = Mat::from_cols(imgs);
    let cinv = cmat
        .inverse()
        .ok_or_else(|| LieError::Invalid("degenerate Chevalley system".into()))?;
    let psi = ModelMap { mat: imat.matmul(&cinv), antilinear: false };
    crate::rootsystem::verify_homomorphism(model, model, &psi)?;
    Ok(())
}

/// Checks σ(w_α) = λ_α w_{−α∘θ} and θ(w_α) = λ_α w_{α∘θ} for every root.
pub fn is_adapted(form: &RealForm, cd: &ConjugationData, sys: &ChevalleySystem) -> bool {
    let model = &form.model;
    for a in 0..model.rs.num_roots() {
        let lam = rat_int(cd.lambda[a]);
        let target_t = scale(&sys.w[cd.root_theta[a]], &ExactScalar::from_rat(lam.clone()));
        if form.theta_apply(&sys.w[a]) != target_t {
            return false;
        }
        let nt = model.rs.negative_of(cd.root_theta[a]);
        let target_s = scale(&sys.w[nt], &ExactScalar::from_rat(lam));
        if form.sigma_apply(&sys.w[a]) != target_s {
            return false;
        }
    }
    true
}

/// Builds an adapted Chevalley system for an inner form: w_α = ψ(z_α) with
/// ψ scaling the generators by τ_i = 1/√|r_i| so that τ_i² r_i = ±1.
pub fn adapt_system_inner(form: &RealForm) -> Result<(ConjugationData, ChevalleySystem), LieError> {
    if form.spec.kind != InvolutionKind::Inner {
        return Err(LieError::Invalid("adapted-system scaling requires an inner form".into()));
    }
    let cd = conjugation_data(form)?;
    let model = &form.model;
    let rank = model.rank();
    let gens = model.canonical_generators();
    let mut images = Vec::with_capacity(rank);
    for i in 0..rank {
        let ri = cd.r_simple(form, i);
        let riabs = ri.abs_real()?;
        let tau_sq = riabs.inverse()?;
        let tau = tau_sq.try_sqrt()?;
        let tau_inv = tau.inverse()?;
        let (c, a, b) = &gens[i];
        images.push((c.clone(), scale(a, &tau), scale(b, &tau_inv)));
    }
    let psi = extend_from_generators(model, &gens, model, &images, false)?;
    let std = standard_system(model);
    let w: Vec<Element> = std.w.iter().map(|z| psi.apply(z)).collect();
    let mut sys = ChevalleySystem { w, adapted: false };
    verify_chevalley_system(model, &sys)?;
    if !is_adapted(form, &cd, &sys) {
        return Err(LieError::Invalid("scaled system failed the adapted checks".into()));
    }
    sys.adapted = true;
    Ok((cd, sys))
}

/// The adapted Chevalley data of a carrier algebra: canonical generators
/// (k_i, a_i, b_i) with σ(a_i) = ±b_i, the extended Chevalley basis
/// (w_α), and the adapted system (z_α), all in ambient coordinates.
#[derive(Debug, Clone)]
pub struct CarrierChevalley {
    /// Abstract root system of the carrier.
    pub rs: RootSystem,
    /// Canonical generators in ambient coordinates.
    pub gens: Vec<(Element, Element, Element)>,
    /// σ(a_i) = sigma_sign[i]·b_i.
    pub sigma_sign: Vec<i64>,
    /// Degree of each carrier root.
    pub deg: Vec<i64>,
    /// Chevalley basis root vectors per carrier root index.
    pub w: Vec<Element>,
    /// Adapted system z_α (= w_α for α > 0, −w_α for α < 0).
    pub z: Vec<Element>,
    /// k_α = [w_α, w_{−α}] per carrier root index.
    pub k_alpha: Vec<Element>,
    /// λ_α = (−1)^{deg α}: the θ-coefficient inside the carrier.
    pub lambda: Vec<i64>,
}

impl CarrierChevalley {
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Carrier roots of degree 1 (the basis labels of s₁).
    pub fn degree_one_roots(&self) -> Vec<usize> {
        (0..self.rs.num_roots()).filter(|&a| self.deg[a] == 1).collect()
    }
}

/// Constructs canonical generators and an adapted Chevalley system for a
/// carrier algebra, per the inner/outer case lists; all coefficients stay
/// in Q(i, √2).
pub fn carrier_adapted_system(
    form: &RealForm,
    carrier: &CarrierAlgebra,
) -> Result<CarrierChevalley, LieError> {
    let model = &form.model;
    // σ/θ-stability is a construction invariant of carriers; a failure here
    // indicates an upstream bug, so it is a hard error.
    let sbasis = carrier.basis();
    {
        let mut span = crate::linalg::Span::new(model.dim);
        for b in &sbasis {
            span.insert(b);
        }
        for b in &sbasis {
            if !span.contains(&form.sigma_apply(b)) {
                return Err(LieError::Invalid("carrier is not σ-stable".into()));
            }
            if !span.contains(&form.theta_apply(b)) {
                return Err(LieError::Invalid("carrier is not θ-stable".into()));
            }
        }
    }
    let sqrt2 = ExactScalar::sqrt_rational(&rat_int(2));
    // Canonical generators from the simple lines, with the √2 scaling in
    // the short-pairing outer case.
    let mut gens: Vec<(Element, Element, Element)> = Vec::new();
    let mut sigma_sign: Vec<i64> = Vec::new();
    for simple in &carrier.simples {
        let (a, b) = match (form.spec.kind, &simple.line_e.origin) {
            (InvolutionKind::Inner, _) => (simple.line_e.vector.clone(), simple.line_f.vector.clone()),
            (InvolutionKind::Outer, LineOrigin::Root(_)) => {
                return Err(LieError::Invalid("outer form with a root-line carrier".into()))
            }
            (InvolutionKind::Outer, origin) => {
                let root = match origin {
                    LineOrigin::U(r) | LineOrigin::V(r) => *r,
                    LineOrigin::Root(_) => unreachable!(),
                };
                let phi_roots = root_permutation_from_pi(model, &form.spec.pi);
                let fixed = phi_roots[root] == root;
                if fixed {
                    (simple.line_e.vector.clone(), simple.line_f.vector.clone())
                } else {
                    let pairing = model.rs.pairing[phi_roots[root]][root];
                    if pairing == 0 {
                        (simple.line_e.vector.clone(), simple.line_f.vector.clone())
                    } else if pairing == -1 {
                        (
                            scale(&simple.line_e.vector, &sqrt2),
                            scale(&simple.line_f.vector, &sqrt2),
                        )
                    } else {
                        return Err(LieError::Invalid(format!(
                            "unexpected pairing ⟨φα,α⟩ = {pairing}"
                        )));
                    }
                }
            }
        };
        let k = model.bracket(&a, &b);
        // [k_i, a_i] = 2a_i must hold after the scaling.
        let ka = model.bracket(&k, &a);
        if ka != scale(&a, &ExactScalar::from_int(2)) {
            return Err(LieError::Invalid("[k_i, a_i] = 2a_i fails".into()));
        }
        // σ(a_i) = ±b_i by construction.
        let sa = form.sigma_apply(&a);
        let sign = if sa == b {
            1
        } else if sa == b.iter().map(|c| -c).collect::<Vec<_>>() {
            -1
        } else {
            return Err(LieError::Invalid("σ(a_i) ≠ ±b_i".into()));
        };
        sigma_sign.push(sign);
        gens.push((k, a, b));
    }
    // Abstract root system of the carrier and the extended Chevalley basis.
    let cm = CartanMatrix::from_entries(carrier.cartan_matrix.clone())?;
    let rs = RootSystem::new(cm)?;
    let nroots = rs.num_roots();
    let mut w: Vec<Option<Element>> = vec![None; nroots];
    let mut deg = vec![0i64; nroots];
    for (i, g) in gens.iter().enumerate() {
        let si = rs.simple_index(i);
        w[si] = Some(g.1.clone());
        w[rs.negative_of(si)] = Some(g.2.clone());
        deg[si] = carrier.simples[i].degree;
        deg[rs.negative_of(si)] = -carrier.simples[i].degree;
    }
    // Extend by the extraspecial recursion, positive heights first.
    let mut order: Vec<usize> = (0..rs.n_pos).collect();
    order.sort_by_key(|&g| rs.height[g]);
    for &g in &order {
        if rs.height[g] < 2 {
            continue;
        }
        let (mu, nu, c) = rs.extraspecial_pair(g).unwrap();
        let wg = model.bracket(w[mu].as_ref().unwrap(), w[nu].as_ref().unwrap());
        let inv = ExactScalar::from_rat(Rat::new(1.into(), c.into()));
        w[g] = Some(scale(&wg, &inv));
        let (gneg, muneg, nuneg) = (rs.negative_of(g), rs.negative_of(mu), rs.negative_of(nu));
        let wng = model.bracket(w[muneg].as_ref().unwrap(), w[nuneg].as_ref().unwrap());
        let minv = ExactScalar::from_rat(Rat::new((-1).into(), c.into()));
        w[gneg] = Some(scale(&wng, &minv));
        deg[g] = (0..rs.rank)
            .map(|i| rs.roots[g][i] * carrier.simples[i].degree)
            .sum();
        deg[gneg] = -deg[g];
    }
    let w: Vec<Element> = w.into_iter().map(|x| x.unwrap()).collect();
    // Verify the Chevalley-basis axioms inside the carrier.
    let mut k_alpha: Vec<Element> = Vec::with_capacity(nroots);
    for a in 0..nroots {
        let ka = model.bracket(&w[a], &w[rs.negative_of(a)]);
        // α(k_α) = 2.
        let kaa = model.bracket(&ka, &w[a]);
        if kaa != scale(&w[a], &ExactScalar::from_int(2)) {
            return Err(LieError::Invalid("carrier basis fails α(k_α) = 2".into()));
        }
        k_alpha.push(ka);
    }
    for a in 0..nroots {
        for b in 0..nroots {
            if let Some(t) = rs.sum(a, b) {
                let br = model.bracket(&w[a], &w[b]);
                // br = N·w_t with N integral of the right magnitude.
                let k = w[t].iter().position(|c| !c.is_zero()).unwrap();
                let n = &br[k] / &w[t][k];
                if scale(&w[t], &n) != br {
                    return Err(LieError::Invalid("carrier bracket escapes the root space".into()));
                }
                let nr = n
                    .as_rational()
                    .ok_or_else(|| LieError::Invalid("carrier N not rational".into()))?;
                if !nr.is_integer() {
                    return Err(LieError::Invalid("carrier N not integral".into()));
                }
                let q = rs.chain_down(b, a);
                if nr.to_integer().abs() != (q + 1).into() {
                    return Err(LieError::Invalid("carrier |N| differs from the chain length".into()));
                }
            }
        }
    }
    // Adapted system and its verification: inside the carrier the form is
    // of inner type, with λ_α = (−1)^{deg α}.
    let z: Vec<Element> = (0..nroots)
        .map(|a| {
            if rs.is_positive(a) {
                w[a].clone()
            } else {
                w[a].iter().map(|c| -c).collect()
            }
        })
        .collect();
    let mut lambda = vec![0i64; nroots];
    for a in 0..nroots {
        lambda[a] = if deg[a].rem_euclid(2) == 0 { 1 } else { -1 };
        let lam = ExactScalar::from_int(lambda[a]);
        // θ(z_α) = λ_α z_α and σ(z_α) = λ_α z_{−α}.
        if form.theta_apply(&z[a]) != scale(&z[a], &lam) {
            return Err(LieError::Invalid("carrier system not θ-adapted".into()));
        }
        if form.sigma_apply(&z[a]) != scale(&z[rs.negative_of(a)], &lam) {
            return Err(LieError::Invalid("carrier system not σ-adapted".into()));
        }
    }
    // Coefficients lie in Q(i, √2).
    for v in w.iter().chain(z.iter()) {
        for c in v {
            if c.radicands().iter().any(|&zrad| zrad != 2) {
                return Err(LieError::Invalid("carrier coefficients leave Q(i,√2)".into()));
            }
        }
    }
    Ok(CarrierChevalley { rs, gens, sigma_sign, deg, w, z, k_alpha, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::enumerate_orbits;
    use crate::realform::{build_real_form, enumerate_involutions};
    use crate::rootsystem::SimpleType;

    fn form(kind: SimpleType, rank: usize, descriptor: &str) -> RealForm {
        let model = ChevalleyModel::create(kind, rank).unwrap();
        let specs = enumerate_involutions(kind, rank).unwrap();
        let spec = specs.iter().find(|s| s.descriptor == descriptor).unwrap();
        build_real_form(&model, spec).unwrap()
    }

    #[test]
    fn conjugation_data_sl2r_su2() {
        let split = form(SimpleType::A, 1, "k1");
        let cd = conjugation_data(&split).unwrap();
        assert_eq!(cd.lambda_simple(&split, 0), -1);
        assert!(cd.r_simple(&split, 0).is_one());
        let compact = form(SimpleType::A, 1, "compact");
        let cd2 = conjugation_data(&compact).unwrap();
        assert_eq!(cd2.lambda_simple(&compact, 0), 1);
        assert_eq!(cd2.r_simple(&compact, 0), ExactScalar::from_int(-1));
    }

    #[test]
    fn r_inverse_relation_everywhere() {
        for (kind, rank, d) in [
            (SimpleType::A, 2, "k1"),
            (SimpleType::B, 2, "k2"),
            (SimpleType::G, 2, "k1"),
        ] {
            let f = form(kind, rank, d);
            let cd = conjugation_data(&f).unwrap();
            for a in 0..f.model.rs.num_roots() {
                let na = f.model.rs.negative_of(a);
                assert!((&cd.r[a] * &cd.r[na]).is_one());
            }
        }
    }

    #[test]
    fn sign_law_on_simples() {
        // sign(r_i) = sign(−λ_i) on simple roots.
        for (kind, rank) in [(SimpleType::A, 1), (SimpleType::A, 2), (SimpleType::C, 2)] {
            for spec in enumerate_involutions(kind, rank).unwrap() {
                if spec.kind != InvolutionKind::Inner {
                    continue;
                }
                let model = ChevalleyModel::create(kind, rank).unwrap();
                let f = build_real_form(&model, &spec).unwrap();
                let cd = conjugation_data(&f).unwrap();
                for i in 0..rank {
                    let r = cd.r_simple(&f, i);
                    let lam = cd.lambda_simple(&f, i);
                    let sgn = r.sign_real().unwrap();
                    if lam == 1 {
                        assert_eq!(sgn, std::cmp::Ordering::Less);
                    } else {
                        assert_eq!(sgn, std::cmp::Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn standard_system_axioms() {
        for (kind, rank) in [(SimpleType::A, 1), (SimpleType::A, 2), (SimpleType::G, 2)] {
            let model = ChevalleyModel::create(kind, rank).unwrap();
            let sys = standard_system(&model);
            verify_chevalley_system(&model, &sys).unwrap();
        }
    }

    #[test]
    fn adapt_inner_small_forms() {
        for (kind, rank, d) in [
            (SimpleType::A, 1, "k1"),
            (SimpleType::A, 1, "compact"),
            (SimpleType::A, 2, "k1"),
        ] {
            let f = form(kind, rank, d);
            let (_, sys) = adapt_system_inner(&f).unwrap();
            assert!(sys.adapted, "{kind}{rank} {d}");
        }
        // Outer forms are rejected.
        let outer = form(SimpleType::A, 2, "outer");
        assert!(adapt_system_inner(&outer).is_err());
    }

    #[test]
    fn adapted_m_constants_symmetric() {
        // M_{α,β} = M_{−α,−β} for the adapted system.
        let f = form(SimpleType::A, 2, "k1");
        let (_, sys) = adapt_system_inner(&f).unwrap();
        let model = &f.model;
        for a in 0..model.rs.num_roots() {
            for b in 0..model.rs.num_roots() {
                if let Some(t) = model.rs.sum(a, b) {
                    let br = model.bracket(&sys.w[a], &sys.w[b]);
                    let k = sys.w[t].iter().position(|c| !c.is_zero()).unwrap();
                    let m = &br[k] / &sys.w[t][k];
                    let (na, nb) = (model.rs.negative_of(a), model.rs.negative_of(b));
                    let nt = model.rs.sum(na, nb).unwrap();
                    let brn = model.bracket(&sys.w[na], &sys.w[nb]);
                    let kn = sys.w[nt].iter().position(|c| !c.is_zero()).unwrap();
                    let mn = &brn[kn] / &sys.w[nt][kn];
                    assert_eq!(m, mn);
                }
            }
        }
    }

    #[test]
    fn adapt_inner_exists_rank_four() {
        // Existence on every inner form up to rank 4, exhaustively.
        for (kind, rank) in [(SimpleType::A, 4), (SimpleType::D, 4)] {
            let model = ChevalleyModel::create(kind, rank).unwrap();
            for spec in enumerate_involutions(kind, rank).unwrap() {
                if spec.kind != InvolutionKind::Inner {
                    continue;
                }
                let f = build_real_form(&model, &spec).unwrap();
                let (_, sys) = adapt_system_inner(&f).unwrap();
                assert!(sys.adapted, "{kind}{rank}:{}", spec.descriptor);
            }
        }
    }

    #[test]
    fn carrier_systems_small() {
        for (kind, rank, d) in [
            (SimpleType::A, 1, "k1"),
            (SimpleType::A, 2, "k1"),
            (SimpleType::A, 2, "outer"),
        ] {
            let f = form(kind, rank, d);
            for entry in enumerate_orbits(&f).unwrap() {
                let cc = carrier_adapted_system(&f, &entry.carrier).unwrap();
                assert_eq!(cc.rank(), entry.carrier.rank());
                // σ(a_i) = ±b_i with the sign matching −λ on the simples.
                for (i, s) in cc.sigma_sign.iter().enumerate() {
                    let si = cc.rs.simple_index(i);
                    assert_eq!(*s, -cc.lambda[si]);
                }
            }
        }
    }
}

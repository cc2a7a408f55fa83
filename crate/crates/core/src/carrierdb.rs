//! Persistent database of simple non-principal carrier algebras with solved
//! complex Cayley triples, and transfer of those triples into isomorphic
//! carriers found later.
//!
//! A record stores the data that determines the carrier, its grading, and
//! σ completely: the multiplication table and canonical generators, the
//! Cartan matrix, the signs λ_i (σ(a_i) = λ_i b_i) and degrees ε_i, and a
//! complex Cayley triple with e ∈ s₁ in general position. Records are one
//! self-describing text file each, format `carrierdb-v1`, bit-exact on
//! round trip.

use crate::carrier::CarrierAlgebra;
use crate::cayley::{Sl2Triple, TripleKind};
use crate::chevsys::CarrierChevalley;
use crate::error::LieError;
use crate::exact::{rat_int, ExactScalar};
use crate::linalg::{Mat, Span};
use crate::realform::{scale, RealForm};
use crate::rootsystem::{
    extend_from_generators, permutations, type_string, CartanMatrix, ChevalleyModel, Element,
    ModelMap,
};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// A stored simple (or semisimple) non-principal carrier with its triple,
/// over the abstract basis {k_1..k_s, w_1..w_m}.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierRecord {
    pub cartan: Vec<Vec<i64>>,
    pub lambda: Vec<i64>,
    pub eps: Vec<i64>,
    pub triple_f: Vec<ExactScalar>,
    pub triple_h: Vec<ExactScalar>,
    pub triple_e: Vec<ExactScalar>,
}

/// The abstract carrier model reconstructed from a record: the Chevalley
/// model of the Cartan matrix plus σ, grading, and defining element.
pub struct AbstractCarrier {
    pub model: ChevalleyModel,
    pub sigma: ModelMap,
    /// Degree of each basis vector.
    pub degrees: Vec<i64>,
    pub defining: Element,
}

impl CarrierRecord {
    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn key_string(&self) -> String {
        let comps = crate::rootsystem::classify_cartan(&self.cartan).expect("valid Cartan");
        let eps: String = self.eps.iter().map(|e| e.to_string()).collect();
        let lam: String = self
            .lambda
            .iter()
            .map(|l| if *l > 0 { 'p' } else { 'm' })
            .collect();
        format!("{}.e{}.l{}", type_string(&comps), eps, lam)
    }

    /// Rebuilds the abstract algebra and validates every stored invariant;
    /// a record that fails any check is rejected.
    pub fn realize(&self) -> Result<AbstractCarrier, LieError> {
        let s = self.rank();
        if self.lambda.len() != s || self.eps.len() != s {
            return Err(LieError::Invalid("record arity mismatch".into()));
        }
        if self.lambda.iter().any(|l| l.abs() != 1) {
            return Err(LieError::Invalid("record λ entries must be ±1".into()));
        }
        if self.eps.iter().any(|e| *e != 0 && *e != 1) {
            return Err(LieError::Invalid("record ε entries must be 0 or 1".into()));
        }
        if self.eps.iter().all(|e| *e == 1) {
            return Err(LieError::Invalid("principal carriers are not stored".into()));
        }
        let cm = CartanMatrix::from_entries(self.cartan.clone())?;
        let model = ChevalleyModel::new(crate::rootsystem::RootSystem::new(cm)?)?;
        let dim = model.dim;
        if self.triple_f.len() != dim || self.triple_h.len() != dim || self.triple_e.len() != dim {
            return Err(LieError::Invalid("triple coordinate arity mismatch".into()));
        }
        // σ from the generator images, antilinearly.
        let gens = model.canonical_generators();
        let images: Vec<_> = (0..s)
            .map(|i| {
                let (c, a, b) = &gens[i];
                let l = ExactScalar::from_int(self.lambda[i]);
                (
                    c.iter().map(|x| -x.clone()).collect::<Element>(),
                    scale(b, &l),
                    scale(a, &l),
                )
            })
            .collect();
        let sigma = extend_from_generators(&model, &gens, &model, &images, true)?;
        // σ² = id.
        if !sigma.compose(&sigma).equals(&ModelMap::identity(dim)) {
            return Err(LieError::Invalid("record σ is not an involution".into()));
        }
        // Defining element from the degrees: [H, a_i] = ε_i a_i.
        let cmat = Mat::from_rows(
            self.cartan
                .iter()
                .map(|row| row.iter().map(|&x| ExactScalar::from_int(x)).collect())
                .collect(),
        );
        let rhs: Vec<ExactScalar> = self.eps.iter().map(|&e| ExactScalar::from_int(e)).collect();
        let t = cmat
            .solve(&rhs)
            .ok_or_else(|| LieError::Invalid("no defining element for the record".into()))?;
        let mut defining = model.zero();
        for (j, c) in t.iter().enumerate() {
            defining[j] = c.clone();
        }
        // Degrees per basis vector.
        let mut degrees = vec![0i64; dim];
        for r in 0..model.rs.num_roots() {
            let d: i64 = (0..s).map(|i| model.rs.roots[r][i] * self.eps[i]).sum();
            degrees[model.x_index(r)] = d;
        }
        let ac = AbstractCarrier { model, sigma, degrees, defining };
        ac.validate_triple(&self.triple_f, &self.triple_h, &self.triple_e)?;
        Ok(ac)
    }
}

impl AbstractCarrier {
    fn graded_basis(&self, k: i64) -> Vec<usize> {
        (0..self.model.dim).filter(|&i| self.degrees[i] == k).collect()
    }

    /// Complex-Cayley validation in the abstract algebra: sl2 relations,
    /// σ(e) = f, h = 2·defining, e ∈ s₁ in general position.
    pub fn validate_triple(
        &self,
        f: &[ExactScalar],
        h: &[ExactScalar],
        e: &[ExactScalar],
    ) -> Result<(), LieError> {
        let model = &self.model;
        if model.bracket(h, e) != scale(e, &ExactScalar::from_int(2))
            || model.bracket(h, f) != scale(f, &ExactScalar::from_int(-2))
            || model.bracket(e, f) != *h
        {
            return Err(LieError::Invalid("record triple fails the sl2 relations".into()));
        }
        if self.sigma.apply(e) != *f {
            return Err(LieError::Invalid("record triple fails σ(e) = f".into()));
        }
        if *h != scale(&self.defining, &ExactScalar::from_int(2)) {
            return Err(LieError::Invalid("record h is not twice the defining element".into()));
        }
        // Homogeneity: e supported in degree 1, f in degree −1.
        for (i, c) in e.iter().enumerate() {
            if !c.is_zero() && self.degrees[i] != 1 {
                return Err(LieError::Invalid("record e is not homogeneous of degree 1".into()));
            }
        }
        for (i, c) in f.iter().enumerate() {
            if !c.is_zero() && self.degrees[i] != -1 {
                return Err(LieError::Invalid("record f is not homogeneous of degree −1".into()));
            }
        }
        // General position: [s₀, e] = s₁.
        let s0 = self.graded_basis(0);
        let s1 = self.graded_basis(1);
        let mut image = Span::new(self.model.dim);
        for &i in &s0 {
            image.insert(&model.bracket(&model.basis_vec(i), e));
        }
        if image.rank() != s1.len() {
            return Err(LieError::Invalid("record e is not in general position".into()));
        }
        Ok(())
    }
}

fn scalar_row(v: &[ExactScalar]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

fn parse_scalar_row(s: &str, dim: usize) -> Result<Vec<ExactScalar>, LieError> {
    let parts: Vec<&str> = s.split(',').map(|p| p.trim()).collect();
    if parts.len() != dim {
        return Err(LieError::Invalid(format!(
            "expected {dim} coordinates, found {}",
            parts.len()
        )));
    }
    parts
        .into_iter()
        .map(|p| p.parse::<ExactScalar>().map_err(LieError::from))
        .collect()
}

/// Canonical text serialization (`carrierdb-v1`).
pub fn render_record(record: &CarrierRecord) -> String {
    let ac = record.realize().expect("only validated records are rendered");
    let model = &ac.model;
    let s = record.rank();
    let name = |i: usize| -> String {
        if i < s {
            format!("k{}", i + 1)
        } else {
            format!("w{}", i - s + 1)
        }
    };
    let mut out = String::new();
    out.push_str("carrierdb-v1\n");
    out.push_str(&format!("rank: {s}\n"));
    out.push_str(&format!(
        "cartan: {}\n",
        record
            .cartan
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    ));
    out.push_str(&format!(
        "lambda: {}\n",
        record.lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "eps: {}\n",
        record.eps.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("dim: {}\n", model.dim));
    out.push_str("table:\n");
    out.push_str(&crate::rootsystem::export_table(
        model.dim,
        |i, j| model.bracket(&model.basis_vec(i), &model.basis_vec(j)),
        name,
    ));
    out.push_str("triple_f: ");
    out.push_str(&scalar_row(&record.triple_f));
    out.push('\n');
    out.push_str("triple_h: ");
    out.push_str(&scalar_row(&record.triple_h));
    out.push('\n');
    out.push_str("triple_e: ");
    out.push_str(&scalar_row(&record.triple_e));
    out.push('\n');
    out.push_str("end\n");
    out
}

pub fn parse_record(text: &str) -> Result<CarrierRecord, LieError> {
    let mut lines = text.lines();
    if lines.next() != Some("carrierdb-v1") {
        return Err(LieError::Invalid("missing carrierdb-v1 header".into()));
    }
    let mut rank = None;
    let mut cartan = None;
    let mut lambda = None;
    let mut eps = None;
    let mut table_lines: Vec<String> = Vec::new();
    let mut triple: BTreeMap<&str, String> = BTreeMap::new();
    let mut in_table = false;
    for line in lines {
        let line = line.trim_end();
        if line == "end" {
            break;
        }
        if line == "table:" {
            in_table = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("triple_f: ") {
            in_table = false;
            triple.insert("f", rest.to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("triple_h: ") {
            triple.insert("h", rest.to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("triple_e: ") {
            triple.insert("e", rest.to_string());
            continue;
        }
        if in_table {
            table_lines.push(line.to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("rank: ") {
            rank = Some(rest.parse::<usize>().map_err(|e| LieError::Invalid(e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("cartan: ") {
            let rows: Result<Vec<Vec<i64>>, LieError> = rest
                .split(';')
                .map(|row| {
                    row.split_whitespace()
                        .map(|x| x.parse::<i64>().map_err(|e| LieError::Invalid(e.to_string())))
                        .collect()
                })
                .collect();
            cartan = Some(rows?);
        } else if let Some(rest) = line.strip_prefix("lambda: ") {
            lambda = Some(
                rest.split_whitespace()
                    .map(|x| x.parse::<i64>().map_err(|e| LieError::Invalid(e.to_string())))
                    .collect::<Result<Vec<i64>, _>>()?,
            );
        } else if let Some(rest) = line.strip_prefix("eps: ") {
            eps = Some(
                rest.split_whitespace()
                    .map(|x| x.parse::<i64>().map_err(|e| LieError::Invalid(e.to_string())))
                    .collect::<Result<Vec<i64>, _>>()?,
            );
        }
    }
    let cartan = cartan.ok_or_else(|| LieError::Invalid("missing cartan".into()))?;
    let rank = rank.ok_or_else(|| LieError::Invalid("missing rank".into()))?;
    if cartan.len() != rank {
        return Err(LieError::Invalid("rank does not match the Cartan matrix".into()));
    }
    let lambda = lambda.ok_or_else(|| LieError::Invalid("missing lambda".into()))?;
    let eps = eps.ok_or_else(|| LieError::Invalid("missing eps".into()))?;
    // Dimension from the reconstructed model.
    let cm = CartanMatrix::from_entries(cartan.clone())?;
    let model = ChevalleyModel::new(crate::rootsystem::RootSystem::new(cm)?)?;
    let dim = model.dim;
    let record = CarrierRecord {
        cartan,
        lambda,
        eps,
        triple_f: parse_scalar_row(
            triple.get("f").ok_or_else(|| LieError::Invalid("missing triple_f".into()))?,
            dim,
        )?,
        triple_h: parse_scalar_row(
            triple.get("h").ok_or_else(|| LieError::Invalid("missing triple_h".into()))?,
            dim,
        )?,
        triple_e: parse_scalar_row(
            triple.get("e").ok_or_else(|| LieError::Invalid("missing triple_e".into()))?,
            dim,
        )?,
    };
    // The stored table must match the canonical reconstruction.
    let s = record.rank();
    let name = |i: usize| -> String {
        if i < s {
            format!("k{}", i + 1)
        } else {
            format!("w{}", i - s + 1)
        }
    };
    let expected = crate::rootsystem::export_table(
        dim,
        |i, j| model.bracket(&model.basis_vec(i), &model.basis_vec(j)),
        name,
    );
    let expected_lines: Vec<&str> = expected.lines().collect();
    if table_lines != expected_lines {
        return Err(LieError::Invalid("stored multiplication table is corrupted".into()));
    }
    record.realize()?;
    Ok(record)
}

/// File-backed database of carrier records, one `<id>.carrier` file each.
pub struct CarrierDb {
    pub dir: PathBuf,
}

impl CarrierDb {
    pub fn open(dir: &Path) -> Result<Self, LieError> {
        std::fs::create_dir_all(dir)?;
        Ok(CarrierDb { dir: dir.to_path_buf() })
    }

    pub fn list(&self) -> Result<Vec<(String, CarrierRecord)>, LieError> {
        let mut out = Vec::new();
        let mut entries: Vec<PathBuf> = std::fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "carrier"))
            .collect();
        entries.sort();
        for path in entries {
            let text = std::fs::read_to_string(&path)?;
            let record = parse_record(&text)?;
            let id = path.file_stem().unwrap().to_string_lossy().to_string();
            out.push((id, record));
        }
        Ok(out)
    }

    /// Validates and persists a record; rejects duplicates of the same
    /// (Cartan matrix, λ, ε) key up to simultaneous permutation.
    pub fn store(&self, record: &CarrierRecord) -> Result<String, LieError> {
        record.realize()?;
        for (id, existing) in self.list()? {
            if match_permutation(&existing, &record.cartan, &record.lambda, &record.eps).is_some() {
                return Err(LieError::Invalid(format!("record already present as {id}")));
            }
        }
        let id = record.key_string();
        let path = self.dir.join(format!("{id}.carrier"));
        std::fs::write(&path, render_record(record))?;
        Ok(id)
    }

    pub fn load(&self, id: &str) -> Result<CarrierRecord, LieError> {
        let path = self.dir.join(format!("{id}.carrier"));
        let text = std::fs::read_to_string(&path)?;
        parse_record(&text)
    }

    /// Finds a record matching the query data up to a simultaneous
    /// permutation of the generators (a Dynkin-diagram symmetry).
    pub fn lookup(
        &self,
        cartan: &[Vec<i64>],
        lambda: &[i64],
        eps: &[i64],
    ) -> Result<Option<(String, CarrierRecord, Vec<usize>)>, LieError> {
        for (id, record) in self.list()? {
            if let Some(perm) = match_permutation(&record, cartan, lambda, eps) {
                return Ok(Some((id, record, perm)));
            }
        }
        Ok(None)
    }
}

/// A permutation p with query[p(i)] matching record[i] in all three of
/// Cartan matrix, λ, and ε.
fn match_permutation(
    record: &CarrierRecord,
    cartan: &[Vec<i64>],
    lambda: &[i64],
    eps: &[i64],
) -> Option<Vec<usize>> {
    let s = record.rank();
    if cartan.len() != s {
        return None;
    }
    'perm: for p in permutations(s) {
        for i in 0..s {
            if lambda[p[i]] != record.lambda[i] || eps[p[i]] != record.eps[i] {
                continue 'perm;
            }
            for j in 0..s {
                if cartan[p[i]][p[j]] != record.cartan[i][j] {
                    continue 'perm;
                }
            }
        }
        return Some(p);
    }
    None
}

/// Builds a record from a solved carrier: coordinates of (σ(x), h, x) over
/// the carrier's abstract basis.
pub fn record_from_solution(
    form: &RealForm,
    carrier: &CarrierAlgebra,
    cc: &CarrierChevalley,
    h: &[ExactScalar],
    x: &[ExactScalar],
) -> Result<CarrierRecord, LieError> {
    // Ambient basis in abstract order: k_i then w_roots.
    let mut cols: Vec<Element> = cc.gens.iter().map(|g| g.0.clone()).collect();
    cols.extend(cc.w.iter().cloned());
    let mat = Mat::from_cols(cols);
    let to_abstract = |v: &[ExactScalar]| -> Result<Vec<ExactScalar>, LieError> {
        mat.solve(v)
            .ok_or_else(|| LieError::Invalid("element outside the carrier".into()))
    };
    let f = form.sigma_apply(x);
    let record = CarrierRecord {
        cartan: carrier.cartan_matrix.clone(),
        lambda: cc.sigma_sign.clone(),
        eps: carrier.simples.iter().map(|sm| sm.degree).collect(),
        triple_f: to_abstract(&f)?,
        triple_h: to_abstract(h)?,
        triple_e: to_abstract(x)?,
    };
    record.realize()?;
    Ok(record)
}

/// Maps a stored triple into a freshly computed carrier through the graded
/// isomorphism φ: (k_i, a_i, b_i) ↦ (k'_{p(i)}, μ_i a'_{p(i)}, μ_i⁻¹ b'_{p(i)})
/// with μ_i = √(λ_i/λ'_i); requires the Cartan-matrix, sign, and degree
/// match conditions.
pub fn transfer_triple(
    form: &RealForm,
    record: &CarrierRecord,
    perm: &[usize],
    carrier: &CarrierAlgebra,
    cc: &CarrierChevalley,
) -> Result<Sl2Triple, LieError> {
    let ac = record.realize()?;
    let s = record.rank();
    // Match conditions re-checked before mapping.
    for i in 0..s {
        if cc.sigma_sign[perm[i]] != record.lambda[i] {
            return Err(LieError::Invalid("sign condition sgn(λ') = sgn(λ) fails".into()));
        }
        if carrier.simples[perm[i]].degree != record.eps[i] {
            return Err(LieError::Invalid("degree condition ε' = ε fails".into()));
        }
        for j in 0..s {
            if carrier.cartan_matrix[perm[i]][perm[j]] != record.cartan[i][j] {
                return Err(LieError::Invalid("Cartan matrices do not match".into()));
            }
        }
    }
    let src_gens = ac.model.canonical_generators();
    let mut images = Vec::with_capacity(s);
    for i in 0..s {
        let (kp, ap, bp) = &cc.gens[perm[i]];
        // λ and λ' share signs, so the ratio is positive and μ is real.
        let ratio = rat_int(record.lambda[i]) / rat_int(cc.sigma_sign[perm[i]]);
        let mu = ExactScalar::sqrt_rational(&ratio);
        let mu_inv = mu.inverse()?;
        images.push((kp.clone(), scale(ap, &mu), scale(bp, &mu_inv)));
    }
    let phi = extend_from_generators(&ac.model, &src_gens, &form.model, &images, false)?;
    // φ∘σ = σ'∘φ on the canonical generators.
    for (c, a, b) in &src_gens {
        for v in [c, a, b] {
            let lhs = phi.apply(&ac.sigma.apply(v));
            let rhs = form.sigma_apply(&phi.apply(v));
            if lhs != rhs {
                return Err(LieError::Invalid("φ∘σ ≠ σ'∘φ on the generators".into()));
            }
        }
    }
    // φ is graded: degrees of generator images match ε.
    let h_target = scale(&carrier.defining, &ExactScalar::from_int(2));
    let hmap = phi.apply(&record.triple_h);
    if hmap != h_target {
        return Err(LieError::Invalid("φ(h) is not the target characteristic".into()));
    }
    let x = phi.apply(&record.triple_e);
    let y = phi.apply(&record.triple_f);
    let triple = Sl2Triple::new(y, hmap, x.clone(), TripleKind::ComplexCayley);
    crate::cayley::validate_triple(form, &triple)?;
    // General position in the target.
    let s1 = carrier.component(1);
    let mut image = Span::new(form.model.dim);
    for b in carrier.component(0) {
        image.insert(&form.model.bracket(b, &x));
    }
    if image.rank() != s1.len() {
        return Err(LieError::Invalid("transferred e not in general position".into()));
    }
    Ok(triple)
}

/// A resolver hook for the orbit pipeline: looks the carrier up and
/// transfers the stored triple.
pub fn db_hook<'a>(
    db: &'a CarrierDb,
) -> impl Fn(&RealForm, &CarrierAlgebra, &CarrierChevalley, &Element) -> Option<(Element, String)> + 'a
{
    move |form, carrier, cc, _h| {
        let eps: Vec<i64> = carrier.simples.iter().map(|s| s.degree).collect();
        let found = db
            .lookup(&carrier.cartan_matrix, &cc.sigma_sign, &eps)
            .ok()
            .flatten()?;
        let (id, record, perm) = found;
        let triple = transfer_triple(form, &record, &perm, carrier, cc).ok()?;
        Some((triple.e, id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::enumerate_orbits;
    use crate::cayley::nonprincipal_cayley_element;
    use crate::chevsys::carrier_adapted_system;
    use crate::realform::{build_real_form, enumerate_involutions};
    use crate::rootsystem::SimpleType;

    fn g2_split() -> RealForm {
        let model = ChevalleyModel::create(SimpleType::G, 2).unwrap();
        let specs = enumerate_involutions(SimpleType::G, 2).unwrap();
        let spec = specs.iter().find(|s| s.descriptor == "k1").unwrap();
        build_real_form(&model, spec).unwrap()
    }

    fn nonprincipal_record(form: &RealForm) -> (CarrierRecord, CarrierAlgebra, CarrierChevalley) {
        let entries = enumerate_orbits(form).unwrap();
        let entry = entries
            .iter()
            .find(|e| !e.carrier.principal)
            .expect("split G2 has a non-principal carrier");
        let cc = carrier_adapted_system(form, &entry.carrier).unwrap();
        let x = nonprincipal_cayley_element(form, &cc, &entry.h).unwrap();
        let record = record_from_solution(form, &entry.carrier, &cc, &entry.h, &x).unwrap();
        (record, entry.carrier.clone(), cc)
    }

    #[test]
    fn record_round_trip_and_dedup() {
        let form = g2_split();
        let (record, _, _) = nonprincipal_record(&form);
        let dir = std::env::temp_dir().join(format!("lieksdbtest{}", std::process::id()));
        let db = CarrierDb::open(&dir).unwrap();
        let id = db.store(&record).unwrap();
        let loaded = db.load(&id).unwrap();
        assert_eq!(loaded, record);
        // Bit-exact file round trip.
        let path = dir.join(format!("{id}.carrier"));
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes, render_record(&loaded).into_bytes());
        // Duplicate keys are rejected.
        assert!(db.store(&record).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn broken_records_rejected() {
        let form = g2_split();
        let (record, _, _) = nonprincipal_record(&form);
        let mut broken = record.clone();
        broken.triple_e[0] = &broken.triple_e[0] + &ExactScalar::one();
        assert!(broken.realize().is_err());
        // Flipped ε is a different key, found by lookup only exactly.
        let dir = std::env::temp_dir().join(format!("lieksdbtest2-{}", std::process::id()));
        let db = CarrierDb::open(&dir).unwrap();
        db.store(&record).unwrap();
        let mut eps = record.eps.clone();
        eps[0] = 1 - eps[0];
        assert!(db
            .lookup(&record.cartan, &record.lambda, &eps)
            .unwrap()
            .is_none());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn transfer_identity() {
        let form = g2_split();
        let (record, carrier, cc) = nonprincipal_record(&form);
        let perm = match_permutation(
            &record,
            &carrier.cartan_matrix,
            &cc.sigma_sign,
            &carrier.simples.iter().map(|s| s.degree).collect::<Vec<_>>(),
        )
        .unwrap();
        let triple = transfer_triple(&form, &record, &perm, &carrier, &cc).unwrap();
        crate::cayley::validate_triple(&form, &triple).unwrap();
    }

    #[test]
    fn corrupted_file_rejected() {
        let form = g2_split();
        let (record, _, _) = nonprincipal_record(&form);
        let text = render_record(&record);
        // Tamper with a table line.
        let tampered = text.replace("table:\n[", "table:\n[k1,k1] = 5*k1\n[");
        assert!(parse_record(&tampered).is_err());
    }
}

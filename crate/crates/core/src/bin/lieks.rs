//! Command-line surface for the real-form / nilpotent-orbit pipeline.
//!
//! Forms are addressed by ids like `A2:inner:k1`, `A2:inner:compact`,
//! `A2:outer`, or `A3:outer:k2`; `lieks forms --type A --rank 2` lists the
//! ids available at a given type and rank. Exit code 0 means no errors and
//! no unresolved orbits; 2 flags unresolved-only outcomes.

use clap::{Parser, Subcommand};
use lieks::carrier::{enumerate_orbits, OrbitEntry};
use lieks::carrierdb::{db_hook, parse_record, record_from_solution, render_record, CarrierDb};
use lieks::cayley::{
    resolve_entry, validate_triple, NonprincipalHook, OrbitResolution, SolverKind,
};
use lieks::chevsys::{adapt_system_inner, carrier_adapted_system, conjugation_data};
use lieks::error::LieError;
use lieks::exact::ExactScalar;
use lieks::iso::{isomorphism, Verdict};
use lieks::polysolve::dump_restrictions;
use lieks::realform::{build_real_form, enumerate_involutions, InvolutionKind, RealForm};
use lieks::rootsystem::{export_table, ChevalleyModel, SimpleType};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "lieks",
    version,
    about = "Exact real forms of simple Lie algebras and their nilpotent orbits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the real forms of a complex simple type.
    Forms {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the nonzero nilpotent K^c-orbits of a form as carrier data.
    Orbits {
        form: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compute real Cayley triple representatives of the nilpotent orbits.
    Representatives {
        form: String,
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// Dump every restricted polynomial system of non-principal solves.
        #[arg(long = "dump-systems")]
        dump_systems: bool,
    },
    /// Decide isomorphism of two forms and print the generator images.
    Iso {
        #[arg(long = "form-a")]
        form_a: String,
        #[arg(long = "form-b")]
        form_b: String,
        #[arg(long)]
        json: bool,
    },
    /// Export the real multiplication table of a form.
    ExportTable {
        #[arg(long)]
        form: String,
    },
    /// Re-run the structural verifications for a form.
    Verify {
        #[arg(long)]
        form: String,
    },
    /// Carrier-record database operations.
    Db {
        #[command(subcommand)]
        op: DbOp,
    },
}

#[derive(Subcommand)]
enum DbOp {
    /// Validate and add a record file to the database.
    Add {
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        record: PathBuf,
    },
    /// Find a record by Cartan type, λ-signs, and degrees.
    Find {
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long = "type")]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
    },
    /// List the stored records.
    List {
        #[arg(long)]
        path: Option<PathBuf>,
    },
}

fn db_dir(flag: Option<PathBuf>) -> Result<PathBuf, LieError> {
    if let Some(p) = flag {
        return Ok(p);
    }
    if let Ok(env) = std::env::var("LIEKS_DB") {
        return Ok(PathBuf::from(env));
    }
    Err(LieError::Invalid("no database path: pass --path or set LIEKS_DB".into()))
}

/// Parses `A2:inner:k1` / `A2:inner:compact` / `A2:outer` / `A3:outer:k2`.
fn resolve_form(id: &str) -> Result<(SimpleType, usize, RealForm), LieError> {
    let parts: Vec<&str> = id.split(':').collect();
    if parts.len() < 2 {
        return Err(LieError::Invalid(format!("malformed form id {id}")));
    }
    let type_part = parts[0];
    if type_part.len() < 2 {
        return Err(LieError::Invalid(format!("malformed type {type_part}")));
    }
    let kind = SimpleType::from_str(&type_part[..1])?;
    let rank: usize = type_part[1..]
        .parse()
        .map_err(|_| LieError::Invalid(format!("malformed rank in {type_part}")))?;
    let descriptor = match (parts.len(), parts[1]) {
        (3, "inner") => parts[2].to_string(),
        (2, "outer") => "outer".to_string(),
        (3, "outer") => format!("outer:{}", parts[2]),
        _ => {
            return Err(LieError::Invalid(format!(
                "form id must look like A2:inner:k1 or A2:outer, got {id}"
            )))
        }
    };
    let model = ChevalleyModel::create(kind, rank)?;
    let specs = enumerate_involutions(kind, rank)?;
    let spec = specs
        .iter()
        .find(|s| s.descriptor == descriptor)
        .ok_or_else(|| LieError::NotFound(format!("no form {id}; try `lieks forms`")))?;
    let form = build_real_form(&model, spec)?;
    Ok((kind, rank, form))
}

fn basis_name(form: &RealForm, i: usize) -> String {
    if i < form.dim_k() {
        format!("K{}", i + 1)
    } else {
        format!("P{}", i + 1 - form.dim_k())
    }
}

fn coeff_rows(form: &RealForm, v: &[ExactScalar]) -> Result<Vec<String>, LieError> {
    Ok(form.real_coords(v)?.iter().map(|c| c.to_string()).collect())
}

fn run() -> Result<ExitCode, LieError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Forms { kind, rank, json } => {
            let kind = SimpleType::from_str(&kind)?;
            let model = ChevalleyModel::create(kind, rank)?;
            let specs = enumerate_involutions(kind, rank)?;
            let mut rows = Vec::new();
            for spec in &specs {
                let f = build_real_form(&model, spec)?;
                rows.push((f.id_string(kind, rank), f));
            }
            if json {
                let arr: Vec<_> = rows
                    .iter()
                    .map(|(id, f)| {
                        json!({
                            "id": id,
                            "name": f.name,
                            "dim_k": f.dim_k(),
                            "dim_p": f.dim_p(),
                            "signature": [f.killing_signature.0, f.killing_signature.1],
                            "lambda": f.spec.lambda,
                            "pi": f.spec.pi.iter().map(|p| p + 1).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&arr).unwrap());
            } else {
                println!(
                    "{:<22} {:<10} {:>5} {:>5} {:>10}  {}",
                    "id", "name", "dim k", "dim p", "signature", "lambda / pi"
                );
                for (id, f) in &rows {
                    println!(
                        "{:<22} {:<10} {:>5} {:>5} {:>10}  {:?} / {:?}",
                        id,
                        f.name,
                        f.dim_k(),
                        f.dim_p(),
                        format!("({},{})", f.killing_signature.0, f.killing_signature.1),
                        f.spec.lambda,
                        f.spec.pi.iter().map(|p| p + 1).collect::<Vec<_>>()
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Orbits { form, json, jobs } => {
            let (_, _, f) = resolve_form(&form)?;
            let entries = with_pool(jobs, || enumerate_orbits(&f))?;
            if json {
                let arr: Vec<_> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "carrier_type": e.carrier.type_string(),
                            "graded_dims": e.carrier.graded_dims(),
                            "defining": e.key.defining,
                            "principal": e.carrier.principal,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&arr).unwrap());
            } else {
                println!("{} orbit(s)", entries.len());
                for (i, e) in entries.iter().enumerate() {
                    println!(
                        "orbit {}: carrier {} graded {:?} principal={} defining=[{}]",
                        i + 1,
                        e.carrier.type_string(),
                        e.carrier.graded_dims(),
                        e.carrier.principal,
                        e.key.defining.join(", ")
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Representatives { form, db, json, jobs, dump_systems } => {
            let (_, _, f) = resolve_form(&form)?;
            let db = match db.map(|p| CarrierDb::open(&p)).transpose()? {
                Some(d) => Some(d),
                None => match std::env::var("LIEKS_DB") {
                    Ok(p) => Some(CarrierDb::open(&PathBuf::from(p))?),
                    Err(_) => None,
                },
            };
            let entries = enumerate_orbits(&f)?;
            if dump_systems {
                for e in &entries {
                    if !e.carrier.principal {
                        let cc = carrier_adapted_system(&f, &e.carrier)?;
                        let (system, _) = lieks::cayley::cayley_system(&f, &cc, &e.h)?;
                        println!("# systems for carrier {}", e.carrier.type_string());
                        for line in dump_restrictions(&system) {
                            println!("{line}");
                        }
                    }
                }
            }
            let resolutions = resolve_all(&f, entries, db.as_ref(), jobs);
            // Store freshly solved non-principal carriers for reuse.
            if let Some(dbref) = db.as_ref() {
                for r in &resolutions {
                    if let OrbitResolution::Resolved { entry, complex, provenance, .. } = r {
                        if !entry.carrier.principal && provenance.solver == SolverKind::Groebner {
                            if let Ok(cc) = carrier_adapted_system(&f, &entry.carrier) {
                                if let Ok(record) = record_from_solution(
                                    &f,
                                    &entry.carrier,
                                    &cc,
                                    &entry.h,
                                    &complex.e,
                                ) {
                                    let _ = dbref.store(&record);
                                }
                            }
                        }
                    }
                }
            }
            let mut unresolved = 0usize;
            if json {
                let mut arr = Vec::new();
                for r in &resolutions {
                    match r {
                        OrbitResolution::Resolved { real, provenance, .. } => {
                            arr.push(json!({
                                "carrier_type": provenance.carrier_type,
                                "principal": provenance.principal,
                                "solver": provenance.solver.to_string(),
                                "graded_dims": provenance.graded_dims,
                                "f": coeff_rows(&f, &real.f)?,
                                "h": coeff_rows(&f, &real.h)?,
                                "e": coeff_rows(&f, &real.e)?,
                            }));
                        }
                        OrbitResolution::Unresolved { entry, reason } => {
                            unresolved += 1;
                            arr.push(json!({
                                "carrier_type": entry.carrier.type_string(),
                                "unresolved": reason,
                            }));
                        }
                    }
                }
                println!("{}", serde_json::to_string_pretty(&arr).unwrap());
            } else {
                for (i, r) in resolutions.iter().enumerate() {
                    match r {
                        OrbitResolution::Resolved { real, provenance, .. } => {
                            println!(
                                "orbit {}: carrier {} ({}) solver={}",
                                i + 1,
                                provenance.carrier_type,
                                if provenance.principal { "principal" } else { "non-principal" },
                                provenance.solver
                            );
                            println!("  f: {}", coeff_rows(&f, &real.f)?.join(", "));
                            println!("  h: {}", coeff_rows(&f, &real.h)?.join(", "));
                            println!("  e: {}", coeff_rows(&f, &real.e)?.join(", "));
                        }
                        OrbitResolution::Unresolved { entry, reason } => {
                            unresolved += 1;
                            println!(
                                "orbit {}: carrier {} UNRESOLVED: {}",
                                i + 1,
                                entry.carrier.type_string(),
                                reason
                            );
                        }
                    }
                }
            }
            if unresolved > 0 {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Iso { form_a, form_b, json } => {
            let (_, _, fa) = resolve_form(&form_a)?;
            let (_, _, fb) = resolve_form(&form_b)?;
            let res = isomorphism(&fa, &fb)?;
            let isomorphic = res.verdict == Verdict::Isomorphic;
            if json {
                let map = res.map.as_ref().map(|m| {
                    let gens = fa.model.canonical_generators();
                    gens.iter()
                        .map(|(c, a, b)| {
                            json!({
                                "h": m.apply(c).iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "x": m.apply(a).iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                                "y": m.apply(b).iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            })
                        })
                        .collect::<Vec<_>>()
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "isomorphic": isomorphic,
                        "generator_images": map,
                    }))
                    .unwrap()
                );
            } else if isomorphic {
                println!("isomorphic");
                let m = res.map.as_ref().unwrap();
                let gens = fa.model.canonical_generators();
                for (i, (c, a, b)) in gens.iter().enumerate() {
                    println!("psi(h{}) = {}", i + 1, element_string(&fb.model, &m.apply(c)));
                    println!("psi(x{}) = {}", i + 1, element_string(&fb.model, &m.apply(a)));
                    println!("psi(y{}) = {}", i + 1, element_string(&fb.model, &m.apply(b)));
                }
            } else {
                println!("not isomorphic");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportTable { form } => {
            let (_, _, f) = resolve_form(&form)?;
            let dim = f.dim();
            let table = export_table(
                dim,
                |i, j| {
                    f.real_table[i][j]
                        .iter()
                        .map(|r| ExactScalar::from_rat(r.clone()))
                        .collect()
                },
                |i| basis_name(&f, i),
            );
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { form } => {
            let (_, _, f) = resolve_form(&form)?;
            verify_form(&f)
        }
        Command::Db { op } => run_db(op),
    }
}

fn element_string(model: &ChevalleyModel, v: &[ExactScalar]) -> String {
    let rank = model.rank();
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let name = if i < rank {
                format!("h{}", i + 1)
            } else {
                format!("x[{}]", i - rank)
            };
            format!("({c})*{name}")
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn resolve_all(
    f: &RealForm,
    entries: Vec<OrbitEntry>,
    db: Option<&CarrierDb>,
    jobs: Option<usize>,
) -> Vec<OrbitResolution> {
    match db {
        Some(d) => {
            let hookfn = db_hook(d);
            let hook: NonprincipalHook<'_> = &hookfn;
            entries
                .into_iter()
                .map(|e| resolve_entry(f, e, Some(hook)))
                .collect()
        }
        None => match jobs {
            Some(n) if n > 1 => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .expect("thread pool");
                pool.install(|| {
                    use rayon::prelude::*;
                    entries
                        .into_par_iter()
                        .map(|e| resolve_entry(f, e, None))
                        .collect()
                })
            }
            _ => entries.into_iter().map(|e| resolve_entry(f, e, None)).collect(),
        },
    }
}

fn with_pool<T>(
    jobs: Option<usize>,
    body: impl FnOnce() -> Result<T, LieError> + Send,
) -> Result<T, LieError>
where
    T: Send,
{
    match jobs {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| LieError::Invalid(e.to_string()))?;
            pool.install(body)
        }
        _ => body(),
    }
}

fn verify_form(f: &RealForm) -> Result<ExitCode, LieError> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {}", name, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    check("model Jacobi identity", f.model.verify_jacobi());
    check("conjugation data relations", conjugation_data(f).is_ok());
    if f.spec.kind == InvolutionKind::Inner {
        check(
            "adapted Chevalley system",
            adapt_system_inner(f).map(|(_, s)| s.adapted).unwrap_or(false),
        );
    }
    let entries = enumerate_orbits(f)?;
    let mut carriers_ok = true;
    let mut triples_ok = true;
    for e in &entries {
        if carrier_adapted_system(f, &e.carrier).is_err() {
            carriers_ok = false;
        }
        match resolve_entry(f, e.clone(), None) {
            OrbitResolution::Resolved { real, complex, .. } => {
                if validate_triple(f, &real).is_err() || validate_triple(f, &complex).is_err() {
                    triples_ok = false;
                }
            }
            OrbitResolution::Unresolved { .. } => triples_ok = false,
        }
    }
    check("carrier adapted systems", carriers_ok);
    check("orbit representatives valid", triples_ok);
    if failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn run_db(op: DbOp) -> Result<ExitCode, LieError> {
    match op {
        DbOp::Add { path, record } => {
            let db = CarrierDb::open(&db_dir(path)?)?;
            let text = std::fs::read_to_string(&record)?;
            let rec = parse_record(&text)?;
            let id = db.store(&rec)?;
            println!("stored {id}");
            Ok(ExitCode::SUCCESS)
        }
        DbOp::Find { path, kind, lambda, eps } => {
            let db = CarrierDb::open(&db_dir(path)?)?;
            let cartan = cartan_from_type_string(&kind)?;
            let lambda = parse_sign_list(&lambda)?;
            let eps = parse_sign_list(&eps)?;
            match db.lookup(&cartan, &lambda, &eps)? {
                Some((id, rec, _)) => {
                    println!("found {id}");
                    print!("{}", render_record(&rec));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("not found");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        DbOp::List { path } => {
            let db = CarrierDb::open(&db_dir(path)?)?;
            for (id, rec) in db.list()? {
                println!(
                    "{id}: rank {} lambda {:?} eps {:?}",
                    rec.rank(),
                    rec.lambda,
                    rec.eps
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_sign_list(s: &str) -> Result<Vec<i64>, LieError> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| LieError::Invalid(e.to_string())))
        .collect()
}

/// Block-diagonal Cartan matrix of a component string like "A1+A1" or "G2".
fn cartan_from_type_string(s: &str) -> Result<Vec<Vec<i64>>, LieError> {
    let mut blocks: Vec<Vec<Vec<i64>>> = Vec::new();
    for part in s.split('+') {
        let part = part.trim();
        if part.len() < 2 {
            return Err(LieError::Invalid(format!("bad component {part}")));
        }
        let kind = SimpleType::from_str(&part[..1])?;
        let rank: usize = part[1..]
            .parse()
            .map_err(|_| LieError::Invalid(format!("bad rank in {part}")))?;
        let model = ChevalleyModel::create(kind, rank)?;
        blocks.push(model.rs.cartan.entries.clone());
    }
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![0i64; total]; total];
    let mut off = 0;
    for b in blocks {
        let n = b.len();
        for i in 0..n {
            for j in 0..n {
                out[off + i][off + j] = b[i][j];
            }
        }
        off += n;
    }
    Ok(out)
}

fn main() -> ExitCode {
    // Die quietly when a pager or `head` closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

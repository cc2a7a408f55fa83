//! Cross-checks of the orbit pipeline against classical classifications:
//! signed-Young-diagram counts for su(p,q), the partition rule for sl(n,R),
//! and frozen counts for the symplectic and exceptional split forms.

use lieks::carrier::enumerate_orbits;
use lieks::cayley::{real_orbit_representatives, OrbitResolution};
use lieks::realform::{build_real_form, enumerate_involutions, RealForm};
use lieks::rootsystem::{ChevalleyModel, SimpleType};

fn form(kind: SimpleType, rank: usize, descriptor: &str) -> RealForm {
    let model = ChevalleyModel::create(kind, rank).unwrap();
    let specs = enumerate_involutions(kind, rank).unwrap();
    let spec = specs.iter().find(|s| s.descriptor == descriptor).unwrap();
    build_real_form(&model, spec).unwrap()
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for rest in partitions(n - first, first) {
            let mut p = vec![first];
            p.extend(rest);
            out.push(p);
        }
    }
    out
}

/// Nonzero nilpotent orbit count of su(p,q): signed Young diagrams of
/// signature (p,q) — every row alternates signs from its starting sign,
/// rows of equal length are unordered — excluding the zero diagram 1^{p+q}.
fn su_orbit_count(p: usize, q: usize) -> usize {
    let n = p + q;
    let mut count = 0;
    for part in partitions(n, n) {
        if part.iter().all(|&r| r == 1) {
            continue; // only the zero element
        }
        // Row lengths with multiplicities.
        let mut lens: Vec<(usize, usize)> = Vec::new();
        for &r in &part {
            match lens.iter_mut().find(|(l, _)| *l == r) {
                Some((_, m)) => *m += 1,
                None => lens.push((r, 1)),
            }
        }
        // Choose, per length, how many rows start with +.
        fn rec(lens: &[(usize, usize)], plus: i64, minus: i64, count: &mut usize) {
            if plus < 0 || minus < 0 {
                return;
            }
            match lens.split_first() {
                None => {
                    if plus == 0 && minus == 0 {
                        *count += 1;
                    }
                }
                Some((&(len, mult), rest)) => {
                    let start_plus = (len as i64 + 1) / 2;
                    let start_minus = len as i64 / 2;
                    for k in 0..=mult as i64 {
                        // k rows start with +, mult − k start with −.
                        let dp = k * start_plus + (mult as i64 - k) * start_minus;
                        let dm = k * start_minus + (mult as i64 - k) * start_plus;
                        rec(rest, plus - dp, minus - dm, count);
                    }
                }
            }
        }
        rec(&lens, p as i64, q as i64, &mut count);
    }
    count
}

fn orbit_count(f: &RealForm) -> usize {
    enumerate_orbits(f).unwrap().len()
}

fn all_resolved(f: &RealForm) -> usize {
    let reps = real_orbit_representatives(f).unwrap();
    for r in &reps {
        if let OrbitResolution::Unresolved { reason, .. } = r {
            panic!("unresolved orbit in {}: {reason}", f.name);
        }
    }
    reps.len()
}

#[test]
fn su_oracle_self_checks() {
    assert_eq!(su_orbit_count(1, 1), 2); // the two sl(2,R)-type orbits
    assert_eq!(su_orbit_count(2, 1), 3);
    assert_eq!(su_orbit_count(3, 1), 3);
    assert_eq!(su_orbit_count(2, 2), 9);
    assert_eq!(su_orbit_count(4, 1), 3);
    assert_eq!(su_orbit_count(3, 2), 12);
}

#[test]
fn su_counts_match_signed_diagrams() {
    assert_eq!(orbit_count(&form(SimpleType::A, 1, "k1")), su_orbit_count(1, 1));
    assert_eq!(orbit_count(&form(SimpleType::A, 2, "k1")), su_orbit_count(2, 1));
    assert_eq!(orbit_count(&form(SimpleType::A, 3, "k1")), su_orbit_count(3, 1));
    assert_eq!(orbit_count(&form(SimpleType::A, 3, "k2")), su_orbit_count(2, 2));
}

#[test]
fn su_counts_rank_four() {
    assert_eq!(orbit_count(&form(SimpleType::A, 4, "k1")), su_orbit_count(4, 1));
}

#[test]
fn sp4r_count() {
    // sp(4,R): diagrams of the partitions of 4 with odd rows in opposite
    // sign pairs: [4] gives 2, [2,2] gives 3, [2,1,1] gives 2.
    assert_eq!(orbit_count(&form(SimpleType::C, 2, "k2")), 7);
    // sp(1,1): the single quaternionic orbit of [2].
    assert_eq!(orbit_count(&form(SimpleType::C, 2, "k1")), 1);
}

#[test]
fn split_g2_count() {
    // Two routes agree: the carrier catalog and the resolved triples; the
    // value 5 matches the classical count for the split exceptional form.
    let f = form(SimpleType::G, 2, "k1");
    assert_eq!(orbit_count(&f), 5);
    assert_eq!(all_resolved(&f), 5);
}

#[test]
fn sl5r_partition_rule() {
    // Partitions of 5 except 1^5, none all-even: 6 orbits, all resolved.
    let f = form(SimpleType::A, 4, "outer");
    assert_eq!(all_resolved(&f), 6);
}

#[test]
fn sp6r_nonprincipal_resolution() {
    // sp(6,R) has two non-principal carriers; both resolve through the
    // structured polynomial search.
    let f = form(SimpleType::C, 3, "k3");
    let entries = enumerate_orbits(&f).unwrap();
    assert_eq!(entries.len(), 18);
    assert_eq!(entries.iter().filter(|e| !e.carrier.principal).count(), 2);
    assert_eq!(all_resolved(&f), 18);
}

#[test]
#[ignore = "several minutes: the full rank-4 survey"]
fn rank_four_survey() {
    assert_eq!(orbit_count(&form(SimpleType::A, 4, "k2")), su_orbit_count(3, 2));
    // so(4,4) and the outer D4 forms: every orbit resolves.
    for d in ["k1", "k2", "outer", "outer:k1"] {
        let f = form(SimpleType::D, 4, d);
        let n = orbit_count(&f);
        assert_eq!(all_resolved(&f), n);
    }
}

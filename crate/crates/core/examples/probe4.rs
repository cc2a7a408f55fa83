use lieks::carrier::enumerate_orbits;
use lieks::realform::{build_real_form, enumerate_involutions};
use lieks::rootsystem::{ChevalleyModel, SimpleType};

fn main() {
    for (kind, rank) in [(SimpleType::A, 4), (SimpleType::B, 3), (SimpleType::C, 3), (SimpleType::D, 4)] {
        let model = ChevalleyModel::create(kind, rank).unwrap();
        for spec in enumerate_involutions(kind, rank).unwrap() {
            let f = build_real_form(&model, &spec).unwrap();
            if f.is_compact() { continue; }
            let t0 = std::time::Instant::now();
            let orbits = enumerate_orbits(&f).unwrap();
            println!("{}{}:{:<10} {:<10} orbits={:<3} np={} [{:?}]",
                kind, rank, spec.descriptor, f.name, orbits.len(),
                orbits.iter().filter(|o| !o.carrier.principal).count(), t0.elapsed());
        }
    }
}

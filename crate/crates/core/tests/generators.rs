use std::fs;
use std::path::PathBuf;

use num_rational::Ratio;

use matchstab::construct::gale_shapley;
use matchstab::generators::{
    gen_random, scale_to_c, write_corpus, x3c_to_hai, x3c_to_hatc_dich, x3c_to_hati_single_tie, x3c_to_maj_hai,
    x3c_to_sm, RandomSpec, ReductionOutput, Restriction, SmVariant,
};
use matchstab::io::{parse_instance, parse_matching, write_instance};
use matchstab::model::ceil_fraction_of;
use matchstab::x3c::X3cInstance;
use matchstab::{stability_number, ModelKind};

fn yes(nhat: usize) -> X3cInstance {
    let q = 3 * nhat;
    let triples = (0..3).flat_map(|shift| (0..nhat).map(move |i| [0, 1, 2].map(|d| (3 * i + d + shift) % q + 1))).collect();
    X3cInstance::new(nhat, triples).unwrap()
}

fn witness_s(r: &ReductionOutput, x: &X3cInstance) -> usize {
    let m = r.witness(&x.find_cover().unwrap()).unwrap();
    stability_number(&r.instance, &m).unwrap().stability_number
}

#[test]
fn every_witness_beats_its_threshold() {
    for nhat in 1..=2 {
        let x = yes(nhat);
        let mut outputs = vec![
            ("hai", x3c_to_hai(&x).unwrap()),
            ("maj-hai", x3c_to_maj_hai(&x).unwrap()),
            ("hai 1/3", scale_to_c(x3c_to_hai(&x).unwrap(), Ratio::new(1, 3)).unwrap()),
            ("hati", x3c_to_hati_single_tie(&x, None).unwrap()),
            ("hati 3/10", x3c_to_hati_single_tie(&x, Some(Ratio::new(3, 10))).unwrap()),
            ("hatc", x3c_to_hatc_dich(&x, None).unwrap()),
            ("hatc 1/2", x3c_to_hatc_dich(&x, Some(Ratio::new(1, 2))).unwrap()),
        ];
        for v in [
            SmVariant::Base,
            SmVariant::MaxMajority,
            SmVariant::PathPads(Some(Ratio::new(1, 5))),
            SmVariant::RoommatesTriangles(Some(Ratio::new(1, 2))),
            SmVariant::SingleTie(None),
            SmVariant::SingleTie(Some(Ratio::new(1, 5))),
        ] {
            outputs.push((v.name(), x3c_to_sm(&x, v).unwrap()));
        }
        for (name, r) in outputs {
            let s = witness_s(&r, &x);
            assert!(s < r.k, "{name}, n̂ = {nhat}: s = {s}, k = {}", r.k);
        }
    }
}

#[test]
fn fractions_resolve_to_the_target() {
    let x = yes(1);
    for (p, q) in [(1, 7), (1, 3), (2, 5)] {
        let c = Ratio::new(p, q);
        let r = x3c_to_hati_single_tie(&x, Some(c)).unwrap();
        assert_eq!(ceil_fraction_of(c, r.instance.n_agents()), r.k);
        r.instance.check_single_tie().unwrap();
        let r = x3c_to_hatc_dich(&x, Some(c)).unwrap();
        assert_eq!(ceil_fraction_of(c, r.instance.n_agents()), r.k);
        r.instance.check_dichotomous_complete().unwrap();
    }
}

// The dichotomous complete marriage encoding keeps the single-tie gadgets'
// 18n̂ U agents against 6n̂ W agents with no dummies. With complete lists any
// 6n̂ unmatched U agents can take the whole W side together, so no matching
// gets below 6n̂ while the threshold is 5n̂ + 1. The cover witness is no exception.
#[test]
fn dichotomous_marriage_completion_leaves_u_side_improvers() {
    for nhat in 1..=2 {
        let x = yes(nhat);
        let r = x3c_to_sm(&x, SmVariant::DichotomousComplete(None)).unwrap();
        assert_eq!(r.instance.side_split(), Some((18 * nhat, 6 * nhat)));
        assert_eq!(r.k, 5 * nhat + 1);
        assert_eq!(witness_s(&r, &x), 6 * nhat);
        let stable = gale_shapley(&r.instance).unwrap();
        assert!(stability_number(&r.instance, &stable).unwrap().stability_number >= 6 * nhat);
    }
}

#[test]
fn corpus_files_parse_back() {
    let dir = std::env::temp_dir().join(format!("matchstab-corpus-{}", std::process::id()));
    let x = yes(1);
    let written = write_corpus(&dir, &x).unwrap();
    assert_eq!(written.len(), 15);
    for d in &written {
        let inst = parse_instance(&fs::read_to_string(d.join("instance.txt")).unwrap()).unwrap();
        let k: usize = fs::read_to_string(d.join("target_k.txt")).unwrap().trim().parse().unwrap();
        assert!(k >= 1 && k <= inst.n_agents());
        let m = parse_matching(&fs::read_to_string(d.join("witness.txt")).unwrap(), &inst).unwrap();
        let s = stability_number(&inst, &m).unwrap().stability_number;
        // Only the dichotomous marriage entry misses its target; see the test above.
        assert!(s < k || d.ends_with("dich-complete-c2-5"), "{}: s = {s}, k = {k}", d.display());
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn no_instance_has_no_witness_files() {
    let dir = std::env::temp_dir().join(format!("matchstab-corpus-no-{}", std::process::id()));
    // No triple's complement is among the triples, so no two of them cover 1..=6.
    let x = X3cInstance::new(2, vec![[1, 2, 3], [1, 2, 4], [1, 5, 6], [2, 5, 6], [3, 4, 5], [3, 4, 6]]).unwrap();
    assert!(x.find_cover().is_none());
    for d in write_corpus(&dir, &x).unwrap() {
        assert!(d.join("instance.txt").exists());
        assert!(!d.join("witness.txt").exists());
    }
    fs::remove_dir_all(&dir).unwrap();
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

// Pins the seeded generator so results stay reproducible across releases.
#[test]
fn seeded_instances_match_goldens() {
    let mut ha = RandomSpec::new(ModelKind::HouseAllocation, 6, 4, 42);
    ha.max_len = 3;
    ha.tie_density = 0.3;
    let mut sm = RandomSpec::new(ModelKind::Marriage, 4, 4, 42);
    sm.max_len = 3;
    let mut sr = RandomSpec::new(ModelKind::Roommates, 7, 0, 42);
    sr.restriction = Restriction::DichotomousComplete;
    for (spec, file) in [(ha, "random_ha.txt"), (sm, "random_sm.txt"), (sr, "random_sr_dich.txt")] {
        assert_eq!(write_instance(&gen_random(&spec).unwrap()), golden(file), "{file}");
    }
}

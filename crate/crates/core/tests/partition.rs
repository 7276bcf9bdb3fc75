use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matchstab::construct::{blocking_pairs, tan_stable_partition, verify_stable_partition, StablePartition};
use matchstab::oracle::{find_stable_matching, OracleBudget};
use matchstab::{Instance, Matching, PreferenceList};

// Strict roommates instance on an Erdős–Rényi acceptability graph.
fn random_sr(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Instance {
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let prefs = (1..=n)
        .map(|i| {
            let mut l: Vec<usize> = (1..=n).filter(|&j| adj[i][j]).collect();
            l.shuffle(rng);
            PreferenceList::strict(l)
        })
        .collect();
    Instance::roommates(prefs).unwrap()
}

fn stable_matching_exists(inst: &Instance) -> bool {
    fn go(inst: &Instance, i: usize, m: &mut Matching) -> bool {
        if i > inst.n_agents() {
            return blocking_pairs(inst, m).is_empty();
        }
        if m.partner(i).is_some() {
            return go(inst, i + 1, m);
        }
        for j in inst.pref(i).iter().collect::<Vec<_>>() {
            if j > i && m.partner(j).is_none() {
                m.insert(inst, i, j).unwrap();
                if go(inst, i + 1, m) {
                    return true;
                }
                m.remove(i);
            }
        }
        go(inst, i + 1, m)
    }
    go(inst, 1, &mut Matching::empty(inst))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

fn sorted_odd_parties(p: &StablePartition) -> Vec<Vec<usize>> {
    let mut odd: Vec<Vec<usize>> = p
        .odd_cycles()
        .into_iter()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    odd.sort();
    odd
}

#[test]
fn odd_party_iff_no_stable_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut with_odd = 0;
    for round in 0..4000 {
        let n = rng.gen_range(1..=9);
        let inst = random_sr(&mut rng, n, [0.3, 0.6, 1.0][round % 3]);
        let part = tan_stable_partition(&inst).unwrap();
        assert!(verify_stable_partition(&inst, &part), "{inst:?} {part:?}");
        let has_odd = !part.odd_cycles().is_empty();
        with_odd += has_odd as usize;
        assert_eq!(has_odd, !stable_matching_exists(&inst), "{inst:?} {part:?}");
    }
    // Both outcomes must actually occur for the check to mean anything.
    assert!(with_odd > 100 && with_odd < 3900, "{with_odd}");
}

#[test]
fn oracle_stable_search_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..500 {
        let n = rng.gen_range(1..=8);
        let inst = random_sr(&mut rng, n, [0.4, 0.8][round % 2]);
        let found = find_stable_matching(&inst, &OracleBudget::default()).unwrap();
        let odd = !tan_stable_partition(&inst).unwrap().odd_cycles().is_empty();
        assert_eq!(found.is_none(), odd, "{inst:?}");
        if let Some(m) = found {
            assert!(blocking_pairs(&inst, &m).is_empty());
        }
    }
}

// Every permutation passing the partition conditions has the same odd parties.
#[test]
fn all_stable_partitions_share_odd_parties() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for round in 0..600 {
        let n = rng.gen_range(1..=6);
        let inst = random_sr(&mut rng, n, [0.4, 0.7, 1.0][round % 3]);
        let tan = sorted_odd_parties(&tan_stable_partition(&inst).unwrap());
        for p in permutations(n) {
            let sp = StablePartition::from_successors(p).unwrap();
            if verify_stable_partition(&inst, &sp) {
                checked += 1;
                assert_eq!(sorted_odd_parties(&sp), tan, "{inst:?} {sp:?}");
            }
        }
    }
    assert!(checked > 600);
}

#[test]
fn reversed_triangle_fails_the_conditions() {
    let inst = Instance::roommates(vec![
        PreferenceList::strict([2, 3]),
        PreferenceList::strict([3, 1]),
        PreferenceList::strict([1, 2]),
    ])
    .unwrap();
    let forward = StablePartition::from_successors(vec![2, 3, 1]).unwrap();
    let backward = StablePartition::from_successors(vec![3, 1, 2]).unwrap();
    assert!(verify_stable_partition(&inst, &forward));
    assert!(!verify_stable_partition(&inst, &backward));
}

//! Seeded random instances.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, ModelKind, PreferenceList};

/// Structural restriction imposed on every preference list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Restriction {
    #[default]
    None,
    /// Each list is a single indifference class.
    SingleTie,
    /// Complete lists with at most two indifference classes.
    DichotomousComplete,
}

/// Parameters of [`gen_random`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub model: ModelKind,
    /// Agents in HA and SR; the U side in SM.
    pub n: usize,
    /// Objects in HA; the W side in SM; unused in SR.
    pub m: usize,
    /// Each agent draws a list length uniformly from this range. In SM and
    /// SR the drawn partners are made mutual, so lists can end up longer.
    pub min_len: usize,
    pub max_len: usize,
    /// Probability that the next entry joins the current tie group.
    pub tie_density: f64,
    /// Every agent lists every possible alternative.
    pub complete: bool,
    pub restriction: Restriction,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(model: ModelKind, n: usize, m: usize, seed: u64) -> RandomSpec {
        RandomSpec {
            model,
            n,
            m,
            min_len: 0,
            max_len: usize::MAX,
            tie_density: 0.0,
            complete: false,
            restriction: Restriction::None,
            seed,
        }
    }
}

/// Same spec, same instance: ChaCha8 seeded from `spec.seed`.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    if spec.min_len > spec.max_len {
        return Err(Error::Parameter("min_len exceeds max_len".into()));
    }
    if !(0.0..=1.0).contains(&spec.tie_density) {
        return Err(Error::Parameter("tie density outside [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let complete = spec.complete || spec.restriction == Restriction::DichotomousComplete;
    let n_total = match spec.model {
        ModelKind::Marriage => spec.n + spec.m,
        _ => spec.n,
    };
    // Candidate alternatives of agent i (1-based), ascending.
    let candidates = |i: usize| -> Vec<usize> {
        match spec.model {
            ModelKind::HouseAllocation => (1..=spec.m).collect(),
            ModelKind::Roommates => (1..=n_total).filter(|&j| j != i).collect(),
            ModelKind::Marriage if i <= spec.n => (spec.n + 1..=n_total).collect(),
            ModelKind::Marriage => (1..=spec.n).collect(),
        }
    };

    let mut accept: Vec<Vec<usize>> = vec![Vec::new(); n_total];
    for i in 1..=n_total {
        let cand = candidates(i);
        if complete {
            accept[i - 1] = cand;
            continue;
        }
        let hi = spec.max_len.min(cand.len());
        let lo = spec.min_len.min(hi);
        let len = rng.gen_range(lo..=hi);
        let picked: Vec<usize> = sample(&mut rng, cand.len(), len).into_iter().map(|p| cand[p]).collect();
        for j in picked {
            accept[i - 1].push(j);
            if spec.model != ModelKind::HouseAllocation {
                accept[j - 1].push(i);
            }
        }
    }

    let mut prefs = Vec::with_capacity(n_total);
    for mut list in accept {
        list.sort_unstable();
        list.dedup();
        list.shuffle(&mut rng);
        let mut groups: Vec<Vec<usize>> = match spec.restriction {
            _ if list.is_empty() => Vec::new(),
            Restriction::SingleTie => vec![list],
            Restriction::DichotomousComplete => {
                let first = rng.gen_range(1..=list.len());
                let rest = list.split_off(first);
                if rest.is_empty() { vec![list] } else { vec![list, rest] }
            }
            Restriction::None => {
                let mut groups: Vec<Vec<usize>> = Vec::new();
                for j in list {
                    match groups.last_mut() {
                        Some(g) if rng.gen_bool(spec.tie_density) => g.push(j),
                        _ => groups.push(vec![j]),
                    }
                }
                groups
            }
        };
        for g in &mut groups {
            g.sort_unstable();
        }
        prefs.push(PreferenceList::new(groups));
    }

    match spec.model {
        ModelKind::HouseAllocation => Instance::house_allocation(spec.m, prefs),
        ModelKind::Marriage => Instance::marriage(spec.n, spec.m, prefs),
        ModelKind::Roommates => Instance::roommates(prefs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let mut spec = RandomSpec::new(ModelKind::Roommates, 9, 0, 7);
        spec.tie_density = 0.3;
        spec.max_len = 4;
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        spec.seed = 8;
        let other = gen_random(&spec).unwrap();
        spec.seed = 7;
        assert_ne!(gen_random(&spec).unwrap(), other);
    }

    #[test]
    fn restrictions_hold() {
        for seed in 0..20 {
            for model in [ModelKind::HouseAllocation, ModelKind::Marriage, ModelKind::Roommates] {
                let mut spec = RandomSpec::new(model, 6, 5, seed);
                spec.restriction = Restriction::SingleTie;
                spec.max_len = 3;
                gen_random(&spec).unwrap().check_single_tie().unwrap();
                spec.restriction = Restriction::DichotomousComplete;
                gen_random(&spec).unwrap().check_dichotomous_complete().unwrap();
            }
        }
    }

    #[test]
    fn ha_lengths_in_range() {
        let mut spec = RandomSpec::new(ModelKind::HouseAllocation, 10, 8, 3);
        spec.min_len = 2;
        spec.max_len = 4;
        let inst = gen_random(&spec).unwrap();
        assert!(inst.prefs().iter().all(|p| (2..=4).contains(&p.len())));
    }
}

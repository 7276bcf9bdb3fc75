//! Polynomial constructions of k-stable matchings in the tractable regimes.

use std::fmt;

use crate::engines::{max_cardinality_bipartite, max_cardinality_general, max_weight_general, Graph};
use crate::error::{Error, Result};
use crate::model::{majority, Instance, Matching, ModelKind, Threshold};

mod partition;

pub use partition::{tan_stable_partition, verify_stable_partition, StablePartition};

/// Which construction produced a matching, and hence which bound it carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Deferred acceptance in the marriage model: stable, hence majority stable.
    StableMarriage,
    /// Stable partition with one agent dropped per odd cycle.
    StablePartitionRounding,
    /// Maximum-size matching under single-tie house allocation preferences.
    MaxSizeSingleTie,
    /// Maximum matching on first-class edges, then completed.
    FirstClassDichotomous,
    /// Maximum-size matching under single-tie roommates preferences.
    MaxSizeSingleTieRoommates,
    /// Maximum weight by first-class endpoints, then completed.
    FirstClassWeightRoommates,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::StableMarriage => "stable-marriage",
            Certificate::StablePartitionRounding => "stable-partition-rounding",
            Certificate::MaxSizeSingleTie => "ha-single-tie-max-size",
            Certificate::FirstClassDichotomous => "ha-dichotomous-first-class",
            Certificate::MaxSizeSingleTieRoommates => "sr-single-tie-max-size",
            Certificate::FirstClassWeightRoommates => "sr-dichotomous-first-class-weight",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A constructed matching together with the k it is guaranteed to be stable for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub matching: Matching,
    pub guaranteed_k: usize,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Construction),
    /// No polynomial construction covers this model, restriction and k.
    Unsupported { k: usize, reason: String },
}

fn require_model(inst: &Instance, allowed: &[ModelKind], expected: &str) -> Result<()> {
    if allowed.contains(&inst.model()) {
        Ok(())
    } else {
        Err(Error::WrongModel { expected: expected.into(), found: inst.model() })
    }
}

/// Deferred acceptance with side U proposing, after breaking ties by ascending id.
pub fn gale_shapley(inst: &Instance) -> Result<Matching> {
    require_model(inst, &[ModelKind::Marriage], "SM")?;
    let strict = inst.break_ties();
    let n = strict.n_agents();
    let lists: Vec<Vec<usize>> = strict.agents().map(|i| strict.pref(i).iter().collect()).collect();
    let mut next = vec![0usize; n + 1];
    let mut engaged: Vec<Option<usize>> = vec![None; n + 1];
    let mut free: Vec<usize> = strict.agents().filter(|&i| strict.on_u_side(i)).rev().collect();
    while let Some(u) = free.pop() {
        let list = &lists[u - 1];
        while next[u] < list.len() {
            let w = list[next[u]];
            next[u] += 1;
            match engaged[w] {
                None => {
                    engaged[w] = Some(u);
                    engaged[u] = Some(w);
                    break;
                }
                Some(cur) if strict.rank(w, u) < strict.rank(w, cur) => {
                    engaged[w] = Some(u);
                    engaged[u] = Some(w);
                    engaged[cur] = None;
                    free.push(cur);
                    break;
                }
                _ => {}
            }
        }
    }
    let pairs: Vec<(usize, usize)> =
        strict.agents().filter(|&u| strict.on_u_side(u)).filter_map(|u| engaged[u].map(|w| (u, w))).collect();
    Matching::from_pairs(inst, &pairs)
}

/// Acceptable pairs `(i, j)`, `i < j`, whose members both strictly prefer each other to `m`.
pub fn blocking_pairs(inst: &Instance, m: &Matching) -> Vec<(usize, usize)> {
    inst.edges()
        .into_iter()
        .filter(|&(i, j)| {
            m.partner(i) != Some(j)
                && inst.slot_rank(i, Some(j)) < inst.slot_rank(i, m.partner(i))
                && inst.slot_rank(j, Some(i)) < inst.slot_rank(j, m.partner(j))
        })
        .collect()
}

/// Matching from a stable partition: transpositions kept, the smallest agent
/// of every odd cycle dropped and the rest of each cycle matched along π.
pub fn matching_from_partition(inst: &Instance, p: &StablePartition) -> Result<Matching> {
    let mut pairs = Vec::new();
    for cycle in p.cycles() {
        let path: &[usize] = if cycle.len() % 2 == 1 { &cycle[1..] } else { &cycle };
        for pair in path.chunks(2) {
            pairs.push((pair[0].min(pair[1]), pair[0].max(pair[1])));
        }
    }
    Matching::from_pairs(inst, &pairs)
}

/// The ⌊5n/6⌋+1-stable roommates construction.
pub fn five_sixths_matching(inst: &Instance) -> Result<Construction> {
    require_model(inst, &[ModelKind::Roommates, ModelKind::Marriage], "SR or SM")?;
    let p = tan_stable_partition(inst)?;
    let matching = matching_from_partition(inst, &p)?;
    Ok(Construction {
        matching,
        guaranteed_k: 5 * inst.n_agents() / 6 + 1,
        certificate: Certificate::StablePartitionRounding,
    })
}

fn graph_of(inst: &Instance, keep: impl Fn(usize, usize) -> bool) -> Result<Graph<i64>> {
    let n = inst.n_agents();
    let mut g = match inst.model() {
        ModelKind::HouseAllocation => Graph::bipartite(n, inst.n_objects()),
        _ => Graph::new(n),
    };
    for (i, a) in inst.edges() {
        if keep(i, a) {
            let v = if inst.model() == ModelKind::HouseAllocation { n + a - 1 } else { a - 1 };
            g.add_edge(i - 1, v)?;
        }
    }
    Ok(g)
}

fn ha_matching(inst: &Instance, pairs: Vec<(usize, usize)>) -> Result<Matching> {
    let n = inst.n_agents();
    let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(u, v)| (u + 1, v - n + 1)).collect();
    Matching::from_pairs(inst, &pairs)
}

/// Maximum-size matching when every list is a single tie; majority stable.
pub fn ha_single_tie(inst: &Instance) -> Result<Construction> {
    require_model(inst, &[ModelKind::HouseAllocation], "HA")?;
    inst.check_single_tie()?;
    let g = graph_of(inst, |_, _| true)?;
    let matching = ha_matching(inst, max_cardinality_bipartite(&g)?.pairs())?;
    Ok(Construction { matching, guaranteed_k: majority(inst.n_agents()), certificate: Certificate::MaxSizeSingleTie })
}

/// Maximum matching on first-class edges, leftovers take the lowest free objects.
pub fn ha_dich_complete(inst: &Instance) -> Result<Construction> {
    require_model(inst, &[ModelKind::HouseAllocation], "HA")?;
    inst.check_dichotomous_complete()?;
    let g = graph_of(inst, |i, o| inst.rank(i, o) == Some(0))?;
    let mut matching = ha_matching(inst, max_cardinality_bipartite(&g)?.pairs())?;
    let mut used = vec![false; inst.n_objects() + 1];
    for (_, o) in matching.pairs() {
        used[o] = true;
    }
    let mut free = (1..=inst.n_objects()).filter(|&o| !used[o]);
    for i in inst.agents() {
        if matching.partner(i).is_none() {
            match free.next() {
                Some(o) => matching.insert(inst, i, o)?,
                None => break,
            }
        }
    }
    let n = inst.n_agents();
    let guaranteed_k = if inst.n_objects() >= n { majority(n) } else { 2 * n / 3 + 1 };
    Ok(Construction { matching, guaranteed_k, certificate: Certificate::FirstClassDichotomous })
}

/// Maximum-size matching when every list is a single tie; ⌊n/3⌋+1-stable.
pub fn sr_single_tie(inst: &Instance) -> Result<Construction> {
    require_model(inst, &[ModelKind::Roommates, ModelKind::Marriage], "SR or SM")?;
    inst.check_single_tie()?;
    let g = graph_of(inst, |_, _| true)?;
    let pairs: Vec<(usize, usize)> = max_cardinality_general(&g).pairs().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
    let matching = Matching::from_pairs(inst, &pairs)?;
    Ok(Construction {
        matching,
        guaranteed_k: inst.n_agents() / 3 + 1,
        certificate: Certificate::MaxSizeSingleTieRoommates,
    })
}

/// Maximum weight where a pair weighs the number of its members ranking it in
/// their first class, then leftovers paired in ascending order.
///
/// Matched agents improve only by reaching a first-class partner, but an agent
/// left single improves with anyone. With d agents single, at most
/// d + min(w, n − d − w) ≤ (n + d)/2 agents improve together. That is majority
/// stability when everyone is matched. For odd n it is ⌊n/2⌋ + 2, and no
/// better bound holds in general: a cyclic triangle has no majority stable
/// matching.
pub fn sr_dich_complete(inst: &Instance) -> Result<Construction> {
    require_model(inst, &[ModelKind::Roommates, ModelKind::Marriage], "SR or SM")?;
    inst.check_dichotomous_complete()?;
    let mut g: Graph<i64> = Graph::new(inst.n_agents());
    for (i, j) in inst.edges() {
        let w = (inst.rank(i, j) == Some(0)) as i64 + (inst.rank(j, i) == Some(0)) as i64;
        if w > 0 {
            g.add_weighted_edge(i - 1, j - 1, w)?;
        }
    }
    let pairs: Vec<(usize, usize)> = max_weight_general(&g).pairs().into_iter().map(|(u, v)| (u + 1, v + 1)).collect();
    let mut matching = Matching::from_pairs(inst, &pairs)?;
    let left: Vec<usize> = inst.agents().filter(|&i| matching.partner(i).is_none()).collect();
    if inst.model() == ModelKind::Marriage {
        let us = left.iter().filter(|&&i| inst.on_u_side(i));
        let ws = left.iter().filter(|&&i| !inst.on_u_side(i));
        for (&u, &w) in us.zip(ws) {
            matching.insert(inst, u, w)?;
        }
    } else {
        for pair in left.chunks_exact(2) {
            matching.insert(inst, pair[0], pair[1])?;
        }
    }
    let n = inst.n_agents();
    let single = n - 2 * matching.len();
    Ok(Construction {
        matching,
        guaranteed_k: (n + single) / 2 + 1,
        certificate: Certificate::FirstClassWeightRoommates,
    })
}

/// Picks a construction whose guarantee covers the resolved threshold.
pub fn solve(inst: &Instance, threshold: &Threshold) -> Result<SolveOutcome> {
    let n = inst.n_agents();
    let k = threshold.resolve(n)?;
    let single_tie = inst.check_single_tie().is_ok();
    let dichotomous = inst.check_dichotomous_complete().is_ok();
    let pick = |c: Result<Construction>| -> Result<Option<SolveOutcome>> {
        let c = c?;
        Ok((c.guaranteed_k <= k).then_some(SolveOutcome::Solved(c)))
    };
    let candidates: Vec<Box<dyn Fn() -> Result<Construction>>> = match inst.model() {
        ModelKind::HouseAllocation => {
            let mut v: Vec<Box<dyn Fn() -> Result<Construction>>> = Vec::new();
            if single_tie {
                v.push(Box::new(|| ha_single_tie(inst)));
            }
            if dichotomous {
                v.push(Box::new(|| ha_dich_complete(inst)));
            }
            v
        }
        ModelKind::Marriage => {
            let mut v: Vec<Box<dyn Fn() -> Result<Construction>>> = vec![Box::new(|| {
                Ok(Construction {
                    matching: gale_shapley(inst)?,
                    guaranteed_k: majority(n),
                    certificate: Certificate::StableMarriage,
                })
            })];
            if single_tie {
                v.push(Box::new(|| sr_single_tie(inst)));
            }
            v
        }
        ModelKind::Roommates => {
            let mut v: Vec<Box<dyn Fn() -> Result<Construction>>> = Vec::new();
            if single_tie {
                v.push(Box::new(|| sr_single_tie(inst)));
            }
            if dichotomous {
                v.push(Box::new(|| sr_dich_complete(inst)));
            }
            v.push(Box::new(|| five_sixths_matching(inst)));
            v
        }
    };
    for build in candidates {
        if let Some(outcome) = pick(build())? {
            return Ok(outcome);
        }
    }
    let reason = match inst.model() {
        ModelKind::HouseAllocation => {
            "house allocation: no polynomial construction for this k; deciding it is NP-complete in general"
        }
        ModelKind::Marriage => "marriage: below the majority threshold only single-tie lists are covered",
        ModelKind::Roommates => "roommates: no construction for this k (open for 2n/3 < k <= 5n/6, NP-complete below)",
    };
    Ok(SolveOutcome::Unsupported { k, reason: reason.into() })
}

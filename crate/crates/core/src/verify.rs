//! Stability numbers of given matchings.
//!
//! In house allocation, s(M) is the size of a maximum matching in the
//! improvement graph. In marriage and roommates, each acceptable pair gets
//! weight ω ∈ {0, 1, 2} (how many of its endpoints prefer it to M) and s(M)
//! is the weight of a maximum-weight matching.

use crate::engines::{max_cardinality_bipartite, max_weight_general, Graph};
use crate::error::{Error, Result};
use crate::model::{Instance, Matching, ModelKind, Threshold};

/// Bipartite graph with an edge `(i, o)` whenever agent `i` strictly prefers
/// object `o` to its current assignment.
///
/// Vertices `0..n` are agents `1..=n`; vertices `n..n+m` are objects `1..=m`.
#[derive(Clone, Debug)]
pub struct ImprovementGraph {
    graph: Graph<i64>,
    n_agents: usize,
}

impl ImprovementGraph {
    pub fn graph(&self) -> &Graph<i64> {
        &self.graph
    }

    /// Envy edges as `(agent, object)` with 1-based ids.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges().iter().map(|e| (e.u + 1, e.v - self.n_agents + 1)).collect()
    }
}

pub fn improvement_graph(inst: &Instance, m: &Matching) -> Result<ImprovementGraph> {
    if inst.model() != ModelKind::HouseAllocation {
        return Err(Error::WrongModel { expected: "HA".into(), found: inst.model() });
    }
    m.validate(inst)?;
    let n = inst.n_agents();
    let mut graph = Graph::bipartite(n, inst.n_objects());
    for i in inst.agents() {
        let current = inst.slot_rank(i, m.partner(i)).expect("validated matching");
        for (r, group) in inst.pref(i).groups().iter().enumerate() {
            if r >= current {
                break;
            }
            for &o in group {
                graph.add_edge(i - 1, n + o - 1)?;
            }
        }
    }
    Ok(ImprovementGraph { graph, n_agents: n })
}

/// The verification quantity of one matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Largest number of agents that some other matching makes strictly better off.
    pub stability_number: usize,
    /// A matching attaining that number.
    pub witness: Matching,
    /// The agents the witness makes better off.
    pub improvers: Vec<usize>,
}

/// A resolved threshold query against a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub k: usize,
    pub stable: bool,
}

impl StabilityReport {
    pub fn is_k_stable(&self, k: usize) -> bool {
        self.stability_number < k
    }

    pub fn verdict(&self, threshold: &Threshold, n: usize) -> Result<Verdict> {
        let k = threshold.resolve(n)?;
        Ok(Verdict { k, stable: self.is_k_stable(k) })
    }

    pub fn is_majority_stable(&self, n: usize) -> bool {
        self.is_k_stable(crate::model::majority(n))
    }

    pub fn is_weakly_pareto_optimal(&self, n: usize) -> bool {
        self.is_k_stable(n)
    }
}

/// ω(i, j): how many of `i`, `j` strictly prefer each other to their partners in `m`.
pub fn omega(inst: &Instance, m: &Matching, i: usize, j: usize) -> u8 {
    let gain = |a: usize, b: usize| match (inst.rank(a, b), inst.slot_rank(a, m.partner(a))) {
        (Some(r), Some(cur)) if r < cur => 1,
        _ => 0,
    };
    gain(i, j) + gain(j, i)
}

pub fn stability_number(inst: &Instance, m: &Matching) -> Result<StabilityReport> {
    m.validate(inst)?;
    let mut witness = Matching::empty(inst);
    match inst.model() {
        ModelKind::HouseAllocation => {
            let g = improvement_graph(inst, m)?;
            let n = inst.n_agents();
            let mm = max_cardinality_bipartite(g.graph())?;
            for (u, v) in mm.pairs() {
                witness.insert(inst, u + 1, v - n + 1)?;
            }
        }
        ModelKind::Marriage | ModelKind::Roommates => {
            let mut g: Graph<i64> = Graph::new(inst.n_agents());
            for (i, j) in inst.edges() {
                let w = omega(inst, m, i, j);
                if w > 0 {
                    g.add_weighted_edge(i - 1, j - 1, w as i64)?;
                }
            }
            let mm = max_weight_general(&g);
            for (u, v) in mm.pairs() {
                witness.insert(inst, u + 1, v + 1)?;
            }
        }
    }
    let improvers = crate::model::improvers(inst, m, &witness)?;
    Ok(StabilityReport { stability_number: improvers.len(), witness, improvers })
}

pub fn is_k_stable(inst: &Instance, m: &Matching, threshold: &Threshold) -> Result<bool> {
    let k = threshold.resolve(inst.n_agents())?;
    Ok(stability_number(inst, m)?.is_k_stable(k))
}

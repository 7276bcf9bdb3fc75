//! Instance generators: Condorcet profiles, seeded random instances and the
//! hardness reductions from exact cover by 3-sets.
//!
//! Reductions build their gadgets on a [`Builder`] with symbolic nodes and
//! assign ids once the whole instance is known, so marriage instances keep
//! every U agent before every W agent however many pads get appended.

mod corpus;
mod ha;
mod random;
mod sm;

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{Instance, Matching, ModelKind, PreferenceList};
use crate::x3c::X3cInstance;

pub use corpus::{write_corpus, CorpusEntry};
pub use ha::{complete_transform, lift_to_complete, scale_to_c, x3c_to_hai, x3c_to_hatc_dich, x3c_to_hati_single_tie, x3c_to_maj_hai};
pub use random::{gen_random, RandomSpec, Restriction};
pub use sm::{x3c_to_sm, SmVariant};

type WitnessFn = Box<dyn Fn(&[usize]) -> Result<Matching> + Send + Sync>;

/// An instance produced by a reduction together with its target threshold.
pub struct ReductionOutput {
    pub instance: Instance,
    /// The instance has a k-stable matching iff the source X3C instance has an exact cover.
    pub k: usize,
    /// `(id label, gadget name)` pairs for the instance sidecar.
    pub names: Vec<(String, String)>,
    /// Pad gadget kinds with how many copies were appended.
    pub pads: Vec<(String, usize)>,
    witness: Option<WitnessFn>,
}

impl fmt::Debug for ReductionOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionOutput")
            .field("model", &self.instance.model())
            .field("n_agents", &self.instance.n_agents())
            .field("k", &self.k)
            .field("pads", &self.pads)
            .finish()
    }
}

impl ReductionOutput {
    pub fn has_witness_builder(&self) -> bool {
        self.witness.is_some()
    }

    /// The matching the reduction maps an exact cover to (cover given as 1-based triple indices).
    pub fn witness(&self, cover: &[usize]) -> Result<Matching> {
        match &self.witness {
            Some(f) => f(cover),
            None => Err(Error::Parameter("this reduction has no witness builder".into())),
        }
    }

    pub fn instance_text(&self) -> String {
        crate::io::write_instance_with_names(&self.instance, &self.names)
    }
}

/// The Condorcet profile: `n` agents and `n` objects, every agent ranking `1 ≻ 2 ≻ … ≻ n`.
pub fn gen_condorcet(n: usize) -> Result<Instance> {
    if n == 0 {
        return Err(Error::Parameter("condorcet profile needs n >= 1".into()));
    }
    Instance::house_allocation(n, (0..n).map(|_| PreferenceList::strict(1..=n)).collect())
}

/// Symbolic vertex of a gadget; ids are assigned by [`Builder::finish`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    U(usize),
    W(usize),
    Obj(usize),
}

#[derive(Clone)]
pub(crate) struct Builder {
    u: Vec<(String, Vec<Vec<Node>>)>,
    w: Vec<(String, Vec<Vec<Node>>)>,
    objs: Vec<String>,
}

/// Node-to-id map of a finished builder.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Layout {
    n_u: usize,
}

impl Layout {
    pub(crate) fn id(&self, n: Node) -> usize {
        match n {
            Node::U(i) | Node::Obj(i) => i + 1,
            Node::W(i) => self.n_u + i + 1,
        }
    }

    pub(crate) fn matching(&self, inst: &Instance, pairs: &[(Node, Node)]) -> Result<Matching> {
        let mut ids: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (self.id(a), self.id(b));
                if inst.model() == ModelKind::HouseAllocation { (a, b) } else { (a.min(b), a.max(b)) }
            })
            .collect();
        ids.sort_unstable();
        Matching::from_pairs(inst, &ids)
    }
}

impl Builder {
    pub(crate) fn new() -> Builder {
        Builder { u: Vec::new(), w: Vec::new(), objs: Vec::new() }
    }

    /// An agent; in house allocation and roommates every agent is a U node.
    pub(crate) fn u(&mut self, name: impl Into<String>) -> Node {
        self.u.push((name.into(), Vec::new()));
        Node::U(self.u.len() - 1)
    }

    pub(crate) fn w(&mut self, name: impl Into<String>) -> Node {
        self.w.push((name.into(), Vec::new()));
        Node::W(self.w.len() - 1)
    }

    pub(crate) fn obj(&mut self, name: impl Into<String>) -> Node {
        self.objs.push(name.into());
        Node::Obj(self.objs.len() - 1)
    }

    pub(crate) fn set(&mut self, agent: Node, groups: Vec<Vec<Node>>) {
        let slot = match agent {
            Node::U(i) => &mut self.u[i].1,
            Node::W(i) => &mut self.w[i].1,
            Node::Obj(_) => panic!("objects have no preferences"),
        };
        *slot = groups;
    }

    /// Strict list, one node per group.
    pub(crate) fn strict(&mut self, agent: Node, order: &[Node]) {
        self.set(agent, order.iter().map(|&n| vec![n]).collect());
    }

    pub(crate) fn groups(&self, agent: Node) -> &[Vec<Node>] {
        match agent {
            Node::U(i) => &self.u[i].1,
            Node::W(i) => &self.w[i].1,
            Node::Obj(_) => &[],
        }
    }

    pub(crate) fn u_nodes(&self) -> impl Iterator<Item = Node> {
        (0..self.u.len()).map(Node::U)
    }

    pub(crate) fn w_nodes(&self) -> impl Iterator<Item = Node> {
        (0..self.w.len()).map(Node::W)
    }

    pub(crate) fn obj_nodes(&self) -> impl Iterator<Item = Node> {
        (0..self.objs.len()).map(Node::Obj)
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout { n_u: self.u.len() }
    }

    pub(crate) fn finish(self, model: ModelKind) -> Result<(Instance, Layout, Vec<(String, String)>)> {
        let layout = self.layout();
        let to_list = |groups: &Vec<Vec<Node>>| {
            PreferenceList::new(groups.iter().map(|g| g.iter().map(|&n| layout.id(n)).collect()).collect())
        };
        let mut names = Vec::new();
        for (i, (name, _)) in self.u.iter().chain(&self.w).enumerate() {
            names.push(((i + 1).to_string(), name.clone()));
        }
        for (j, name) in self.objs.iter().enumerate() {
            names.push((format!("o{}", j + 1), name.clone()));
        }
        let prefs: Vec<PreferenceList> = self.u.iter().chain(&self.w).map(|(_, g)| to_list(g)).collect();
        let inst = match model {
            ModelKind::HouseAllocation => {
                if !self.w.is_empty() {
                    return Err(Error::Parameter("house allocation builder with W agents".into()));
                }
                Instance::house_allocation(self.objs.len(), prefs)?
            }
            ModelKind::Marriage => Instance::marriage(self.u.len(), self.w.len(), prefs)?,
            ModelKind::Roommates => Instance::roommates(prefs)?,
        };
        Ok((inst, layout, names))
    }
}

/// A pad gadget kind: agents added and the number of agents every matching
/// of the gadget leaves able to improve inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PadKind {
    pub size: usize,
    pub gain: usize,
}

/// Pad counts that move `(n, k)` to `(n', k')` with `k' = ⌈c·n'⌉`.
///
/// `island` must have gain 0; its count is solved for directly, the other
/// kinds are searched exhaustively up to a bound. Among all solutions the
/// smallest `n'` wins, ties going to the lexicographically first counts.
pub(crate) fn plan_padding(
    n: usize,
    k: usize,
    c: Ratio<u64>,
    island: PadKind,
    others: &[PadKind],
) -> Result<(usize, Vec<usize>)> {
    if *c.numer() == 0 || c >= Ratio::from_integer(1) {
        return Err(Error::Parameter(format!("fraction {c} outside (0, 1)")));
    }
    debug_assert_eq!(island.gain, 0);
    let (p, q) = (*c.numer() as u128, *c.denom() as u128);
    let bound = match others.len() {
        0 => 0,
        1 => 200_000,
        _ => 1_500,
    };
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    let mut counts = vec![0usize; others.len()];
    loop {
        let n2 = n + others.iter().zip(&counts).map(|(o, &x)| o.size * x).sum::<usize>();
        let k2 = k + others.iter().zip(&counts).map(|(o, &x)| o.gain * x).sum::<usize>();
        // ⌈c·n'⌉ = k'  ⇔  (k'-1)/c < n' <= k'/c
        let lo = ((k2 as u128 - 1) * q) / p + 1;
        let hi = (k2 as u128 * q) / p;
        let n2u = n2 as u128;
        let s = island.size as u128;
        let a = if n2u >= lo { 0 } else { (lo - n2u).div_ceil(s) };
        if n2u + a * s <= hi {
            let total = n2 + a as usize * island.size;
            if best.as_ref().is_none_or(|b| total < b.0) {
                best = Some((total, a as usize, counts.clone()));
            }
        }
        if !advance(&mut counts, bound) {
            break;
        }
        // A single kind only grows n', so stop once past the best size.
        if let (1, Some(b)) = (counts.len(), &best) {
            if n + others[0].size * counts[0] > b.0 {
                break;
            }
        }
    }
    best.map(|(_, a, c)| (a, c))
        .ok_or_else(|| Error::Parameter(format!("no padding reaches k = ⌈{c}·n⌉ from n = {n}, k = {k}")))
}

// Odometer step; false after the last combination.
fn advance(counts: &mut [usize], bound: usize) -> bool {
    for x in counts.iter_mut() {
        *x += 1;
        if *x <= bound {
            return true;
        }
        *x = 0;
    }
    false
}

/// Checks a cover against `x` and returns the chosen-set mask (0-based).
pub(crate) fn cover_mask(x: &X3cInstance, cover: &[usize]) -> Result<Vec<bool>> {
    x.check_cover(cover)?;
    let mut mask = vec![false; x.triples().len()];
    for &j in cover {
        mask[j - 1] = true;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ceil_fraction_of;

    #[test]
    fn condorcet_shape() {
        let inst = gen_condorcet(4).unwrap();
        assert_eq!(inst.n_agents(), 4);
        assert_eq!(inst.n_objects(), 4);
        assert!(inst.prefs().iter().all(|p| p.iter().collect::<Vec<_>>() == vec![1, 2, 3, 4]));
        assert!(gen_condorcet(0).is_err());
    }

    #[test]
    fn padding_hits_target() {
        let island = PadKind { size: 1, gain: 0 };
        for (n, k) in [(18usize, 6usize), (42, 22), (60, 17)] {
            for (p, q) in [(1u64, 10u64), (1, 5), (1, 3), (2, 5), (3, 5), (3, 4), (9, 10)] {
                let c = Ratio::new(p, q);
                let b = (q / (q - p)) as usize + 1;
                let block = PadKind { size: b, gain: b - 1 };
                let Ok((a, counts)) = plan_padding(n, k, c, island, &[block]) else {
                    panic!("no plan for n={n} k={k} c={c}");
                };
                let n2 = n + a + b * counts[0];
                let k2 = k + (b - 1) * counts[0];
                assert_eq!(ceil_fraction_of(c, n2), k2, "n={n} k={k} c={c}");
            }
        }
    }

    #[test]
    fn padding_minimal_size() {
        // 1/3 of 18 is 6 already.
        let (a, counts) =
            plan_padding(18, 6, Ratio::new(1, 3), PadKind { size: 1, gain: 0 }, &[PadKind { size: 3, gain: 2 }])
                .unwrap();
        assert_eq!((a, counts), (0, vec![0]));
    }

    #[test]
    fn padding_unreachable_when_gain_ratio_equals_c() {
        // Pads of ratio 1/2 cannot lift k/n = 1/3 up to 1/2.
        let r = plan_padding(18, 6, Ratio::new(1, 2), PadKind { size: 1, gain: 0 }, &[PadKind { size: 2, gain: 1 }]);
        assert!(r.is_err());
    }
}

//! House allocation reductions.
//!
//! Base gadget per triple `j = {x, y, z}`: agents `s_j^1..3` who want the
//! element objects `o_x, o_y, o_z` before the set object `p_j`, and `t_j` who
//! only wants `p_j`. Each element `i` also gets two dummies that only want
//! `o_i`. With 18n̂ agents the threshold is 5n̂ + 1.

use std::sync::Arc;

use num_rational::Ratio;

use super::{cover_mask, plan_padding, Builder, Node, PadKind, ReductionOutput};
use crate::error::{Error, Result};
use crate::model::{Instance, Matching, ModelKind, PreferenceList};
use crate::x3c::X3cInstance;

#[derive(Clone)]
pub(crate) struct HaiNodes {
    pub s: Vec<[Node; 3]>,
    pub t: Vec<Node>,
    pub o: Vec<Node>,
    pub p: Vec<Node>,
}

impl HaiNodes {
    /// `t_j – p_j` for every set, `s_j^ℓ – o_{j_ℓ}` for sets in the cover.
    pub(crate) fn witness_pairs(&self, x: &X3cInstance, mask: &[bool]) -> Vec<(Node, Node)> {
        let mut pairs = Vec::new();
        for (j, tr) in x.triples().iter().enumerate() {
            pairs.push((self.t[j], self.p[j]));
            if mask[j] {
                for l in 0..3 {
                    pairs.push((self.s[j][l], self.o[tr[l] - 1]));
                }
            }
        }
        pairs
    }
}

/// Adds the base gadgets. With `tie`, each `s_j^ℓ` is indifferent between its two objects.
/// `Node::U` stands for agents and `Node::Obj` for objects, unless `objects_as_w`
/// turns the objects into W agents of a marriage instance.
pub(crate) fn hai_core(b: &mut Builder, x: &X3cInstance, tie: bool, objects_as_w: bool) -> HaiNodes {
    let q = x.triples().len();
    let obj = |b: &mut Builder, name: String| if objects_as_w { b.w(name) } else { b.obj(name) };
    let o: Vec<Node> = (1..=x.ground_size()).map(|i| obj(b, format!("o_{i}"))).collect();
    let p: Vec<Node> = (1..=q).map(|j| obj(b, format!("p_{j}"))).collect();
    let mut s = Vec::with_capacity(q);
    let mut t = Vec::with_capacity(q);
    for (j, tr) in x.triples().iter().enumerate() {
        let sj = [1, 2, 3].map(|l| b.u(format!("s_{}^{l}", j + 1)));
        let tj = b.u(format!("t_{}", j + 1));
        for l in 0..3 {
            let (oi, pj) = (o[tr[l] - 1], p[j]);
            b.set(sj[l], if tie { vec![vec![oi, pj]] } else { vec![vec![oi], vec![pj]] });
        }
        b.set(tj, vec![vec![p[j]]]);
        s.push(sj);
        t.push(tj);
    }
    for i in 1..=x.ground_size() {
        for l in 1..=2 {
            let a = b.u(format!("d_{i}^{l}"));
            b.set(a, vec![vec![o[i - 1]]]);
        }
    }
    HaiNodes { s, t, o, p }
}

// Wraps a builder, a node-level witness and pads into an output.
pub(crate) fn finish_output(
    b: Builder,
    model: ModelKind,
    k: usize,
    pads: Vec<(String, usize)>,
    x: &X3cInstance,
    pairs: impl Fn(&X3cInstance, &[bool]) -> Vec<(Node, Node)> + Send + Sync + 'static,
) -> Result<ReductionOutput> {
    let (instance, layout, names) = b.finish(model)?;
    let inst = Arc::new(instance.clone());
    let x = x.clone();
    let witness = move |cover: &[usize]| {
        let mask = cover_mask(&x, cover)?;
        layout.matching(&inst, &pairs(&x, &mask))
    };
    Ok(ReductionOutput { instance, k, names, pads, witness: Some(Box::new(witness)) })
}

/// 18n̂ agents, 6n̂ objects, strict lists of length at most two; k = 5n̂ + 1.
pub fn x3c_to_hai(x: &X3cInstance) -> Result<ReductionOutput> {
    let mut b = Builder::new();
    let nodes = hai_core(&mut b, x, false, false);
    let k = 5 * x.nhat() + 1;
    finish_output(b, ModelKind::HouseAllocation, k, Vec::new(), x, move |x, mask| nodes.witness_pairs(x, mask))
}

/// The base plus 8n̂ three-agent Condorcet gadgets: 42n̂ agents, k = 21n̂ + 1 (a strict majority).
pub fn x3c_to_maj_hai(x: &X3cInstance) -> Result<ReductionOutput> {
    let mut b = Builder::new();
    let nodes = hai_core(&mut b, x, false, false);
    let copies = 8 * x.nhat();
    let mut gadgets = Vec::with_capacity(copies);
    for g in 1..=copies {
        let objs = [1, 2, 3].map(|l| b.obj(format!("h_{g}^{l}")));
        let agents = [1, 2, 3].map(|l| b.u(format!("r_{g}^{l}")));
        for &a in &agents {
            b.strict(a, &objs);
        }
        gadgets.push((agents, objs));
    }
    let k = 21 * x.nhat() + 1;
    let pads = vec![("condorcet-3".to_string(), copies)];
    finish_output(b, ModelKind::HouseAllocation, k, pads, x, move |x, mask| {
        let mut pairs = nodes.witness_pairs(x, mask);
        for (agents, objs) in &gadgets {
            pairs.extend((0..3).map(|l| (agents[l], objs[l])));
        }
        pairs
    })
}

/// Pads a house allocation reduction so that its threshold becomes ⌈c·n'⌉.
///
/// Single-edge islands lower k/n; Condorcet blocks of size
/// b = ⌊1/(1−c)⌋ + 1, each forcing b − 1 improvers, raise it.
pub fn scale_to_c(r: ReductionOutput, c: Ratio<u64>) -> Result<ReductionOutput> {
    let inst = &r.instance;
    if inst.model() != ModelKind::HouseAllocation {
        return Err(Error::WrongModel { expected: "HA".into(), found: inst.model() });
    }
    if *c.numer() == 0 || c >= Ratio::from_integer(1) {
        return Err(Error::Parameter(format!("fraction {c} outside (0, 1)")));
    }
    let block = (Ratio::from_integer(1u64) / (Ratio::from_integer(1u64) - c)).to_integer() as usize + 1;
    let (islands, counts) = plan_padding(
        inst.n_agents(),
        r.k,
        c,
        PadKind { size: 1, gain: 0 },
        &[PadKind { size: block, gain: block - 1 }],
    )?;
    let blocks = counts[0];

    let (n, m) = (inst.n_agents(), inst.n_objects());
    let mut prefs = inst.prefs().to_vec();
    let mut names = r.names.clone();
    let mut extra_pairs = Vec::new();
    let mut next_obj = m;
    for g in 1..=blocks {
        let objs: Vec<usize> = (next_obj + 1..=next_obj + block).collect();
        for (l, &o) in objs.iter().enumerate() {
            names.push((format!("o{o}"), format!("h_{g}^{}", l + 1)));
        }
        for (l, &o) in objs.iter().enumerate() {
            prefs.push(PreferenceList::strict(objs.iter().copied()));
            let a = prefs.len();
            names.push((a.to_string(), format!("r_{g}^{}", l + 1)));
            extra_pairs.push((a, o));
        }
        next_obj += block;
    }
    for g in 1..=islands {
        let o = next_obj + 1;
        next_obj += 1;
        prefs.push(PreferenceList::strict([o]));
        let a = prefs.len();
        names.push((a.to_string(), format!("island_{g}")));
        names.push((format!("o{o}"), format!("island_obj_{g}")));
        extra_pairs.push((a, o));
    }
    debug_assert_eq!(prefs.len(), n + islands + block * blocks);
    let instance = Instance::house_allocation(next_obj, prefs)?;
    let k = r.k + blocks * (block - 1);
    let mut pads = r.pads.clone();
    pads.push((format!("condorcet-{block}"), blocks));
    pads.push(("island".to_string(), islands));

    let witness = r.witness.map(|base| {
        let inst = Arc::new(instance.clone());
        Box::new(move |cover: &[usize]| {
            let mut pairs = base(cover)?.pairs();
            pairs.extend(extra_pairs.iter().copied());
            Matching::from_pairs(&inst, &pairs)
        }) as super::WitnessFn
    });
    Ok(ReductionOutput { instance, k, names, pads, witness })
}

/// Completes a house allocation instance: agent `i` gets a private dummy
/// object `m + i` right after its original list, then every remaining
/// object in ascending order as singletons.
pub fn complete_transform(inst: &Instance) -> Result<Instance> {
    if inst.model() != ModelKind::HouseAllocation {
        return Err(Error::WrongModel { expected: "HA".into(), found: inst.model() });
    }
    let (n, m) = (inst.n_agents(), inst.n_objects());
    let prefs = inst
        .agents()
        .map(|i| {
            let mut groups = inst.pref(i).groups().to_vec();
            let dummy = m + i;
            groups.push(vec![dummy]);
            groups.extend((1..=m + n).filter(|&o| o != dummy && !inst.acceptable(i, o)).map(|o| vec![o]));
            PreferenceList::new(groups)
        })
        .collect();
    Instance::house_allocation(m + n, prefs)
}

/// Carries a matching of `original` into `complete_transform(original)`,
/// sending unmatched agents to their dummies.
pub fn lift_to_complete(original: &Instance, completed: &Instance, m: &Matching) -> Result<Matching> {
    m.validate(original)?;
    let base = original.n_objects();
    let pairs: Vec<(usize, usize)> =
        original.agents().map(|i| (i, m.partner(i).unwrap_or(base + i))).collect();
    Matching::from_pairs(completed, &pairs)
}

/// Single-tie house allocation: the base with tied lists, padded to ⌈c·n⌉
/// when `c` is given by islands and two-agents-one-object gadgets.
pub fn x3c_to_hati_single_tie(x: &X3cInstance, c: Option<Ratio<u64>>) -> Result<ReductionOutput> {
    let mut b = Builder::new();
    let nodes = hai_core(&mut b, x, true, false);
    let n = b.u_nodes().count();
    let base_k = 5 * x.nhat() + 1;
    let (islands, pairs_n) = match c {
        None => (0, 0),
        Some(c) => {
            let (a, counts) = plan_padding(n, base_k, c, PadKind { size: 1, gain: 0 }, &[PadKind { size: 2, gain: 1 }])?;
            (a, counts[0])
        }
    };
    let mut extra = Vec::new();
    for g in 1..=pairs_n {
        let o = b.obj(format!("pair_obj_{g}"));
        let a1 = b.u(format!("pair_{g}^1"));
        let a2 = b.u(format!("pair_{g}^2"));
        b.set(a1, vec![vec![o]]);
        b.set(a2, vec![vec![o]]);
        extra.push((a1, o));
    }
    for g in 1..=islands {
        let o = b.obj(format!("island_obj_{g}"));
        let a = b.u(format!("island_{g}"));
        b.set(a, vec![vec![o]]);
        extra.push((a, o));
    }
    let k = base_k + pairs_n;
    let pads = pad_list(c, &[("two-agents-one-object", pairs_n), ("island", islands)]);
    finish_output(b, ModelKind::HouseAllocation, k, pads, x, move |x, mask| {
        let mut pairs = nodes.witness_pairs(x, mask);
        pairs.extend(extra.iter().copied());
        pairs
    })
}

/// Dichotomous complete house allocation: the tied base plus 12n̂ dummy
/// objects, where every agent puts its original objects in the first class
/// and all others in the second. With `c`, islands, 2×2 gadgets and (for
/// c >= 1/2, giving fewer objects than agents) 3-agent 2-object gadgets pad
/// the threshold to ⌈c·n⌉.
pub fn x3c_to_hatc_dich(x: &X3cInstance, c: Option<Ratio<u64>>) -> Result<ReductionOutput> {
    let mut b = Builder::new();
    let nodes = hai_core(&mut b, x, true, false);
    let dummies: Vec<Node> = (1..=12 * x.nhat()).map(|i| b.obj(format!("z_{i}"))).collect();
    let n = b.u_nodes().count();
    let base_k = 5 * x.nhat() + 1;
    let island = PadKind { size: 1, gain: 0 };
    let (islands, two, three) = match c {
        None => (0, 0, 0),
        Some(c) if c >= Ratio::new(1, 2) => {
            let (a, counts) =
                plan_padding(n, base_k, c, island, &[PadKind { size: 2, gain: 1 }, PadKind { size: 3, gain: 2 }])?;
            (a, counts[0], counts[1])
        }
        Some(c) => {
            let (a, counts) = plan_padding(n, base_k, c, island, &[PadKind { size: 2, gain: 1 }])?;
            (a, counts[0], 0)
        }
    };
    let base_agents: Vec<Node> = b.u_nodes().collect();
    let mut extra = Vec::new();
    for (kind, count, agents) in [("twin", two, 2), ("triple", three, 3)] {
        for g in 1..=count {
            let top = b.obj(format!("{kind}_obj_{g}^1"));
            let other = b.obj(format!("{kind}_obj_{g}^2"));
            let members: Vec<Node> = (1..=agents).map(|l| b.u(format!("{kind}_{g}^{l}"))).collect();
            for &a in &members {
                b.set(a, vec![vec![top]]);
            }
            extra.push((members[0], top));
            extra.push((members[1], other));
        }
    }
    for g in 1..=islands {
        let o = b.obj(format!("island_obj_{g}"));
        let a = b.u(format!("island_{g}"));
        b.set(a, vec![vec![o]]);
        extra.push((a, o));
    }
    complete_second_class(&mut b);

    let k = base_k + two + 2 * three;
    let pads = pad_list(c, &[("two-agents-two-objects", two), ("three-agents-two-objects", three), ("island", islands)]);
    finish_output(b, ModelKind::HouseAllocation, k, pads, x, move |x, mask| {
        let mut pairs = nodes.witness_pairs(x, mask);
        let matched: Vec<Node> = pairs.iter().map(|p| p.0).collect();
        let idle = base_agents.iter().filter(|a| !matched.contains(a));
        pairs.extend(idle.zip(&dummies).map(|(&a, &z)| (a, z)));
        pairs.extend(extra.iter().copied());
        pairs
    })
}

// Appends every alternative an agent does not list as one final tie group.
pub(crate) fn complete_second_class(b: &mut Builder) {
    let agents: Vec<Node> = b.u_nodes().chain(b.w_nodes()).collect();
    let objs: Vec<Node> = b.obj_nodes().collect();
    let (us, ws): (Vec<Node>, Vec<Node>) = (b.u_nodes().collect(), b.w_nodes().collect());
    for a in agents {
        let candidates: &[Node] = if !objs.is_empty() {
            &objs
        } else if matches!(a, Node::U(_)) {
            &ws
        } else {
            &us
        };
        let listed: Vec<Node> = b.groups(a).iter().flatten().copied().collect();
        let rest: Vec<Node> = candidates.iter().copied().filter(|n| !listed.contains(n)).collect();
        if !rest.is_empty() {
            let mut groups = b.groups(a).to_vec();
            groups.push(rest);
            b.set(a, groups);
        }
    }
}

pub(crate) fn pad_list(c: Option<Ratio<u64>>, kinds: &[(&str, usize)]) -> Vec<(String, usize)> {
    if c.is_none() {
        return Vec::new();
    }
    kinds.iter().map(|&(name, count)| (name.to_string(), count)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ceil_fraction_of;
    use crate::verify::stability_number;

    fn yes1() -> X3cInstance {
        X3cInstance::new(1, vec![[1, 2, 3], [1, 2, 3], [1, 2, 3]]).unwrap()
    }

    fn yes2() -> X3cInstance {
        X3cInstance::new(2, vec![[1, 2, 3], [4, 5, 6], [1, 2, 4], [3, 5, 6], [1, 4, 5], [2, 3, 6]]).unwrap()
    }

    fn witness_ok(r: &ReductionOutput, x: &X3cInstance) {
        let cover = x.find_cover().unwrap();
        let m = r.witness(&cover).unwrap();
        let s = stability_number(&r.instance, &m).unwrap().stability_number;
        assert!(s < r.k, "s = {s}, k = {}", r.k);
    }

    #[test]
    fn hai_counts() {
        let x = yes2();
        let r = x3c_to_hai(&x).unwrap();
        assert_eq!((r.instance.n_agents(), r.instance.n_objects(), r.k), (36, 12, 11));
        witness_ok(&r, &x);
    }

    #[test]
    fn maj_hai_counts() {
        let x = yes1();
        let r = x3c_to_maj_hai(&x).unwrap();
        assert_eq!((r.instance.n_agents(), r.k), (42, 22));
        assert_eq!(r.k, crate::model::majority(42));
        witness_ok(&r, &x);
    }

    #[test]
    fn scaled_thresholds() {
        let x = yes1();
        for (p, q) in [(1u64, 10u64), (1, 4), (1, 2), (2, 3), (4, 5)] {
            let c = Ratio::new(p, q);
            let r = scale_to_c(x3c_to_hai(&x).unwrap(), c).unwrap();
            assert_eq!(ceil_fraction_of(c, r.instance.n_agents()), r.k, "c = {c}");
            witness_ok(&r, &x);
        }
    }

    #[test]
    fn completion_lifts_witness() {
        let x = yes1();
        let r = x3c_to_hai(&x).unwrap();
        let done = complete_transform(&r.instance).unwrap();
        assert_eq!((done.n_agents(), done.n_objects()), (18, 24));
        assert!(done.agents().all(|i| done.pref(i).len() == 24));
        let m = r.witness(&[1]).unwrap();
        let lifted = lift_to_complete(&r.instance, &done, &m).unwrap();
        assert_eq!(lifted.len(), 18);
        let s = stability_number(&done, &lifted).unwrap().stability_number;
        assert!(s < r.k);
    }

    #[test]
    fn hati_single_tie_shape() {
        let x = yes1();
        let r = x3c_to_hati_single_tie(&x, None).unwrap();
        r.instance.check_single_tie().unwrap();
        witness_ok(&r, &x);
        let c = Ratio::new(2, 5);
        let r = x3c_to_hati_single_tie(&x, Some(c)).unwrap();
        r.instance.check_single_tie().unwrap();
        assert_eq!(ceil_fraction_of(c, r.instance.n_agents()), r.k);
        witness_ok(&r, &x);
        assert!(x3c_to_hati_single_tie(&x, Some(Ratio::new(1, 2))).is_err());
    }

    #[test]
    fn hatc_dich_shape() {
        let x = yes1();
        let r = x3c_to_hatc_dich(&x, None).unwrap();
        assert_eq!((r.instance.n_agents(), r.instance.n_objects()), (18, 18));
        r.instance.check_dichotomous_complete().unwrap();
        witness_ok(&r, &x);
        for (p, q) in [(1u64, 5u64), (2, 5), (1, 2), (3, 5), (13, 20)] {
            let c = Ratio::new(p, q);
            let r = x3c_to_hatc_dich(&x, Some(c)).unwrap();
            r.instance.check_dichotomous_complete().unwrap();
            assert_eq!(ceil_fraction_of(c, r.instance.n_agents()), r.k, "c = {c}");
            witness_ok(&r, &x);
        }
        assert!(x3c_to_hatc_dich(&x, Some(Ratio::new(2, 3))).is_err());
    }
}

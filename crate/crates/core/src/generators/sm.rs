//! Marriage and roommates reductions.
//!
//! The strict marriage base has, per triple `j`, agents `s_j^ℓ, y_j, q_j`
//! (side U) and `c_j^ℓ, x_j, p_j` (side W); per element `i`, agents
//! `b_i, d_i, e_i, f'_i, g'_i` (U) and `a_i, d'_i, e'_i, f_i, g_i` (W).
//! 60n̂ agents, threshold 16n̂ + 1.

use num_rational::Ratio;

use super::ha::{complete_second_class, finish_output, hai_core, pad_list};
use super::{plan_padding, Builder, Node, PadKind, ReductionOutput};
use crate::error::{Error, Result};
use crate::model::ModelKind;
use crate::x3c::X3cInstance;

/// Which marriage or roommates construction to build. Variants taking `c`
/// pad the threshold to ⌈c·n⌉ when it is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmVariant {
    /// The strict base alone, k = 16n̂ + 1.
    Base,
    /// The base plus a long path, so that the threshold is a strict majority.
    MaxMajority,
    /// The base plus four-vertex paths and pair islands.
    PathPads(Option<Ratio<u64>>),
    /// The base as a roommates instance plus pairs of cyclic triangles and pair islands.
    RoommatesTriangles(Option<Ratio<u64>>),
    /// House allocation with single ties re-encoded as marriage, plus
    /// three-vertex paths and pair islands.
    SingleTie(Option<Ratio<u64>>),
    /// The single-tie encoding completed with a second indifference class,
    /// plus four-vertex paths and pair islands.
    DichotomousComplete(Option<Ratio<u64>>),
}

impl SmVariant {
    pub fn name(self) -> &'static str {
        match self {
            SmVariant::Base => "base",
            SmVariant::MaxMajority => "max-maj",
            SmVariant::PathPads(_) => "pad4",
            SmVariant::RoommatesTriangles(_) => "sr-triangles",
            SmVariant::SingleTie(_) => "single-tie",
            SmVariant::DichotomousComplete(_) => "dich-complete",
        }
    }

    /// Parses a variant name; `c` fills the padded variants.
    pub fn parse(name: &str, c: Option<Ratio<u64>>) -> Result<SmVariant> {
        let v = match name {
            "base" => SmVariant::Base,
            "max-maj" => SmVariant::MaxMajority,
            "pad4" => SmVariant::PathPads(c),
            "sr-triangles" => SmVariant::RoommatesTriangles(c),
            "single-tie" => SmVariant::SingleTie(c),
            "dich-complete" => SmVariant::DichotomousComplete(c),
            _ => return Err(Error::Parameter(format!("unknown marriage variant {name}"))),
        };
        if c.is_some() && matches!(v, SmVariant::Base | SmVariant::MaxMajority) {
            return Err(Error::Parameter(format!("variant {name} takes no fraction")));
        }
        Ok(v)
    }

    pub fn fraction(self) -> Option<Ratio<u64>> {
        match self {
            SmVariant::Base | SmVariant::MaxMajority => None,
            SmVariant::PathPads(c)
            | SmVariant::RoommatesTriangles(c)
            | SmVariant::SingleTie(c)
            | SmVariant::DichotomousComplete(c) => c,
        }
    }
}

#[derive(Clone)]
pub(crate) struct BaseNodes {
    s: Vec<[Node; 3]>,
    c: Vec<[Node; 3]>,
    y: Vec<Node>,
    q: Vec<Node>,
    xs: Vec<Node>,
    p: Vec<Node>,
    a: Vec<Node>,
    b: Vec<Node>,
    d: Vec<[Node; 2]>,
    e: Vec<[Node; 2]>,
    f: Vec<[Node; 2]>,
    g: Vec<[Node; 2]>,
}

impl BaseNodes {
    pub(crate) fn witness_pairs(&self, x: &X3cInstance, mask: &[bool]) -> Vec<(Node, Node)> {
        let mut pairs = Vec::new();
        for (j, tr) in x.triples().iter().enumerate() {
            pairs.push((self.y[j], self.p[j]));
            pairs.push((self.q[j], self.xs[j]));
            for l in 0..3 {
                if mask[j] {
                    pairs.push((self.s[j][l], self.a[tr[l] - 1]));
                    pairs.push((self.b[tr[l] - 1], self.c[j][l]));
                } else {
                    pairs.push((self.s[j][l], self.c[j][l]));
                }
            }
        }
        for i in 0..self.a.len() {
            // [0] is the U end, [1] the W end.
            for pair in [self.d[i], self.e[i], self.f[i], self.g[i]] {
                pairs.push((pair[0], pair[1]));
            }
        }
        pairs
    }
}

fn base_core(bld: &mut Builder, x: &X3cInstance) -> BaseNodes {
    let q_sets = x.triples().len();
    let ground = x.ground_size();
    let mut n = BaseNodes {
        s: Vec::new(),
        c: Vec::new(),
        y: Vec::new(),
        q: Vec::new(),
        xs: Vec::new(),
        p: Vec::new(),
        a: Vec::new(),
        b: Vec::new(),
        d: Vec::new(),
        e: Vec::new(),
        f: Vec::new(),
        g: Vec::new(),
    };
    for j in 1..=q_sets {
        n.s.push([1, 2, 3].map(|l| bld.u(format!("s_{j}^{l}"))));
        n.y.push(bld.u(format!("y_{j}")));
        n.q.push(bld.u(format!("q_{j}")));
        n.c.push([1, 2, 3].map(|l| bld.w(format!("c_{j}^{l}"))));
        n.xs.push(bld.w(format!("x_{j}")));
        n.p.push(bld.w(format!("p_{j}")));
    }
    for i in 1..=ground {
        n.b.push(bld.u(format!("b_{i}")));
        let d = bld.u(format!("d_{i}"));
        let e = bld.u(format!("e_{i}"));
        let f_primed = bld.u(format!("f'_{i}"));
        let g_primed = bld.u(format!("g'_{i}"));
        n.a.push(bld.w(format!("a_{i}")));
        let d_primed = bld.w(format!("d'_{i}"));
        let e_primed = bld.w(format!("e'_{i}"));
        let f = bld.w(format!("f_{i}"));
        let g = bld.w(format!("g_{i}"));
        n.d.push([d, d_primed]);
        n.e.push([e, e_primed]);
        n.f.push([f_primed, f]);
        n.g.push([g_primed, g]);
    }

    for (j, tr) in x.triples().iter().enumerate() {
        for l in 0..3 {
            let i = tr[l] - 1;
            bld.strict(n.s[j][l], &[n.a[i], n.p[j], n.c[j][l]]);
            bld.strict(n.c[j][l], &[n.b[i], n.q[j], n.s[j][l]]);
        }
        bld.strict(n.q[j], &[n.xs[j], n.c[j][0], n.c[j][1], n.c[j][2]]);
        bld.strict(n.p[j], &[n.y[j], n.s[j][0], n.s[j][1], n.s[j][2]]);
        bld.strict(n.y[j], &[n.p[j]]);
        bld.strict(n.xs[j], &[n.q[j]]);
    }
    for i in 0..ground {
        let occ = x.occurrences(i + 1);
        let mut b_list = vec![n.f[i][1]];
        b_list.extend(occ.iter().map(|&(j, l)| n.c[j - 1][l - 1]));
        b_list.push(n.g[i][1]);
        bld.strict(n.b[i], &b_list);
        let mut a_list = vec![n.d[i][0]];
        a_list.extend(occ.iter().map(|&(j, l)| n.s[j - 1][l - 1]));
        a_list.push(n.e[i][0]);
        bld.strict(n.a[i], &a_list);

        bld.strict(n.d[i][0], &[n.a[i], n.d[i][1]]);
        bld.strict(n.e[i][0], &[n.a[i], n.e[i][1]]);
        bld.strict(n.f[i][1], &[n.b[i], n.f[i][0]]);
        bld.strict(n.g[i][1], &[n.b[i], n.g[i][0]]);
        bld.strict(n.f[i][0], &[n.f[i][1]]);
        bld.strict(n.g[i][0], &[n.g[i][1]]);
        bld.strict(n.d[i][1], &[n.d[i][0]]);
        bld.strict(n.e[i][1], &[n.e[i][0]]);
    }
    n
}

/// Threshold of the strict base: 16n̂ + 1.
pub(crate) fn base_threshold(x: &X3cInstance) -> usize {
    16 * x.nhat() + 1
}

/// Builds a marriage (or, for [`SmVariant::RoommatesTriangles`], roommates) reduction.
pub fn x3c_to_sm(x: &X3cInstance, variant: SmVariant) -> Result<ReductionOutput> {
    let nh = x.nhat();
    let mut bld = Builder::new();
    let island = PadKind { size: 2, gain: 0 };
    match variant {
        SmVariant::Base => {
            let nodes = base_core(&mut bld, x);
            finish_output(bld, ModelKind::Marriage, base_threshold(x), Vec::new(), x, move |x, m| {
                nodes.witness_pairs(x, m)
            })
        }
        SmVariant::MaxMajority => {
            let nodes = base_core(&mut bld, x);
            let len = 28 * nh + 2;
            let path: Vec<Node> = (1..=len)
                .map(|t| if t % 2 == 1 { bld.u(format!("path_{t}")) } else { bld.w(format!("path_{t}")) })
                .collect();
            // Path edges (1,2), (3,4), … form the witness part; interior vertices prefer the other edge.
            for t in 0..len {
                let list = if t == 0 {
                    vec![path[1]]
                } else if t == len - 1 {
                    vec![path[t - 1]]
                } else if t % 2 == 0 {
                    vec![path[t - 1], path[t + 1]]
                } else {
                    vec![path[t + 1], path[t - 1]]
                };
                bld.strict(path[t], &list);
            }
            let k = 44 * nh + 2;
            let pads = vec![("path".to_string(), 1)];
            finish_output(bld, ModelKind::Marriage, k, pads, x, move |x, m| {
                let mut pairs = nodes.witness_pairs(x, m);
                pairs.extend(path.chunks(2).map(|e| (e[0], e[1])));
                pairs
            })
        }
        SmVariant::PathPads(c) => {
            let nodes = base_core(&mut bld, x);
            let n = 60 * nh;
            let (islands, paths) = plan(n, base_threshold(x), c, island, PadKind { size: 4, gain: 2 })?;
            let mut extra = Vec::new();
            for g in 1..=paths {
                let v = path4(&mut bld, g, false);
                extra.push((v[2], v[1]));
            }
            extra.extend(pair_islands(&mut bld, islands, false));
            let k = base_threshold(x) + 2 * paths;
            let pads = pad_list(c, &[("path-4", paths), ("pair", islands)]);
            finish_output(bld, ModelKind::Marriage, k, pads, x, move |x, m| {
                let mut pairs = nodes.witness_pairs(x, m);
                pairs.extend(extra.iter().copied());
                pairs
            })
        }
        SmVariant::RoommatesTriangles(c) => {
            let nodes = base_core(&mut bld, x);
            let n = 60 * nh;
            let (islands, blocks) = plan(n, base_threshold(x), c, island, PadKind { size: 6, gain: 4 })?;
            let mut extra = Vec::new();
            for g in 1..=blocks {
                let t1 = [1, 2, 3].map(|l| bld.u(format!("tri_{g}a^{l}")));
                let t2 = [1, 2, 3].map(|l| bld.u(format!("tri_{g}b^{l}")));
                for (own, other) in [(t1, t2), (t2, t1)] {
                    for l in 0..3 {
                        let mut list = vec![own[(l + 1) % 3], own[(l + 2) % 3]];
                        list.extend(other);
                        bld.strict(own[l], &list);
                    }
                }
                extra.extend([(t1[0], t1[1]), (t1[2], t2[2]), (t2[0], t2[1])]);
            }
            extra.extend(pair_islands(&mut bld, islands, true));
            let k = base_threshold(x) + 4 * blocks;
            let pads = pad_list(c, &[("triangle-pair", blocks), ("pair", islands)]);
            finish_output(bld, ModelKind::Roommates, k, pads, x, move |x, m| {
                let mut pairs = nodes.witness_pairs(x, m);
                pairs.extend(extra.iter().copied());
                pairs
            })
        }
        SmVariant::SingleTie(c) => {
            let nodes = hai_core(&mut bld, x, true, true);
            mirror_single_ties(&mut bld);
            let n = 24 * nh;
            let base_k = 5 * nh + 1;
            let (islands, paths) = plan(n, base_k, c, island, PadKind { size: 3, gain: 1 })?;
            let mut extra = Vec::new();
            for g in 1..=paths {
                let w = bld.w(format!("path3_{g}^2"));
                let u1 = bld.u(format!("path3_{g}^1"));
                let u2 = bld.u(format!("path3_{g}^3"));
                bld.set(u1, vec![vec![w]]);
                bld.set(u2, vec![vec![w]]);
                bld.set(w, vec![vec![u1, u2]]);
                extra.push((u1, w));
            }
            extra.extend(pair_islands(&mut bld, islands, false));
            let k = base_k + paths;
            let pads = pad_list(c, &[("path-3", paths), ("pair", islands)]);
            finish_output(bld, ModelKind::Marriage, k, pads, x, move |x, m| {
                let mut pairs = nodes.witness_pairs(x, m);
                pairs.extend(extra.iter().copied());
                pairs
            })
        }
        SmVariant::DichotomousComplete(c) => {
            let nodes = hai_core(&mut bld, x, true, true);
            mirror_single_ties(&mut bld);
            let n = 24 * nh;
            let base_k = 5 * nh + 1;
            let (islands, paths) = plan(n, base_k, c, island, PadKind { size: 4, gain: 2 })?;
            let mut extra = Vec::new();
            for g in 1..=paths {
                let v = path4(&mut bld, g, true);
                extra.push((v[2], v[1]));
                extra.push((v[0], v[3]));
            }
            extra.extend(pair_islands(&mut bld, islands, false));
            complete_second_class(&mut bld);
            let k = base_k + 2 * paths;
            let pads = pad_list(c, &[("path-4", paths), ("pair", islands)]);
            finish_output(bld, ModelKind::Marriage, k, pads, x, move |x, m| {
                let mut pairs = nodes.witness_pairs(x, m);
                pairs.extend(extra.iter().copied());
                pairs
            })
        }
    }
}

fn plan(n: usize, k: usize, c: Option<Ratio<u64>>, island: PadKind, pad: PadKind) -> Result<(usize, usize)> {
    match c {
        None => Ok((0, 0)),
        Some(c) => plan_padding(n, k, c, island, &[pad]).map(|(a, counts)| (a, counts[0])),
    }
}

// Object-side agents list, as one tie, every agent that lists them.
fn mirror_single_ties(bld: &mut Builder) {
    let mut lists: Vec<Vec<Node>> = vec![Vec::new(); bld.w_nodes().count()];
    for u in bld.u_nodes() {
        for &w in bld.groups(u).iter().flatten() {
            if let Node::W(i) = w {
                lists[i].push(u);
            }
        }
    }
    for (i, list) in lists.into_iter().enumerate() {
        if !list.is_empty() {
            bld.set(Node::W(i), vec![list]);
        }
    }
}

// v1 (U) – v2 (W) – v3 (U) – v4 (W); the middle pair ranks each other first.
fn path4(bld: &mut Builder, g: usize, single_ties: bool) -> [Node; 4] {
    let v1 = bld.u(format!("path4_{g}^1"));
    let v2 = bld.w(format!("path4_{g}^2"));
    let v3 = bld.u(format!("path4_{g}^3"));
    let v4 = bld.w(format!("path4_{g}^4"));
    if single_ties {
        // The second class comes from completion.
        bld.set(v1, vec![vec![v2]]);
        bld.set(v2, vec![vec![v3]]);
        bld.set(v3, vec![vec![v2]]);
        bld.set(v4, vec![vec![v3]]);
    } else {
        bld.strict(v1, &[v2]);
        bld.strict(v2, &[v3, v1]);
        bld.strict(v3, &[v2, v4]);
        bld.strict(v4, &[v3]);
    }
    [v1, v2, v3, v4]
}

fn pair_islands(bld: &mut Builder, count: usize, roommates: bool) -> Vec<(Node, Node)> {
    (1..=count)
        .map(|g| {
            let u = bld.u(format!("pair_{g}^1"));
            let w = if roommates { bld.u(format!("pair_{g}^2")) } else { bld.w(format!("pair_{g}^2")) };
            bld.set(u, vec![vec![w]]);
            bld.set(w, vec![vec![u]]);
            (u, w)
        })
        .collect()
}

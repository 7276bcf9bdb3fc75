//! Exhaustive ground truth for small instances.
//!
//! Matchings are enumerated depth-first: agents in ascending order, each
//! taking its partners in preference order (ties by ascending id) and then
//! staying unmatched. In the marriage and roommates models an agent only
//! picks partners with a larger id, so every matching appears exactly once.
//!
//! [`exact_stability_number`] is the plain definition: it scores every
//! matching against the given one. [`min_k`] and [`exists_k_stable`] walk
//! the same enumeration but skip subtrees whose forced improvers already
//! reach the bound being looked for.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use crate::error::{Error, Result};
use crate::model::{Instance, Matching, ModelKind, Threshold};

/// Size caps for exhaustive work; exceeding one is reported, never truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Agent cap for marriage and roommates instances.
    pub max_agents: usize,
    /// Agent cap for house allocation.
    pub max_ha_agents: usize,
    /// Object cap for house allocation.
    pub max_objects: usize,
    /// Cap on matchings visited by an enumeration.
    pub max_matchings: u64,
    /// Cap on search-tree nodes expanded by min-k and existence searches.
    pub max_nodes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_agents: 12, max_ha_agents: 10, max_objects: 10, max_matchings: 5_000_000, max_nodes: 50_000_000 }
    }
}

pub const BUDGET_ENV: &str = "MATCHSTAB_BUDGET";

impl OracleBudget {
    /// No caps at all.
    pub fn unlimited() -> Self {
        OracleBudget {
            max_agents: usize::MAX,
            max_ha_agents: usize::MAX,
            max_objects: usize::MAX,
            max_matchings: u64::MAX,
            max_nodes: u64::MAX,
        }
    }

    /// Applies `key=value` overrides separated by commas. Keys: `agents`,
    /// `ha_agents`, `objects`, `matchings`, `nodes`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("budget item {item:?} is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("budget value {value:?} is not an integer")))?;
            match key.trim() {
                "agents" => self.max_agents = value as usize,
                "ha_agents" => self.max_ha_agents = value as usize,
                "objects" => self.max_objects = value as usize,
                "matchings" => self.max_matchings = value,
                "nodes" => self.max_nodes = value,
                other => return Err(Error::Parameter(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }

    /// Defaults overridden by the `MATCHSTAB_BUDGET` environment variable, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(spec) => OracleBudget::default().with_overrides(&spec),
            Err(_) => Ok(OracleBudget::default()),
        }
    }

    fn admit(&self, inst: &Instance) -> Result<()> {
        let n = inst.n_agents();
        let ok = match inst.model() {
            ModelKind::HouseAllocation => n <= self.max_ha_agents && inst.n_objects() <= self.max_objects,
            _ => n <= self.max_agents,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::RefusedTooLarge(format!(
                "{} instance with {n} agents and {} objects exceeds the oracle budget",
                inst.model(),
                inst.n_objects()
            )))
        }
    }
}

const NONE: u32 = u32::MAX;

// Dense copy of the instance tuned for the search loops.
struct Table {
    model: ModelKind,
    n: usize,
    m: usize,
    // choices[i]: acceptable alternatives of agent i in enumeration order.
    choices: Vec<Vec<usize>>,
    // rank[i][a]: tie-group index of alternative a for agent i, NONE if unacceptable.
    rank: Vec<Vec<u32>>,
    // Rank of being unmatched.
    unmatched: Vec<u32>,
}

impl Table {
    fn new(inst: &Instance) -> Table {
        let n = inst.n_agents();
        let m = inst.alternative_count();
        let mut choices = vec![Vec::new(); n + 1];
        let mut rank = vec![vec![NONE; m + 1]; n + 1];
        let mut unmatched = vec![0; n + 1];
        for i in inst.agents() {
            let groups = inst.pref(i).groups();
            unmatched[i] = groups.len() as u32;
            for (r, g) in groups.iter().enumerate() {
                let mut g = g.clone();
                g.sort_unstable();
                for a in g {
                    rank[i][a] = r as u32;
                    choices[i].push(a);
                }
            }
        }
        Table { model: inst.model(), n, m, choices, rank, unmatched }
    }

    fn slot(&self, i: usize, partner: Option<usize>) -> u32 {
        match partner {
            Some(a) => self.rank[i][a],
            None => self.unmatched[i],
        }
    }

    fn is_ha(&self) -> bool {
        self.model == ModelKind::HouseAllocation
    }
}

// Partial matching during enumeration. Agents 1..frontier have been decided.
struct Partial {
    partner: Vec<Option<usize>>,
    used: Vec<bool>,
    frontier: usize,
}

impl Partial {
    fn new(t: &Table) -> Partial {
        Partial { partner: vec![None; t.n + 1], used: vec![false; t.m + 1], frontier: 1 }
    }

    fn to_matching(&self, inst: &Instance) -> Matching {
        let mut m = Matching::empty(inst);
        for i in 1..self.partner.len() {
            if let Some(a) = self.partner[i] {
                if inst.model() == ModelKind::HouseAllocation || i < a {
                    m.insert(inst, i, a).expect("enumerated pair");
                }
            }
        }
        m
    }
}

// Options for agent i at the current node, in enumeration order; None = unmatched.
fn options(t: &Table, p: &Partial, i: usize) -> Vec<Option<usize>> {
    if !t.is_ha() && p.partner[i].is_some() {
        return vec![p.partner[i]];
    }
    let mut out: Vec<Option<usize>> = t.choices[i]
        .iter()
        .copied()
        .filter(|&a| if t.is_ha() { !p.used[a] } else { a > i && p.partner[a].is_none() })
        .map(Some)
        .collect();
    out.push(None);
    out
}

fn apply(t: &Table, p: &mut Partial, i: usize, choice: Option<usize>) {
    if let Some(a) = choice {
        if t.is_ha() {
            p.used[a] = true;
        } else if p.partner[i].is_none() {
            p.partner[a] = Some(i);
        }
    }
    p.partner[i] = choice;
    p.frontier = i + 1;
}

fn undo(t: &Table, p: &mut Partial, i: usize, choice: Option<usize>, was_preset: bool) {
    if let Some(a) = choice {
        if t.is_ha() {
            p.used[a] = false;
        } else if !was_preset {
            p.partner[a] = None;
        }
    }
    if !was_preset {
        p.partner[i] = None;
    }
    p.frontier = i;
}

enum Step {
    Continue,
    Prune,
    Stop,
}

trait Visitor {
    fn node(&mut self, _t: &Table, _p: &Partial) -> Step {
        Step::Continue
    }
    fn leaf(&mut self, t: &Table, p: &Partial) -> Step;
}

struct Walker {
    nodes: u64,
    max_nodes: u64,
}

impl Walker {
    fn walk<V: Visitor>(&mut self, t: &Table, p: &mut Partial, v: &mut V) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::RefusedTooLarge(format!("search exceeded {} nodes", self.max_nodes)));
        }
        let i = p.frontier;
        if i > t.n {
            return Ok(matches!(v.leaf(t, p), Step::Stop));
        }
        match v.node(t, p) {
            Step::Stop => return Ok(true),
            Step::Prune => return Ok(false),
            Step::Continue => {}
        }
        let preset = !t.is_ha() && p.partner[i].is_some();
        for choice in options(t, p, i) {
            apply(t, p, i, choice);
            let stop = self.walk(t, p, v)?;
            undo(t, p, i, choice, preset);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

struct Collect<'a> {
    inst: &'a Instance,
    out: Vec<Matching>,
    cap: u64,
    overflow: bool,
}

impl Visitor for Collect<'_> {
    fn leaf(&mut self, _t: &Table, p: &Partial) -> Step {
        if self.out.len() as u64 >= self.cap {
            self.overflow = true;
            return Step::Stop;
        }
        self.out.push(p.to_matching(self.inst));
        Step::Continue
    }
}

fn too_many(cap: u64) -> Error {
    Error::RefusedTooLarge(format!("more than {cap} matchings"))
}

/// Every valid matching exactly once, the empty matching included, in enumeration order.
pub fn enumerate_matchings(inst: &Instance, budget: &OracleBudget) -> Result<Vec<Matching>> {
    budget.admit(inst)?;
    let t = Table::new(inst);
    let mut v = Collect { inst, out: Vec::new(), cap: budget.max_matchings, overflow: false };
    Walker { nodes: 0, max_nodes: u64::MAX }.walk(&t, &mut Partial::new(&t), &mut v)?;
    if v.overflow {
        return Err(too_many(budget.max_matchings));
    }
    Ok(v.out)
}

/// Number of valid matchings.
pub fn count_matchings(inst: &Instance, budget: &OracleBudget) -> Result<u64> {
    struct Count(u64, u64, bool);
    impl Visitor for Count {
        fn leaf(&mut self, _t: &Table, _p: &Partial) -> Step {
            if self.0 >= self.1 {
                self.2 = true;
                return Step::Stop;
            }
            self.0 += 1;
            Step::Continue
        }
    }
    budget.admit(inst)?;
    let t = Table::new(inst);
    let mut c = Count(0, budget.max_matchings, false);
    Walker { nodes: 0, max_nodes: u64::MAX }.walk(&t, &mut Partial::new(&t), &mut c)?;
    if c.2 {
        return Err(too_many(budget.max_matchings));
    }
    Ok(c.0)
}

/// Largest improver count against `m` with the first matching attaining it.
pub fn exact_stability_report(inst: &Instance, m: &Matching, budget: &OracleBudget) -> Result<(usize, Matching)> {
    m.validate(inst)?;
    budget.admit(inst)?;
    let t = Table::new(inst);
    let current: Vec<u32> = (0..=t.n).map(|i| if i == 0 { 0 } else { t.slot(i, m.partner(i)) }).collect();
    struct Best<'a> {
        inst: &'a Instance,
        current: Vec<u32>,
        best: Option<(usize, Matching)>,
        seen: u64,
        cap: u64,
        overflow: bool,
    }
    impl Visitor for Best<'_> {
        fn leaf(&mut self, t: &Table, p: &Partial) -> Step {
            if self.seen >= self.cap {
                self.overflow = true;
                return Step::Stop;
            }
            self.seen += 1;
            let s = (1..=t.n).filter(|&i| t.slot(i, p.partner[i]) < self.current[i]).count();
            if self.best.as_ref().is_none_or(|(b, _)| s > *b) {
                self.best = Some((s, p.to_matching(self.inst)));
            }
            Step::Continue
        }
    }
    let mut v = Best { inst, current, best: None, seen: 0, cap: budget.max_matchings, overflow: false };
    Walker { nodes: 0, max_nodes: u64::MAX }.walk(&t, &mut Partial::new(&t), &mut v)?;
    if v.overflow {
        return Err(too_many(budget.max_matchings));
    }
    Ok(v.best.expect("the empty matching is always enumerated"))
}

/// max over all matchings M' of the number of agents preferring M' to `m`.
pub fn exact_stability_number(inst: &Instance, m: &Matching, budget: &OracleBudget) -> Result<usize> {
    exact_stability_report(inst, m, budget).map(|(s, _)| s)
}

/// Every matching paired with its exact stability number, in enumeration
/// order. One enumeration, then all pairs of matchings compared.
pub fn exact_stability_all(inst: &Instance, budget: &OracleBudget) -> Result<Vec<(Matching, usize)>> {
    budget.admit(inst)?;
    let t = Table::new(inst);
    struct Slots<'a> {
        inst: &'a Instance,
        rows: Vec<(Matching, Vec<u32>)>,
        cap: u64,
        overflow: bool,
    }
    impl Visitor for Slots<'_> {
        fn leaf(&mut self, t: &Table, p: &Partial) -> Step {
            if self.rows.len() as u64 >= self.cap {
                self.overflow = true;
                return Step::Stop;
            }
            let slots = (1..=t.n).map(|i| t.slot(i, p.partner[i])).collect();
            self.rows.push((p.to_matching(self.inst), slots));
            Step::Continue
        }
    }
    let mut v = Slots { inst, rows: Vec::new(), cap: budget.max_matchings, overflow: false };
    Walker { nodes: 0, max_nodes: u64::MAX }.walk(&t, &mut Partial::new(&t), &mut v)?;
    if v.overflow {
        return Err(too_many(budget.max_matchings));
    }
    let slots: Vec<&Vec<u32>> = v.rows.iter().map(|(_, s)| s).collect();
    let numbers: Vec<usize> = slots
        .iter()
        .map(|cur| slots.iter().map(|alt| alt.iter().zip(cur.iter()).filter(|(a, c)| a < c).count()).max().unwrap_or(0))
        .collect();
    Ok(v.rows.into_iter().map(|(m, _)| m).zip(numbers).collect())
}

// ---------------------------------------------------------------------------
// Stability numbers of complete enumerated matchings and lower bounds for
// partial ones, computed independently of the engines module.

// Kuhn's augmenting-path matching on agent -> object envy lists.
fn kuhn(adj: &[Vec<usize>], m: usize) -> usize {
    fn try_agent(a: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [usize]) -> bool {
        for &o in &adj[a] {
            if !seen[o] {
                seen[o] = true;
                if owner[o] == usize::MAX || try_agent(owner[o], adj, seen, owner) {
                    owner[o] = a;
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; m + 1];
    let mut size = 0;
    for a in 0..adj.len() {
        if !adj[a].is_empty() {
            let mut seen = vec![false; m + 1];
            if try_agent(a, adj, &mut seen, &mut owner) {
                size += 1;
            }
        }
    }
    size
}

// Maximum total weight of a matching over weighted pairs on agents 1..=n, by
// memoised recursion on the set of agents still available.
fn max_weight_pairs(pairs: &[(usize, usize, u8)]) -> usize {
    if pairs.is_empty() {
        return 0;
    }
    let mut ids: Vec<usize> = pairs.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let k = ids.len();
    let idx = |a: usize| ids.binary_search(&a).unwrap();
    let mut nbr: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for &(a, b, w) in pairs {
        let (x, y) = (idx(a), idx(b));
        nbr[x].push((y, w as usize));
        nbr[y].push((x, w as usize));
    }
    fn go(mask: u64, nbr: &[Vec<(usize, usize)>], memo: &mut std::collections::HashMap<u64, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut best = go(rest, nbr, memo);
        for &(j, w) in &nbr[i] {
            if rest & (1u64 << j) != 0 {
                best = best.max(w + go(rest & !(1u64 << j), nbr, memo));
            }
        }
        memo.insert(mask, best);
        best
    }
    assert!(k <= 64, "pair weight search limited to 64 agents");
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    go(full, &nbr, &mut std::collections::HashMap::new())
}

// Rank below which agent i is certain to improve on its final slot.
fn improvement_cutoff(t: &Table, p: &Partial, i: usize) -> u32 {
    if i < p.frontier || (!t.is_ha() && p.partner[i].is_some()) {
        return t.slot(i, p.partner[i]);
    }
    // Undecided: the best it can still get. Any undecided partner may yet
    // pick it, whichever side of i its id is on.
    t.choices[i]
        .iter()
        .copied()
        .filter(|&a| if t.is_ha() { !p.used[a] } else { a >= p.frontier && p.partner[a].is_none() })
        .map(|a| t.rank[i][a])
        .min()
        .unwrap_or(t.unmatched[i])
}

// Exact for complete matchings; a lower bound on every completion otherwise.
fn forced_improvers(t: &Table, p: &Partial) -> usize {
    let cut: Vec<u32> = (0..=t.n).map(|i| if i == 0 { 0 } else { improvement_cutoff(t, p, i) }).collect();
    if t.is_ha() {
        let adj: Vec<Vec<usize>> = (1..=t.n)
            .map(|i| t.choices[i].iter().copied().filter(|&o| t.rank[i][o] < cut[i]).collect())
            .collect();
        kuhn(&adj, t.m)
    } else {
        let mut pairs = Vec::new();
        for i in 1..=t.n {
            for &j in &t.choices[i] {
                if j > i {
                    let w = (t.rank[i][j] < cut[i]) as u8 + (t.rank[j][i] < cut[j]) as u8;
                    if w > 0 {
                        pairs.push((i, j, w));
                    }
                }
            }
        }
        max_weight_pairs(&pairs)
    }
}

struct MinSearch<'a> {
    inst: &'a Instance,
    // Looking for matchings with stability number strictly below this.
    bound: usize,
    first_only: bool,
    best: Option<(usize, Matching)>,
    // Parallel runs: the best (s, branch) found by any worker, and our branch.
    shared: Option<&'a AtomicU64>,
    branch: usize,
}

fn shared_key(s: usize, branch: usize) -> u64 {
    ((s as u64) << 32) | branch as u64
}

impl MinSearch<'_> {
    // The local bound tightened by other branches. A result from an earlier
    // branch wins ties, so later branches must beat it strictly.
    fn effective_bound(&self) -> Option<usize> {
        let Some(shared) = self.shared else { return Some(self.bound) };
        let key = shared.load(Ordering::Relaxed);
        if key == u64::MAX {
            return Some(self.bound);
        }
        let (s, branch) = ((key >> 32) as usize, (key & 0xffff_ffff) as usize);
        if self.first_only {
            // Any earlier success makes this branch irrelevant.
            return if branch < self.branch { None } else { Some(self.bound) };
        }
        let limit = if branch < self.branch { s } else { s + 1 };
        Some(self.bound.min(limit))
    }

    fn publish(&self, s: usize) {
        if let Some(shared) = self.shared {
            shared.fetch_min(shared_key(if self.first_only { 0 } else { s }, self.branch), Ordering::Relaxed);
        }
    }
}

// In house allocation s(M) can only drop when an agent moves to a better
// object, so a matching is dominated when some agent envies an object left
// free, or when two agents would both (weakly, one strictly) gain by swapping.
// Every dominated matching leads by such moves to an undominated one with no
// larger stability number, so the search may skip it.
fn ha_dominated(t: &Table, p: &Partial) -> bool {
    let decided = p.frontier - 1;
    if decided >= 1 {
        let f = decided;
        if let Some(af) = p.partner[f] {
            for j in 1..f {
                if let Some(aj) = p.partner[j] {
                    let (f_to, f_now) = (t.rank[f][aj], t.rank[f][af]);
                    let (j_to, j_now) = (t.rank[j][af], t.rank[j][aj]);
                    if f_to <= f_now && j_to <= j_now && (f_to < f_now || j_to < j_now) {
                        return true;
                    }
                }
            }
        }
    }
    // Free objects some decided agent envies must all be taken later.
    let mut needed = vec![false; t.m + 1];
    let mut count = 0;
    for i in 1..=decided {
        let cut = t.slot(i, p.partner[i]);
        for &o in &t.choices[i] {
            if t.rank[i][o] >= cut {
                break;
            }
            if !p.used[o] && !needed[o] {
                needed[o] = true;
                count += 1;
            }
        }
    }
    if count == 0 {
        return false;
    }
    let undecided = t.n - decided;
    if count > undecided {
        return true;
    }
    // Hall check: the undecided agents must be able to cover the needed objects.
    let adj: Vec<Vec<usize>> = (1..=t.m)
        .map(|o| if needed[o] { (decided + 1..=t.n).filter(|&i| t.rank[i][o] != NONE).collect() } else { Vec::new() })
        .collect();
    kuhn(&adj, t.n) < count
}

impl Visitor for MinSearch<'_> {
    fn node(&mut self, t: &Table, p: &Partial) -> Step {
        let Some(bound) = self.effective_bound() else { return Step::Stop };
        if (t.is_ha() && ha_dominated(t, p)) || forced_improvers(t, p) >= bound {
            Step::Prune
        } else {
            Step::Continue
        }
    }

    fn leaf(&mut self, t: &Table, p: &Partial) -> Step {
        if t.is_ha() && ha_dominated(t, p) {
            return Step::Continue;
        }
        let Some(bound) = self.effective_bound() else { return Step::Stop };
        let s = forced_improvers(t, p);
        if s < bound {
            self.best = Some((s, p.to_matching(self.inst)));
            self.publish(s);
            if self.first_only {
                return Step::Stop;
            }
            self.bound = s;
            if s == 0 {
                return Step::Stop;
            }
        }
        Step::Continue
    }
}

/// Smallest achievable stability number, plus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinK {
    pub k: usize,
    /// The first matching in enumeration order attaining `k - 1` (in house
    /// allocation, among matchings not dominated by a move to a better object).
    pub witness: Matching,
}

fn search_subtree(
    t: &Table,
    first_choice: Option<Option<usize>>,
    v: &mut MinSearch<'_>,
    budget: &OracleBudget,
) -> Result<()> {
    let mut p = Partial::new(t);
    let mut w = Walker { nodes: 0, max_nodes: budget.max_nodes };
    if let Some(choice) = first_choice {
        apply(t, &mut p, 1, choice);
    }
    w.walk(t, &mut p, v)?;
    Ok(())
}

// Runs the search either whole or split by agent 1's choice across threads.
// Workers take branches in enumeration order and share the best result so
// far; ties go to the earlier branch, so the answer does not depend on the
// number of jobs. The node budget applies per branch.
fn search(inst: &Instance, bound: usize, first_only: bool, budget: &OracleBudget, jobs: usize) -> Result<Option<(usize, Matching)>> {
    budget.admit(inst)?;
    let t = Table::new(inst);
    if jobs <= 1 || t.n == 0 {
        let mut v = MinSearch { inst, bound, first_only, best: None, shared: None, branch: 0 };
        search_subtree(&t, None, &mut v, budget)?;
        return Ok(v.best);
    }
    let branches = options(&t, &Partial::new(&t), 1);
    let shared = AtomicU64::new(u64::MAX);
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Result<Option<(usize, Matching)>>>>> =
        branches.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..jobs.min(branches.len()) {
            scope.spawn(|| loop {
                let b = next.fetch_add(1, Ordering::Relaxed);
                if b >= branches.len() {
                    break;
                }
                let mut v = MinSearch { inst, bound, first_only, best: None, shared: Some(&shared), branch: b };
                let r = search_subtree(&t, Some(branches[b]), &mut v, budget).map(|()| v.best);
                *results[b].lock().expect("oracle result slot") = Some(r);
            });
        }
    });
    let mut best: Option<(usize, Matching)> = None;
    for slot in results {
        let r = slot.into_inner().expect("oracle result slot").expect("every branch ran");
        if let Some((s, m)) = r? {
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                if first_only {
                    return Ok(Some((s, m)));
                }
                best = Some((s, m));
            }
        }
    }
    Ok(best)
}

/// The smallest k for which a k-stable matching exists.
pub fn min_k(inst: &Instance, budget: &OracleBudget) -> Result<MinK> {
    min_k_parallel(inst, budget, 1)
}

pub fn min_k_parallel(inst: &Instance, budget: &OracleBudget, jobs: usize) -> Result<MinK> {
    // Every matching has stability number at most n, so n + 1 is never pruned away.
    let (s, witness) = search(inst, inst.n_agents() + 1, false, budget, jobs)?.expect("some matching exists");
    Ok(MinK { k: s + 1, witness })
}

/// A k-stable matching if one exists: the first one in enumeration order, with
/// dominated house allocation matchings skipped as in [`min_k`].
pub fn exists_k_stable(inst: &Instance, threshold: &Threshold, budget: &OracleBudget) -> Result<Option<Matching>> {
    exists_k_stable_parallel(inst, threshold, budget, 1)
}

pub fn exists_k_stable_parallel(
    inst: &Instance,
    threshold: &Threshold,
    budget: &OracleBudget,
    jobs: usize,
) -> Result<Option<Matching>> {
    let k = threshold.resolve(inst.n_agents())?;
    Ok(search(inst, k, true, budget, jobs)?.map(|(_, m)| m))
}

/// A matching with no blocking pair, if any (marriage and roommates only).
pub fn find_stable_matching(inst: &Instance, budget: &OracleBudget) -> Result<Option<Matching>> {
    if inst.model() == ModelKind::HouseAllocation {
        return Err(Error::WrongModel { expected: "SR or SM".into(), found: inst.model() });
    }
    budget.admit(inst)?;
    struct Stable<'a> {
        inst: &'a Instance,
        found: Option<Matching>,
    }
    // A pair of decided agents that blocks can never be repaired further down.
    fn decided_block(t: &Table, p: &Partial) -> bool {
        let decided = |i: usize| i < p.frontier || p.partner[i].is_some();
        (1..=t.n).filter(|&i| decided(i)).any(|i| {
            t.choices[i].iter().any(|&j| {
                j > i
                    && decided(j)
                    && p.partner[i] != Some(j)
                    && t.rank[i][j] < t.slot(i, p.partner[i])
                    && t.rank[j][i] < t.slot(j, p.partner[j])
            })
        })
    }
    impl Visitor for Stable<'_> {
        fn node(&mut self, t: &Table, p: &Partial) -> Step {
            if decided_block(t, p) {
                Step::Prune
            } else {
                Step::Continue
            }
        }
        fn leaf(&mut self, t: &Table, p: &Partial) -> Step {
            if decided_block(t, p) {
                return Step::Continue;
            }
            self.found = Some(p.to_matching(self.inst));
            Step::Stop
        }
    }
    let t = Table::new(inst);
    let mut v = Stable { inst, found: None };
    Walker { nodes: 0, max_nodes: budget.max_nodes }.walk(&t, &mut Partial::new(&t), &mut v)?;
    Ok(v.found)
}

//! Instances, preference lists with ties, matchings and stability thresholds.
//!
//! Agents are numbered `1..=n`. In the house allocation model the
//! alternatives are objects `1..=m` (rendered `o<j>`); in the marriage and
//! roommates models they are other agents. In the marriage model the first
//! `n_u` agents form side U and the remaining `n_w` agents form side W.
//!
//! A missing partner is `None` throughout. Being unmatched ranks strictly
//! below every acceptable alternative.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

const UNLISTED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// House allocation: agents on one side, objects without preferences.
    HouseAllocation,
    /// Marriage: two sides of agents.
    Marriage,
    /// Roommates: one set of agents.
    Roommates,
}

impl ModelKind {
    pub fn code(self) -> &'static str {
        match self {
            ModelKind::HouseAllocation => "HA",
            ModelKind::Marriage => "SM",
            ModelKind::Roommates => "SR",
        }
    }

    pub fn from_code(code: &str) -> Option<ModelKind> {
        match code {
            "HA" => Some(ModelKind::HouseAllocation),
            "SM" => Some(ModelKind::Marriage),
            "SR" => Some(ModelKind::Roommates),
            _ => None,
        }
    }

    /// True when partners are agents rather than objects.
    pub fn is_two_sided_agents(self) -> bool {
        self != ModelKind::HouseAllocation
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Ordered tie groups; earlier groups are strictly preferred.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PreferenceList {
    groups: Vec<Vec<usize>>,
}

impl PreferenceList {
    pub fn new(groups: Vec<Vec<usize>>) -> Self {
        PreferenceList { groups }
    }

    /// A strict list, one alternative per group.
    pub fn strict<I: IntoIterator<Item = usize>>(alts: I) -> Self {
        PreferenceList { groups: alts.into_iter().map(|a| vec![a]).collect() }
    }

    /// A single indifference class.
    pub fn single_tie<I: IntoIterator<Item = usize>>(alts: I) -> Self {
        let group: Vec<usize> = alts.into_iter().collect();
        if group.is_empty() {
            PreferenceList::default()
        } else {
            PreferenceList { groups: vec![group] }
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn is_empty(&self) -> bool {
        self.groups.iter().all(|g| g.is_empty())
    }

    /// Number of listed alternatives.
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Alternatives in list order, ties in stored order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().flatten().copied()
    }

    pub fn is_strict(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// Splits every tie group into singletons in ascending id order.
    pub fn break_ties(&self) -> PreferenceList {
        let mut groups = Vec::with_capacity(self.len());
        for g in &self.groups {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            groups.extend(sorted.into_iter().map(|a| vec![a]));
        }
        PreferenceList { groups }
    }
}

/// One broken instance invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoObjects,
    ObjectsOutsideHouseAllocation(usize),
    MissingSideSplit,
    SideSplitMismatch { n_agents: usize, n_u: usize, n_w: usize },
    PreferenceCount { expected: usize, found: usize },
    EmptyGroup { agent: usize },
    Duplicate { agent: usize, alternative: String },
    OutOfRange { agent: usize, alternative: String },
    SelfListed { agent: usize },
    SameSide { agent: usize, other: usize },
    NotMutual { agent: usize, other: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoObjects => write!(f, "house allocation instance has no objects"),
            Violation::ObjectsOutsideHouseAllocation(m) => {
                write!(f, "{m} objects declared outside the house allocation model")
            }
            Violation::MissingSideSplit => write!(f, "marriage instance without a side split"),
            Violation::SideSplitMismatch { n_agents, n_u, n_w } => {
                write!(f, "side split {n_u}+{n_w} does not add up to {n_agents} agents")
            }
            Violation::PreferenceCount { expected, found } => {
                write!(f, "expected {expected} preference lists, found {found}")
            }
            Violation::EmptyGroup { agent } => write!(f, "empty tie group for agent {agent}"),
            Violation::Duplicate { agent, alternative } => {
                write!(f, "duplicate alternative {alternative} for agent {agent}")
            }
            Violation::OutOfRange { agent, alternative } => {
                write!(f, "unknown alternative {alternative} for agent {agent}")
            }
            Violation::SelfListed { agent } => write!(f, "agent {agent} lists itself"),
            Violation::SameSide { agent, other } => {
                write!(f, "agent {agent} lists agent {other} from its own side")
            }
            Violation::NotMutual { agent, other } => {
                write!(f, "mutuality violation at ({agent},{other})")
            }
        }
    }
}

/// A preference profile in one of the three models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    model: ModelKind,
    n_agents: usize,
    side_split: Option<(usize, usize)>,
    n_objects: usize,
    prefs: Vec<PreferenceList>,
    // ranks[i][alt] = tie-group index, UNLISTED otherwise; alt is 1-based.
    ranks: Vec<Vec<u32>>,
}

impl Instance {
    /// Builds an instance without checking invariants. Use [`Instance::validate`]
    /// to list violations.
    pub fn from_parts_unchecked(
        model: ModelKind,
        n_agents: usize,
        side_split: Option<(usize, usize)>,
        n_objects: usize,
        prefs: Vec<PreferenceList>,
    ) -> Instance {
        let alt_count = match model {
            ModelKind::HouseAllocation => n_objects,
            _ => n_agents,
        };
        let ranks = prefs
            .iter()
            .map(|list| {
                let mut row = vec![UNLISTED; alt_count + 1];
                for (r, g) in list.groups.iter().enumerate() {
                    for &a in g {
                        if a >= 1 && a <= alt_count && row[a] == UNLISTED {
                            row[a] = r as u32;
                        }
                    }
                }
                row
            })
            .collect();
        Instance { model, n_agents, side_split, n_objects, prefs, ranks }
    }

    fn checked(inst: Instance) -> Result<Instance> {
        let violations = inst.validate();
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn house_allocation(n_objects: usize, prefs: Vec<PreferenceList>) -> Result<Instance> {
        let n = prefs.len();
        Self::checked(Self::from_parts_unchecked(ModelKind::HouseAllocation, n, None, n_objects, prefs))
    }

    pub fn marriage(n_u: usize, n_w: usize, prefs: Vec<PreferenceList>) -> Result<Instance> {
        Self::checked(Self::from_parts_unchecked(
            ModelKind::Marriage,
            n_u + n_w,
            Some((n_u, n_w)),
            0,
            prefs,
        ))
    }

    pub fn roommates(prefs: Vec<PreferenceList>) -> Result<Instance> {
        let n = prefs.len();
        Self::checked(Self::from_parts_unchecked(ModelKind::Roommates, n, None, 0, prefs))
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn side_split(&self) -> Option<(usize, usize)> {
        self.side_split
    }

    /// Number of distinct alternative ids (objects in HA, agents otherwise).
    pub fn alternative_count(&self) -> usize {
        match self.model {
            ModelKind::HouseAllocation => self.n_objects,
            _ => self.n_agents,
        }
    }

    pub fn agents(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n_agents
    }

    pub fn pref(&self, agent: usize) -> &PreferenceList {
        &self.prefs[agent - 1]
    }

    pub fn prefs(&self) -> &[PreferenceList] {
        &self.prefs
    }

    /// Renders an alternative id in the instance's namespace.
    pub fn alt_label(&self, alt: usize) -> String {
        match self.model {
            ModelKind::HouseAllocation => format!("o{alt}"),
            _ => alt.to_string(),
        }
    }

    /// True for agents of side U in the marriage model.
    pub fn on_u_side(&self, agent: usize) -> bool {
        match self.side_split {
            Some((n_u, _)) => agent <= n_u,
            None => true,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        match self.model {
            ModelKind::HouseAllocation => {
                if self.n_objects == 0 {
                    out.push(Violation::NoObjects);
                }
            }
            _ => {
                if self.n_objects != 0 {
                    out.push(Violation::ObjectsOutsideHouseAllocation(self.n_objects));
                }
            }
        }
        if self.model == ModelKind::Marriage {
            match self.side_split {
                None => out.push(Violation::MissingSideSplit),
                Some((n_u, n_w)) if n_u + n_w != self.n_agents => {
                    out.push(Violation::SideSplitMismatch { n_agents: self.n_agents, n_u, n_w })
                }
                _ => {}
            }
        }
        if self.prefs.len() != self.n_agents {
            out.push(Violation::PreferenceCount { expected: self.n_agents, found: self.prefs.len() });
            return out;
        }
        let alt_count = self.alternative_count();
        for (idx, list) in self.prefs.iter().enumerate() {
            let agent = idx + 1;
            let mut seen = vec![false; alt_count + 1];
            for g in &list.groups {
                if g.is_empty() {
                    out.push(Violation::EmptyGroup { agent });
                }
                for &a in g {
                    if a == 0 || a > alt_count {
                        out.push(Violation::OutOfRange { agent, alternative: self.alt_label(a) });
                        continue;
                    }
                    if seen[a] {
                        out.push(Violation::Duplicate { agent, alternative: self.alt_label(a) });
                        continue;
                    }
                    seen[a] = true;
                    if self.model.is_two_sided_agents() {
                        if a == agent {
                            out.push(Violation::SelfListed { agent });
                            continue;
                        }
                        if self.model == ModelKind::Marriage
                            && self.side_split.is_some()
                            && self.on_u_side(agent) == self.on_u_side(a)
                        {
                            out.push(Violation::SameSide { agent, other: a });
                            continue;
                        }
                        if !self.acceptable(a, agent) {
                            out.push(Violation::NotMutual { agent: agent.min(a), other: agent.max(a) });
                        }
                    }
                }
            }
        }
        out.dedup();
        out
    }

    /// Tie-group index of `alt` in the agent's list, `None` when unacceptable.
    pub fn rank(&self, agent: usize, alt: usize) -> Option<usize> {
        let row = self.ranks.get(agent.wrapping_sub(1))?;
        match row.get(alt) {
            Some(&r) if r != UNLISTED => Some(r as usize),
            _ => None,
        }
    }

    /// Rank of a matching slot; being unmatched ranks after every group.
    pub fn slot_rank(&self, agent: usize, slot: Option<usize>) -> Option<usize> {
        match slot {
            None => Some(self.prefs[agent - 1].groups.len()),
            Some(a) => self.rank(agent, a),
        }
    }

    pub fn acceptable(&self, agent: usize, alt: usize) -> bool {
        self.rank(agent, alt).is_some()
    }

    /// Strict preference of `agent` for slot `a` over slot `b`.
    pub fn prefers(&self, agent: usize, a: Option<usize>, b: Option<usize>) -> Result<bool> {
        if agent == 0 || agent > self.n_agents {
            return Err(Error::UnknownAgent(agent));
        }
        let ra = self.slot_rank(agent, a).ok_or_else(|| self.unacceptable(agent, a))?;
        let rb = self.slot_rank(agent, b).ok_or_else(|| self.unacceptable(agent, b))?;
        Ok(ra < rb)
    }

    fn unacceptable(&self, agent: usize, slot: Option<usize>) -> Error {
        Error::Unacceptable { agent, alternative: slot.map(|a| self.alt_label(a)).unwrap_or_default() }
    }

    /// Acceptability edges: `(agent, object)` in HA, `(i, j)` with `i < j` otherwise.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in self.agents() {
            for a in self.prefs[i - 1].iter() {
                if self.model == ModelKind::HouseAllocation || (i < a && self.acceptable(a, i)) {
                    out.push((i, a));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The same instance with every tie broken by ascending id.
    pub fn break_ties(&self) -> Instance {
        let prefs = self.prefs.iter().map(PreferenceList::break_ties).collect();
        Instance::from_parts_unchecked(self.model, self.n_agents, self.side_split, self.n_objects, prefs)
    }

    pub fn is_strict(&self) -> bool {
        self.prefs.iter().all(PreferenceList::is_strict)
    }

    /// Every alternative the agent could be matched to under complete lists.
    pub fn possible_alternatives(&self, agent: usize) -> Vec<usize> {
        match self.model {
            ModelKind::HouseAllocation => (1..=self.n_objects).collect(),
            ModelKind::Roommates => self.agents().filter(|&j| j != agent).collect(),
            ModelKind::Marriage => {
                let u = self.on_u_side(agent);
                self.agents().filter(|&j| self.on_u_side(j) != u).collect()
            }
        }
    }

    /// Checks that each list is one indifference class.
    pub fn check_single_tie(&self) -> Result<()> {
        for i in self.agents() {
            if self.prefs[i - 1].groups.len() > 1 {
                return Err(Error::RestrictionViolated {
                    agent: i,
                    restriction: "preference list is not a single tie".into(),
                });
            }
        }
        Ok(())
    }

    /// Checks complete lists split into at most two indifference classes.
    pub fn check_dichotomous_complete(&self) -> Result<()> {
        for i in self.agents() {
            let list = &self.prefs[i - 1];
            if list.groups.len() > 2 {
                return Err(Error::RestrictionViolated {
                    agent: i,
                    restriction: "more than two indifference classes".into(),
                });
            }
            if list.len() != self.possible_alternatives(i).len() {
                return Err(Error::RestrictionViolated {
                    agent: i,
                    restriction: "preference list is not complete".into(),
                });
            }
        }
        Ok(())
    }
}

/// A partial assignment of agents to objects or to each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: Vec<Option<usize>>,
    agent_partners: bool,
}

impl Matching {
    pub fn empty(inst: &Instance) -> Matching {
        Matching {
            partner: vec![None; inst.n_agents()],
            agent_partners: inst.model().is_two_sided_agents(),
        }
    }

    /// Builds a matching from `(agent, partner)` pairs and validates it.
    pub fn from_pairs(inst: &Instance, pairs: &[(usize, usize)]) -> Result<Matching> {
        let mut m = Matching::empty(inst);
        for &(i, j) in pairs {
            m.insert(inst, i, j)?;
        }
        m.validate(inst)?;
        Ok(m)
    }

    /// Adds one pair, rejecting conflicts with existing pairs.
    pub fn insert(&mut self, inst: &Instance, agent: usize, alt: usize) -> Result<()> {
        if agent == 0 || agent > self.partner.len() {
            return Err(Error::UnknownAgent(agent));
        }
        if self.partner[agent - 1].is_some() {
            return Err(Error::InvalidMatching(format!("agent {agent} matched twice")));
        }
        if self.agent_partners {
            if alt == 0 || alt > self.partner.len() {
                return Err(Error::UnknownAgent(alt));
            }
            if alt == agent {
                return Err(Error::InvalidMatching(format!("agent {agent} matched to itself")));
            }
            if self.partner[alt - 1].is_some() {
                return Err(Error::InvalidMatching(format!("agent {alt} matched twice")));
            }
            self.partner[alt - 1] = Some(agent);
        } else {
            if alt == 0 || alt > inst.n_objects() {
                return Err(Error::InvalidMatching(format!("unknown object o{alt}")));
            }
            if self.partner.contains(&Some(alt)) {
                return Err(Error::InvalidMatching(format!("object o{alt} assigned twice")));
            }
        }
        self.partner[agent - 1] = Some(alt);
        Ok(())
    }

    /// Drops the pair containing `agent`, if any.
    pub fn remove(&mut self, agent: usize) {
        if let Some(p) = self.partner[agent - 1].take() {
            if self.agent_partners {
                self.partner[p - 1] = None;
            }
        }
    }

    pub fn partner(&self, agent: usize) -> Option<usize> {
        self.partner[agent - 1]
    }

    pub fn n_agents(&self) -> usize {
        self.partner.len()
    }

    /// Number of matched pairs.
    pub fn len(&self) -> usize {
        self.pairs().len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.iter().all(Option::is_none)
    }

    /// Matched pairs, listed once: `(agent, object)` or `(i, j)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(idx, p)| {
                let i = idx + 1;
                match *p {
                    Some(j) if !self.agent_partners || i < j => Some((i, j)),
                    _ => None,
                }
            })
            .collect()
    }

    /// Checks the matching against the instance's acceptability graph.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.partner.len() != inst.n_agents() {
            return Err(Error::InvalidMatching(format!(
                "matching covers {} agents, instance has {}",
                self.partner.len(),
                inst.n_agents()
            )));
        }
        if self.agent_partners != inst.model().is_two_sided_agents() {
            return Err(Error::InvalidMatching("matching built for a different model".into()));
        }
        let mut used = vec![false; inst.alternative_count() + 1];
        for i in inst.agents() {
            let Some(j) = self.partner[i - 1] else { continue };
            if j == 0 || j > inst.alternative_count() {
                return Err(Error::InvalidMatching(format!("agent {i} matched to unknown {}", inst.alt_label(j))));
            }
            if !inst.acceptable(i, j) {
                return Err(Error::Unacceptable { agent: i, alternative: inst.alt_label(j) });
            }
            if self.agent_partners {
                if self.partner[j - 1] != Some(i) {
                    return Err(Error::InvalidMatching(format!("assignment of {i} and {j} is not symmetric")));
                }
            } else {
                if used[j] {
                    return Err(Error::InvalidMatching(format!("object o{j} assigned twice")));
                }
                used[j] = true;
            }
        }
        Ok(())
    }
}

/// Agents strictly preferring their slot in `alternative` to their slot in `current`.
pub fn improvers(inst: &Instance, current: &Matching, alternative: &Matching) -> Result<Vec<usize>> {
    current.validate(inst)?;
    alternative.validate(inst)?;
    Ok(inst
        .agents()
        .filter(|&i| {
            inst.slot_rank(i, alternative.partner(i)) < inst.slot_rank(i, current.partner(i))
        })
        .collect())
}

/// The coalition-size threshold of k-stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    /// An explicit integer k.
    Agents(usize),
    /// A fraction c of the agents, 0 < c < 1; resolves to ⌈c·n⌉.
    Fraction(Ratio<u64>),
    /// More than half of the agents: ⌊n/2⌋ + 1.
    Majority,
}

impl Threshold {
    /// Resolves to an integer k with `1 <= k <= n`.
    pub fn resolve(&self, n: usize) -> Result<usize> {
        let k = match *self {
            Threshold::Agents(k) => k,
            Threshold::Fraction(c) => {
                if *c.numer() == 0 || c >= Ratio::from_integer(1) {
                    return Err(Error::Parameter(format!("fraction {c} outside (0, 1)")));
                }
                ceil_fraction_of(c, n)
            }
            Threshold::Majority => majority(n),
        };
        if k < 1 || k > n {
            return Err(Error::Parameter(format!("threshold k = {k} outside 1..={n}")));
        }
        Ok(k)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Agents(k) => write!(f, "k={k}"),
            Threshold::Fraction(c) => write!(f, "c={c}"),
            Threshold::Majority => write!(f, "majority"),
        }
    }
}

/// ⌊n/2⌋ + 1.
pub fn majority(n: usize) -> usize {
    n / 2 + 1
}

/// ⌈c·n⌉ for a non-negative rational c.
pub fn ceil_fraction_of(c: Ratio<u64>, n: usize) -> usize {
    (c * Ratio::from_integer(n as u64)).ceil().to_integer() as usize
}

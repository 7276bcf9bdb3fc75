//! Stable partitions of roommates instances.
//!
//! A stable partition is a permutation π of the agents such that
//!
//! 1. if π(i) ≠ π⁻¹(i), both are acceptable to `i` and π(i) ≻_i π⁻¹(i);
//! 2. for every acceptable pair (i, j), if π(i) = i or j ≻_i π⁻¹(i), then
//!    π⁻¹(j) ≠ j and j weakly prefers π⁻¹(j) to i.
//!
//! Fixed points rank below every acceptable agent. The weak comparison in (2)
//! is what makes a cyclic triangle `(a b c)` a stable partition: there the
//! edge (a, b) has π⁻¹(b) = a.

use crate::error::{Error, Result};
use crate::model::{Instance, ModelKind};

/// A permutation of the agents `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePartition {
    // pi[i - 1] = π(i)
    pi: Vec<usize>,
}

impl StablePartition {
    /// Wraps a permutation given as `π(1), …, π(n)`.
    pub fn from_successors(pi: Vec<usize>) -> Result<StablePartition> {
        let n = pi.len();
        let mut seen = vec![false; n + 1];
        for &j in &pi {
            if j == 0 || j > n || seen[j] {
                return Err(Error::Parameter("successor list is not a permutation".into()));
            }
            seen[j] = true;
        }
        Ok(StablePartition { pi })
    }

    pub fn n_agents(&self) -> usize {
        self.pi.len()
    }

    pub fn successor(&self, i: usize) -> usize {
        self.pi[i - 1]
    }

    pub fn predecessor(&self, i: usize) -> usize {
        // π⁻¹ is only needed occasionally; a scan keeps the type a plain permutation.
        self.pi.iter().position(|&j| j == i).map(|p| p + 1).expect("permutation")
    }

    fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.pi.len()];
        for (idx, &j) in self.pi.iter().enumerate() {
            inv[j - 1] = idx + 1;
        }
        inv
    }

    /// Cycles of π, each starting at its smallest agent, in ascending order of that agent.
    /// Fixed points are cycles of length 1, transpositions of length 2.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.pi.len();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.pi[i - 1];
            }
            out.push(cycle);
        }
        out
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.cycles().into_iter().filter(|c| c.len() == 1).map(|c| c[0]).collect()
    }

    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        self.cycles().into_iter().filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect()
    }

    /// Cycles of odd length at least three.
    pub fn odd_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles().into_iter().filter(|c| c.len() >= 3 && c.len() % 2 == 1).collect()
    }
}

/// Checks both partition conditions; false also when the sizes disagree.
pub fn verify_stable_partition(inst: &Instance, p: &StablePartition) -> bool {
    let n = inst.n_agents();
    if p.n_agents() != n || inst.model() == ModelKind::HouseAllocation {
        return false;
    }
    let inv = p.inverse();
    // Slot of agent i under π⁻¹, with a fixed point ranking as unmatched.
    let back = |i: usize| -> Option<usize> { (inv[i - 1] != i).then_some(inv[i - 1]) };
    for i in 1..=n {
        let succ = p.pi[i - 1];
        let pred = inv[i - 1];
        if succ != i && !inst.acceptable(i, succ) {
            return false;
        }
        if succ != pred && !(inst.acceptable(i, pred) && inst.rank(i, succ) < inst.rank(i, pred)) {
            return false;
        }
    }
    for (i, j) in inst.edges() {
        for (a, b) in [(i, j), (j, i)] {
            let a_wants_b = inst.slot_rank(a, Some(b)) < inst.slot_rank(a, back(a));
            if a_wants_b {
                let held = match back(b) {
                    None => false,
                    Some(pb) => pb == a || inst.rank(b, pb) < inst.rank(b, a),
                };
                if !held {
                    return false;
                }
            }
        }
    }
    true
}

// Reduced preference table: lists in preference order with symmetric deletions.
struct Table {
    list: Vec<Vec<usize>>,
    rank: Vec<Vec<usize>>,
    present: Vec<Vec<bool>>,
    head: Vec<usize>,
    tail: Vec<usize>,
    size: Vec<usize>,
}

impl Table {
    fn new(inst: &Instance) -> Table {
        let n = inst.n_agents();
        let mut list = vec![Vec::new(); n];
        let mut rank = vec![vec![usize::MAX; n]; n];
        let mut present = vec![vec![false; n]; n];
        for i in 0..n {
            for (r, j) in inst.pref(i + 1).iter().enumerate() {
                if inst.acceptable(j, i + 1) {
                    let j = j - 1;
                    rank[i][j] = list[i].len();
                    let _ = r;
                    list[i].push(j);
                    present[i][j] = true;
                }
            }
        }
        let size = list.iter().map(Vec::len).collect();
        let tail = list.iter().map(|l| l.len()).collect();
        Table { list, rank, present, head: vec![0; n], tail, size }
    }

    fn first(&mut self, i: usize) -> Option<usize> {
        while self.head[i] < self.tail[i] && !self.present[i][self.list[i][self.head[i]]] {
            self.head[i] += 1;
        }
        (self.head[i] < self.tail[i]).then(|| self.list[i][self.head[i]])
    }

    fn last(&mut self, i: usize) -> Option<usize> {
        while self.tail[i] > self.head[i] && !self.present[i][self.list[i][self.tail[i] - 1]] {
            self.tail[i] -= 1;
        }
        (self.tail[i] > self.head[i]).then(|| self.list[i][self.tail[i] - 1])
    }

    fn second(&mut self, i: usize) -> Option<usize> {
        self.first(i)?;
        (self.head[i] + 1..self.tail[i]).map(|p| self.list[i][p]).find(|&j| self.present[i][j])
    }

    fn delete(&mut self, a: usize, b: usize) {
        if self.present[a][b] {
            self.present[a][b] = false;
            self.present[b][a] = false;
            self.size[a] -= 1;
            self.size[b] -= 1;
        }
    }

    /// Deletes every entry of `y`'s list after `x`; returns the deleted agents.
    fn truncate_after(&mut self, y: usize, x: usize) -> Vec<usize> {
        let from = self.rank[y][x] + 1;
        let mut out = Vec::new();
        for p in from..self.tail[y] {
            let z = self.list[y][p];
            if self.present[y][z] {
                out.push(z);
            }
        }
        for &z in &out {
            self.delete(y, z);
        }
        out
    }
}

/// Computes a stable partition after breaking ties by ascending agent id.
///
/// Runs the proposal phase of the roommates algorithm, then repeatedly
/// eliminates rotations exposed at agents with three or more entries left.
/// Agents whose lists run empty become fixed points; the remaining lists of
/// length one or two define π(i) = first(i) and π⁻¹(i) = last(i).
pub fn tan_stable_partition(inst: &Instance) -> Result<StablePartition> {
    if inst.model() == ModelKind::HouseAllocation {
        return Err(Error::WrongModel { expected: "SR or SM".into(), found: inst.model() });
    }
    let strict = inst.break_ties();
    let n = strict.n_agents();
    let mut t = Table::new(&strict);

    // Proposal phase.
    let mut proposed: Vec<Option<usize>> = vec![None; n];
    let mut holder: Vec<Option<usize>> = vec![None; n];
    let mut free: Vec<usize> = (0..n).rev().collect();
    while let Some(x) = free.pop() {
        if proposed[x].is_some() {
            continue;
        }
        let Some(y) = t.first(x) else { continue };
        proposed[x] = Some(y);
        if let Some(h) = holder[y] {
            proposed[h] = None;
            free.push(h);
        }
        holder[y] = Some(x);
        for z in t.truncate_after(y, x) {
            if proposed[z] == Some(y) {
                proposed[z] = None;
                holder[y] = Some(x);
                free.push(z);
            }
            if proposed[y] == Some(z) {
                proposed[y] = None;
                holder[z] = None;
                free.push(y);
            }
        }
    }

    // Rotation elimination.
    while let Some(p0) = (0..n).find(|&i| t.size[i] >= 3) {
        let mut seq = vec![p0];
        let mut pos = vec![usize::MAX; n];
        pos[p0] = 0;
        let start = loop {
            let x = *seq.last().unwrap();
            let q = t.second(x).expect("traced agent has a second entry");
            let next = t.last(q).expect("second entry has a last entry");
            if pos[next] != usize::MAX {
                break pos[next];
            }
            pos[next] = seq.len();
            seq.push(next);
        };
        let xs = seq[start..].to_vec();
        let ys: Vec<usize> = xs.iter().map(|&x| t.second(x).unwrap()).collect();
        for (idx, &x) in xs.iter().enumerate() {
            t.truncate_after(ys[idx], x);
        }
    }

    let mut pi = vec![0; n];
    for i in 0..n {
        pi[i] = match t.first(i) {
            Some(j) => j + 1,
            None => i + 1,
        };
    }
    let partition = StablePartition::from_successors(pi)
        .map_err(|_| Error::Parameter("reduced table does not define a permutation".into()))?;
    debug_assert!(verify_stable_partition(&strict, &partition));
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PreferenceList;

    fn sr(lists: &[&[usize]]) -> Instance {
        Instance::roommates(lists.iter().map(|l| PreferenceList::strict(l.iter().copied())).collect()).unwrap()
    }

    #[test]
    fn cyclic_triangle() {
        let inst = sr(&[&[2, 3], &[3, 1], &[1, 2]]);
        let p = tan_stable_partition(&inst).unwrap();
        assert_eq!(p.cycles(), vec![vec![1, 2, 3]]);
        assert!(verify_stable_partition(&inst, &p));
        let reversed = StablePartition::from_successors(vec![3, 1, 2]).unwrap();
        assert!(!verify_stable_partition(&inst, &reversed));
    }

    #[test]
    fn mutual_first_pair() {
        let inst = sr(&[&[2], &[1]]);
        let p = tan_stable_partition(&inst).unwrap();
        assert_eq!(p.transpositions(), vec![(1, 2)]);
        assert!(verify_stable_partition(&inst, &p));
    }

    #[test]
    fn isolated_agent() {
        let inst = sr(&[&[]]);
        let p = tan_stable_partition(&inst).unwrap();
        assert_eq!(p.fixed_points(), vec![1]);
        assert!(verify_stable_partition(&inst, &p));
    }
}

//! Graph matching solvers: maximum-cardinality bipartite (Hopcroft–Karp),
//! maximum-cardinality general (Edmonds' blossom) and maximum-weight general
//! (primal–dual blossom).
//!
//! Edge weights are generic over [`Weight`], so the same engines run on
//! machine integers, exact rationals or floats.

use std::collections::HashMap;
use std::fmt::Debug;

use num_traits::Num;

use crate::error::{Error, Result};

mod bipartite;
mod general;
mod weighted;

pub use bipartite::max_cardinality_bipartite;
pub use general::max_cardinality_general;
pub use weighted::max_weight_general;

/// Scalar usable as an edge weight.
pub trait Weight: Num + Copy + PartialOrd + Debug + Send + Sync {}

impl<T: Num + Copy + PartialOrd + Debug + Send + Sync> Weight for T {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<W> {
    pub u: usize,
    pub v: usize,
    pub weight: W,
}

/// Simple undirected graph on vertices `0..n`, optionally bipartitioned.
#[derive(Clone, Debug)]
pub struct Graph<W = i64> {
    n: usize,
    edges: Vec<Edge<W>>,
    index: HashMap<(usize, usize), usize>,
    side: Option<Vec<bool>>,
}

impl<W: Weight> Graph<W> {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), index: HashMap::new(), side: None }
    }

    /// A graph whose vertices `0..left` form one side and `left..left+right` the other.
    pub fn bipartite(left: usize, right: usize) -> Self {
        let mut g = Graph::new(left + right);
        g.side = Some((0..left + right).map(|v| v >= left).collect());
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn side(&self) -> Option<&[bool]> {
        self.side.as_deref()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        self.add_weighted_edge(u, v, W::one())
    }

    pub fn add_weighted_edge(&mut self, u: usize, v: usize, weight: W) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::Graph(format!("edge ({u},{v}) outside 0..{}", self.n)));
        }
        if u == v {
            return Err(Error::Graph(format!("self-loop at {u}")));
        }
        if weight < W::zero() {
            return Err(Error::Graph(format!("negative weight on ({u},{v})")));
        }
        if let Some(side) = &self.side {
            if side[u] == side[v] {
                return Err(Error::Graph(format!("edge ({u},{v}) inside one side of the bipartition")));
            }
        }
        let key = (u.min(v), u.max(v));
        if self.index.contains_key(&key) {
            return Err(Error::Graph(format!("parallel edge ({u},{v})")));
        }
        self.index.insert(key, self.edges.len());
        self.edges.push(Edge { u, v, weight });
        Ok(self.edges.len() - 1)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge<W>> {
        self.index.get(&(u.min(v), u.max(v))).map(|&k| &self.edges[k])
    }

    /// Adjacency lists in edge-insertion order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// A proper two-colouring, taken from the stored bipartition when present.
    pub fn two_colouring(&self) -> Option<Vec<bool>> {
        if let Some(side) = &self.side {
            return Some(side.clone());
        }
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.unwrap_or(false)).collect())
    }
}

/// A matching on a [`Graph`], as a mate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMatching {
    mate: Vec<Option<usize>>,
}

impl GraphMatching {
    pub fn empty(n: usize) -> Self {
        GraphMatching { mate: vec![None; n] }
    }

    pub(crate) fn from_mates(mate: Vec<Option<usize>>) -> Self {
        GraphMatching { mate }
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    pub fn mates(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    /// Matched pairs `(u, v)` with `u < v`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub fn weight<W: Weight>(&self, g: &Graph<W>) -> W {
        self.pairs()
            .into_iter()
            .filter_map(|(u, v)| g.edge_between(u, v).map(|e| e.weight))
            .fold(W::zero(), |acc, w| acc + w)
    }

    /// True when every pair is a graph edge and the mate table is symmetric.
    pub fn is_valid_for<W: Weight>(&self, g: &Graph<W>) -> bool {
        self.mate.len() == g.vertex_count()
            && self.mate.iter().enumerate().all(|(u, m)| match *m {
                None => true,
                Some(v) => v < self.mate.len() && self.mate[v] == Some(u) && g.edge_between(u, v).is_some(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_rejects_bad_edges() {
        let mut g: Graph = Graph::new(3);
        assert!(g.add_edge(0, 0).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
        assert!(g.add_weighted_edge(1, 2, -1).is_err());
        let mut b: Graph = Graph::bipartite(2, 2);
        assert!(b.add_edge(0, 1).is_err());
        b.add_edge(0, 2).unwrap();
    }

    #[test]
    fn two_colouring_detects_odd_cycle() {
        let mut g: Graph = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        assert!(g.two_colouring().is_some());
        g.add_edge(2, 0).unwrap();
        assert!(g.two_colouring().is_none());
    }
}

use std::collections::VecDeque;

use super::{Graph, GraphMatching, Weight};
use crate::error::{Error, Result};

const INF: usize = usize::MAX;

/// Hopcroft–Karp maximum-cardinality matching, O(√n·m).
///
/// Uses the graph's bipartition when present, otherwise a computed
/// two-colouring; fails on graphs with an odd cycle.
pub fn max_cardinality_bipartite<W: Weight>(g: &Graph<W>) -> Result<GraphMatching> {
    let colour = g.two_colouring().ok_or_else(|| Error::Graph("graph is not bipartite".into()))?;
    let n = g.vertex_count();
    let left: Vec<usize> = (0..n).filter(|&v| !colour[v]).collect();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        let (l, r) = if colour[e.u] { (e.v, e.u) } else { (e.u, e.v) };
        adj[l].push(r);
    }

    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut dist = vec![INF; n];
    loop {
        // Layer the free left vertices outward along alternating paths.
        let mut queue = VecDeque::new();
        for &u in &left {
            if mate[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &r in &adj[u] {
                match mate[r] {
                    None => found = true,
                    Some(u2) if dist[u2] == INF => {
                        dist[u2] = dist[u] + 1;
                        queue.push_back(u2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n];
        for &u in &left {
            if mate[u].is_none() {
                augment_from(u, &adj, &mut mate, &mut dist, &mut next);
            }
        }
    }
    Ok(GraphMatching::from_mates(mate))
}

// Iterative layered DFS; flips the path when a free right vertex is reached.
fn augment_from(
    root: usize,
    adj: &[Vec<usize>],
    mate: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    let mut stack: Vec<(usize, usize)> = vec![(root, INF)];
    while let Some(&(u, _)) = stack.last() {
        if next[u] == adj[u].len() {
            dist[u] = INF;
            stack.pop();
            continue;
        }
        let r = adj[u][next[u]];
        next[u] += 1;
        match mate[r] {
            None => {
                stack.last_mut().unwrap().1 = r;
                for &(l, r) in &stack {
                    mate[l] = Some(r);
                    mate[r] = Some(l);
                }
                return true;
            }
            Some(u2) if dist[u2] != INF && dist[u2] == dist[u] + 1 => {
                stack.last_mut().unwrap().1 = r;
                stack.push((u2, INF));
            }
            _ => {}
        }
    }
    false
}

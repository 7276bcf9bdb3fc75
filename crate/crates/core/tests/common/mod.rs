// Helpers shared by the integration tests: small graphs up to isomorphism and
// brute-force matching numbers to compare the engines against, and a
// strategy for random instances.
#![allow(dead_code)]

use std::collections::HashSet;

use matchstab::generators::{gen_random, RandomSpec};
use matchstab::{Instance, ModelKind};
use proptest::prelude::*;

/// Adjacency as bit rows: bit v of `rows[u]` is set when uv is an edge.
pub type Rows = Vec<u16>;

fn refine(rows: &Rows, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    // Split cells by neighbour counts into each cell until nothing changes.
    loop {
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut changed = false;
        for cell in &cells {
            let key = |v: usize| -> Vec<u32> { cells.iter().map(|c| c.iter().filter(|&&w| rows[v] >> w & 1 == 1).count() as u32).collect() };
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (key(v), v)).collect();
            keyed.sort();
            let start = next.len();
            for (i, (k, v)) in keyed.iter().enumerate() {
                if i > 0 && keyed[i - 1].0 == *k {
                    next.last_mut().unwrap().push(*v);
                } else {
                    next.push(vec![*v]);
                }
            }
            changed |= next.len() - start > 1;
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn relabelled(rows: &Rows, order: &[usize]) -> u64 {
    // Upper triangle of the relabelled adjacency matrix, read row by row.
    let mut code = 0u64;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            code = code << 1 | (rows[order[a]] >> order[b] & 1) as u64;
        }
    }
    code
}

fn search(rows: &Rows, cells: Vec<Vec<usize>>, best: &mut u64) {
    let cells = refine(rows, cells);
    let Some(pos) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        *best = (*best).max(relabelled(rows, &order));
        return;
    };
    for &v in &cells[pos] {
        let mut split = cells.clone();
        let rest: Vec<usize> = split[pos].iter().copied().filter(|&w| w != v).collect();
        split[pos] = vec![v];
        split.insert(pos + 1, rest);
        search(rows, split, best);
    }
}

/// Canonical code: the largest adjacency code over all labellings that come
/// out of colour refinement plus individualisation.
pub fn canonical(rows: &Rows) -> u64 {
    let mut best = 0;
    search(rows, vec![(0..rows.len()).collect()], &mut best);
    best
}

/// One representative of every connected graph on `n` vertices, up to isomorphism.
/// Grows each class on n − 1 vertices by a vertex with a non-empty neighbourhood;
/// every connected graph has a vertex whose removal keeps it connected.
pub fn connected_graphs(n: usize) -> Vec<Rows> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in connected_graphs(n - 1) {
        for nbrs in 1u16..1 << (n - 1) {
            let mut rows = g.clone();
            rows.push(nbrs);
            for (u, row) in rows.iter_mut().enumerate().take(n - 1) {
                *row |= (nbrs >> u & 1) << (n - 1);
            }
            if seen.insert(canonical(&rows)) {
                out.push(rows);
            }
        }
    }
    out
}

pub fn edges(rows: &Rows) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..rows.len() {
        for v in u + 1..rows.len() {
            if rows[u] >> v & 1 == 1 {
                out.push((u, v));
            }
        }
    }
    out
}

/// Largest total weight of a matching, by dynamic programming over vertex subsets.
pub fn brute_max_weight(n: usize, weighted: &[(usize, usize, i64)]) -> i64 {
    let mut w = vec![vec![None; n]; n];
    for &(u, v, x) in weighted {
        w[u][v] = Some(x);
        w[v][u] = Some(x);
    }
    let mut best = vec![0i64; 1 << n];
    for mask in 1usize..1 << n {
        let u = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << u);
        let mut b = best[rest];
        for v in 0..n {
            if rest >> v & 1 == 1 {
                if let Some(x) = w[u][v] {
                    b = b.max(x + best[rest & !(1 << v)]);
                }
            }
        }
        best[mask] = b;
    }
    best[(1 << n) - 1]
}

pub fn brute_max_cardinality(n: usize, edges: &[(usize, usize)]) -> i64 {
    let unit: Vec<(usize, usize, i64)> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
    brute_max_weight(n, &unit)
}

/// Seeded random instances of any model; `max_n` bounds each side.
pub fn instance_strategy(max_n: usize) -> impl Strategy<Value = Instance> {
    let models = prop_oneof![Just(ModelKind::HouseAllocation), Just(ModelKind::Marriage), Just(ModelKind::Roommates)];
    (models, 1..=max_n, 1..=max_n, any::<u64>(), 0usize..4, 0usize..=max_n, any::<bool>()).prop_map(
        |(model, n, m, seed, ties, max_len, complete)| {
            let mut spec = RandomSpec::new(model, n, m, seed);
            spec.tie_density = [0.0, 0.2, 0.5, 1.0][ties];
            spec.max_len = max_len;
            spec.complete = complete && seed % 4 == 0;
            gen_random(&spec).expect("random instance")
        },
    )
}

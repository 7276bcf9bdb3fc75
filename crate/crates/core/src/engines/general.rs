use std::collections::VecDeque;

use super::{Graph, GraphMatching, Weight};

/// Edmonds' blossom algorithm for maximum-cardinality matching, O(V³).
///
/// Edge weights are ignored.
pub fn max_cardinality_general<W: Weight>(g: &Graph<W>) -> GraphMatching {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut s = Search::new(n);
    // Greedy warm start roughly halves the number of phases.
    for u in 0..n {
        if s.mate[u].is_none() {
            if let Some(&v) = adj[u].iter().find(|&&v| s.mate[v].is_none()) {
                s.mate[u] = Some(v);
                s.mate[v] = Some(u);
            }
        }
    }
    for root in 0..n {
        if s.mate[root].is_none() {
            if let Some(end) = s.find_path(root, &adj) {
                s.augment(end);
            }
        }
    }
    GraphMatching::from_mates(s.mate)
}

struct Search {
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            mate: vec![None; n],
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                Some(m) => a = self.parent[m].expect("alternating tree parent"),
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b].expect("matched tree vertex")].expect("alternating tree parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("matched blossom vertex");
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("alternating tree parent");
        }
    }

    fn find_path(&mut self, root: usize, adj: &[Vec<usize>]) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer = to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        loop {
            let pv = self.parent[v].expect("augmenting path parent");
            let ppv = self.mate[pv];
            self.mate[v] = Some(pv);
            self.mate[pv] = Some(v);
            match ppv {
                Some(next) => v = next,
                None => break,
            }
        }
    }
}

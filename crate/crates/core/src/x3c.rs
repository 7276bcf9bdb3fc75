//! Exact cover by 3-sets with every element in exactly three triples.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3cInstance {
    nhat: usize,
    triples: Vec<[usize; 3]>,
}

impl X3cInstance {
    /// Validates `3·nhat` triples over `1..=3·nhat`, each element in exactly three of them.
    pub fn new(nhat: usize, triples: Vec<[usize; 3]>) -> Result<X3cInstance> {
        if nhat == 0 {
            return Err(Error::InvalidX3c("n̂ must be positive".into()));
        }
        let q = 3 * nhat;
        if triples.len() != q {
            return Err(Error::InvalidX3c(format!("expected {q} triples, found {}", triples.len())));
        }
        let mut count = vec![0usize; q + 1];
        for (j, t) in triples.iter().enumerate() {
            for (a, &x) in t.iter().enumerate() {
                if x == 0 || x > q {
                    return Err(Error::InvalidX3c(format!("triple {} has element {x} outside 1..={q}", j + 1)));
                }
                if t[..a].contains(&x) {
                    return Err(Error::InvalidX3c(format!("triple {} repeats element {x}", j + 1)));
                }
                count[x] += 1;
            }
        }
        if let Some(x) = (1..=q).find(|&x| count[x] != 3) {
            return Err(Error::InvalidX3c(format!("element {x} occurs in {} triples, expected 3", count[x])));
        }
        Ok(X3cInstance { nhat, triples })
    }

    pub fn nhat(&self) -> usize {
        self.nhat
    }

    pub fn ground_size(&self) -> usize {
        3 * self.nhat
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// The `(set, position)` occurrences of element `x` in input order; positions are 1-based.
    pub fn occurrences(&self, x: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(3);
        for (j, t) in self.triples.iter().enumerate() {
            if let Some(l) = t.iter().position(|&y| y == x) {
                out.push((j + 1, l + 1));
            }
        }
        out
    }

    /// Checks that `cover` (1-based set ids) picks `nhat` pairwise disjoint triples.
    pub fn check_cover(&self, cover: &[usize]) -> Result<()> {
        if cover.len() != self.nhat {
            return Err(Error::InvalidCover(format!("{} sets given, {} needed", cover.len(), self.nhat)));
        }
        let mut seen = vec![false; self.ground_size() + 1];
        for &j in cover {
            if j == 0 || j > self.triples.len() {
                return Err(Error::InvalidCover(format!("unknown set {j}")));
            }
            for &x in &self.triples[j - 1] {
                if seen[x] {
                    return Err(Error::InvalidCover(format!("element {x} covered twice")));
                }
                seen[x] = true;
            }
        }
        Ok(())
    }

    /// The lexicographically first exact cover, by backtracking on the smallest uncovered element.
    pub fn find_cover(&self) -> Option<Vec<usize>> {
        let mut covered = vec![false; self.ground_size() + 1];
        let mut chosen = Vec::new();
        if self.search(&mut covered, &mut chosen) {
            chosen.sort_unstable();
            Some(chosen)
        } else {
            None
        }
    }

    fn search(&self, covered: &mut Vec<bool>, chosen: &mut Vec<usize>) -> bool {
        let Some(x) = (1..=self.ground_size()).find(|&x| !covered[x]) else { return true };
        for (j, t) in self.triples.iter().enumerate() {
            if t.contains(&x) && t.iter().all(|&y| !covered[y]) {
                t.iter().for_each(|&y| covered[y] = true);
                chosen.push(j + 1);
                if self.search(covered, chosen) {
                    return true;
                }
                chosen.pop();
                t.iter().for_each(|&y| covered[y] = false);
            }
        }
        false
    }
}

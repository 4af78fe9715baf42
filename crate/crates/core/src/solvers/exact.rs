//! Exact maximum clique by Bron–Kerbosch with pivoting over 64-bit vertex
//! masks. Intended for desk-scale verification, so graphs are capped at 64
//! vertices.

use crate::graph::{Graph, VertexSet};

use super::SolverError;

pub const EXACT_ORACLE_LIMIT: usize = 64;

struct Search<'a> {
    adj: &'a [u64],
    best: Vec<usize>,
}

fn members(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

impl Search<'_> {
    fn offer(&mut self, r: u64) {
        let size = r.count_ones() as usize;
        if size < self.best.len() {
            return;
        }
        let cand = members(r);
        if size > self.best.len() || cand < self.best {
            self.best = cand;
        }
    }

    fn expand(&mut self, r: u64, mut p: u64, mut x: u64) {
        if p == 0 {
            if x == 0 {
                self.offer(r);
            }
            return;
        }
        // ties at the current best size are still explored so the
        // lexicographically smallest maximum clique wins
        if (r.count_ones() + p.count_ones()) < self.best.len() as u32 {
            return;
        }
        let pivot = members(p | x)
            .into_iter()
            .max_by_key(|&u| ((p & self.adj[u]).count_ones(), std::cmp::Reverse(u)))
            .expect("p is non-empty");
        for v in members(p & !self.adj[pivot]) {
            let bit = 1u64 << v;
            self.expand(r | bit, p & self.adj[v], x & self.adj[v]);
            p &= !bit;
            x |= bit;
        }
    }
}

/// A maximum clique of `g`; among all maximum cliques the one whose sorted
/// member list is lexicographically smallest.
pub fn exact_max_clique(g: &Graph) -> Result<VertexSet, SolverError> {
    let n = g.vertex_count();
    if n > EXACT_ORACLE_LIMIT {
        return Err(SolverError::OracleSizeLimit {
            vertices: n,
            limit: EXACT_ORACLE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(VertexSet::new());
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1u64 << u)))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search {
        adj: &adj,
        best: Vec::new(),
    };
    search.expand(0, all, 0);
    Ok(search.best.into_iter().collect())
}

/// A maximum independent set: the maximum clique of the complement.
pub fn exact_max_independent_set(g: &Graph) -> Result<VertexSet, SolverError> {
    exact_max_clique(&g.complement())
}

pub fn clique_number(g: &Graph) -> Result<usize, SolverError> {
    exact_max_clique(g).map(|c| c.len())
}

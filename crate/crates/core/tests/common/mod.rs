//! Independent oracles shared by the integration tests. Everything here is
//! written from first principles, without calling into the library's own
//! algorithms beyond basic graph construction.

#![allow(dead_code)]

use cliquelab::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

// ---------------------------------------------------------------- graphs

/// Erdős–Rényi graph on `n` vertices with edge probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Corpus of `count` graphs with `lo..=hi` vertices and varied densities.
pub fn graph_corpus(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(lo..=hi);
            let p = rng.random_range(0.05..0.95);
            random_graph(n, p, rng.random())
        })
        .collect()
}

pub fn adjacency_masks(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect()
}

/// Every maximum independent set, as bitmasks, by full subset enumeration.
pub fn brute_force_max_independent_sets(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    assert!(n <= 20);
    let adj = adjacency_masks(g);
    let mut best = 0;
    let mut sets = Vec::new();
    for mask in 0u64..(1 << n) {
        let independent = (0..n).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0);
        if !independent {
            continue;
        }
        let size = mask.count_ones();
        if size > best {
            best = size;
            sets.clear();
        }
        if size == best {
            sets.push(mask);
        }
    }
    sets
}

/// Largest clique size by full subset enumeration.
pub fn brute_force_clique_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 24);
    let adj = adjacency_masks(g);
    let mut best = 0;
    // grow cliques depth-first; each clique is visited once via increasing labels
    fn grow(adj: &[u64], size: usize, cand: u64, best: &mut usize) {
        *best = (*best).max(size);
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            grow(adj, size + 1, c & adj[v], best);
        }
    }
    grow(
        &adj,
        0,
        if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        &mut best,
    );
    best
}

pub fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

// ------------------------------------------------------------- statistics

fn naive_rank(pooled: &[f64], x: f64) -> f64 {
    let below = pooled.iter().filter(|&&y| y < x).count() as f64;
    let equal = pooled.iter().filter(|&&y| y == x).count() as f64;
    below + (equal + 1.0) / 2.0
}

fn naive_mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn naive_var(v: &[f64]) -> f64 {
    let m = naive_mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// `(F, p)` from the textbook grand-mean decomposition.
pub fn oracle_anova(groups: &[Vec<f64>]) -> (f64, f64) {
    let all: Vec<f64> = groups.concat();
    let grand = naive_mean(&all);
    let k = groups.len() as f64;
    let n = all.len() as f64;
    let ssb: f64 = groups
        .iter()
        .map(|g| g.len() as f64 * (naive_mean(g) - grand).powi(2))
        .sum();
    let ssw: f64 = groups
        .iter()
        .map(|g| {
            let m = naive_mean(g);
            g.iter().map(|x| (x - m).powi(2)).sum::<f64>()
        })
        .sum();
    let f = (ssb / (k - 1.0)) / (ssw / (n - k));
    let p = FisherSnedecor::new(k - 1.0, n - k).unwrap().sf(f);
    (f, p)
}

/// `(H, p)` via the rank-sum form of the statistic.
pub fn oracle_kruskal(groups: &[Vec<f64>]) -> (f64, f64) {
    let all: Vec<f64> = groups.concat();
    let n = all.len() as f64;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = g.iter().map(|&x| naive_rank(&all, x)).sum();
        sum += r * r / g.len() as f64;
    }
    let mut ties = 0.0;
    let mut seen: Vec<f64> = Vec::new();
    for &x in &all {
        if !seen.contains(&x) {
            seen.push(x);
            let t = all.iter().filter(|&&y| y == x).count() as f64;
            ties += t * t * t - t;
        }
    }
    let h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / (1.0 - ties / (n * n * n - n));
    let p = ChiSquared::new(groups.len() as f64 - 1.0).unwrap().sf(h);
    (h, p)
}

/// `(U, p)`: `U` by pair counting; `p` exact by enumerating every split of
/// the pooled ranks when `exact`, otherwise the normal approximation with
/// tie and continuity corrections.
pub fn oracle_mann_whitney(a: &[f64], b: &[f64], exact: bool) -> (f64, f64) {
    let mut ua: f64 = 0.0;
    for &x in a {
        for &y in b {
            ua += if x > y {
                1.0
            } else if x == y {
                0.5
            } else {
                0.0
            };
        }
    }
    let (na, nb) = (a.len(), b.len());
    let nab = (na * nb) as f64;
    let u = ua.min(nab - ua);
    if exact {
        let n = na + nb;
        assert!(n <= 20);
        let mut total = 0u64;
        let mut at_most = 0u64;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != na {
                continue;
            }
            total += 1;
            // U of the chosen positions: count of (chosen, unchosen) pairs with chosen above
            let mut uu = 0usize;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    uu += (0..i).filter(|&j| mask & (1 << j) == 0).count();
                }
            }
            if uu as f64 <= u {
                at_most += 1;
            }
        }
        return (u, (2.0 * at_most as f64 / total as f64).min(1.0));
    }
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = all.len() as f64;
    let mut ties = 0.0;
    let mut seen: Vec<f64> = Vec::new();
    for &x in &all {
        if !seen.contains(&x) {
            seen.push(x);
            let t = all.iter().filter(|&&y| y == x).count() as f64;
            ties += t * t * t - t;
        }
    }
    let sigma = (nab / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)))).sqrt();
    if sigma == 0.0 {
        return (u, 1.0);
    }
    let z = ((u - nab / 2.0).abs() - 0.5).max(0.0) / sigma;
    let p = (2.0 * Normal::new(0.0, 1.0).unwrap().sf(z)).min(1.0);
    (u, p)
}

/// `(C, p)`: largest variance over the sum, Bonferroni-bounded Beta tail.
pub fn oracle_cochran(groups: &[Vec<f64>]) -> (f64, f64) {
    let vars: Vec<f64> = groups.iter().map(|g| naive_var(g)).collect();
    let c = vars.iter().cloned().fold(f64::MIN, f64::max) / vars.iter().sum::<f64>();
    let k = groups.len() as f64;
    let nu = groups[0].len() as f64 - 1.0;
    let p = (k * Beta::new(nu / 2.0, (k - 1.0) * nu / 2.0).unwrap().sf(c)).min(1.0);
    (c, p)
}

/// `|a - b| <= tol`, relative once magnitudes exceed 1.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * b.abs().max(1.0)
}

// -------------------------------------------------------------- fixtures

#[derive(Debug, Deserialize)]
pub struct ReferenceDataset {
    pub groups: Vec<Vec<f64>>,
    pub anova_f: f64,
    pub anova_p: f64,
    pub kruskal_h: f64,
    pub kruskal_p: f64,
    pub mw_u: f64,
    pub mw_p: f64,
    pub mw_method: String,
    pub cochran_c: f64,
    pub cochran_p: f64,
}

#[derive(Debug, Deserialize)]
pub struct ShapiroReference {
    pub values: Vec<f64>,
    pub w: f64,
    pub p: f64,
}

#[derive(Debug, Deserialize)]
pub struct StatsReference {
    pub datasets: Vec<ReferenceDataset>,
    pub shapiro: Vec<ShapiroReference>,
}

pub fn stats_reference() -> StatsReference {
    serde_json::from_str(include_str!("../fixtures/stats_reference.json")).unwrap()
}

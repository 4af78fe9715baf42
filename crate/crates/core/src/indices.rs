//! Connectivity indices: degree, eccentricity, centralization, closeness and
//! betweenness statistics.
//!
//! Disconnected graphs are handled per connected component: eccentricity,
//! closeness and betweenness of a vertex are computed inside its own
//! component (using the component size for normalization), then the per-vertex
//! values are aggregated over the whole graph. An isolated vertex has
//! eccentricity 0, closeness 0 and betweenness 0.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityIndices {
    pub degree_mean: f64,
    pub degree_variance: f64,
    pub eccentricity_min: usize,
    pub eccentricity_max: usize,
    pub center_size: usize,
    pub periphery_size: usize,
    pub centralization: f64,
    pub closeness_mean: f64,
    pub closeness_variance: f64,
    pub betweenness_mean: f64,
    pub betweenness_variance: f64,
}

/// BFS distances from `s`; unreachable vertices get `usize::MAX`.
pub fn bfs_distances(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Eccentricity of every vertex within its component.
pub fn eccentricities(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count())
        .map(|v| {
            bfs_distances(g, v)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Closeness `(n_c - 1) / sum of distances`, `n_c` the component size.
pub fn closeness_centrality(g: &Graph) -> Vec<f64> {
    (0..g.vertex_count())
        .map(|v| {
            let (reach, total) = bfs_distances(g, v)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .fold((0usize, 0usize), |(c, s), d| (c + 1, s + d));
            if total == 0 {
                0.0
            } else {
                (reach - 1) as f64 / total as f64
            }
        })
        .collect()
}

/// Brandes betweenness on unweighted graphs, normalized by
/// `(n_c - 1)(n_c - 2) / 2` of the vertex's component.
pub fn betweenness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut raw = vec![0.0f64; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        delta.fill(0.0);
        preds.iter_mut().for_each(Vec::clear);
        stack.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                raw[w] += delta[w];
            }
        }
    }

    let mut comp_size = vec![0usize; n];
    for comp in g.components() {
        for &v in &comp {
            comp_size[v] = comp.len();
        }
    }
    // raw counts every unordered pair twice, so (raw / 2) / ((nc-1)(nc-2)/2)
    raw.iter()
        .zip(&comp_size)
        .map(|(&b, &nc)| {
            if nc <= 2 {
                0.0
            } else {
                b / ((nc - 1) * (nc - 2)) as f64
            }
        })
        .collect()
}

/// Freeman degree centralization: `sum(max_deg - deg(v)) / ((N-1)(N-2))`,
/// 0 when `N <= 2`.
pub fn degree_centralization(g: &Graph) -> f64 {
    let n = g.vertex_count();
    if n <= 2 {
        return 0.0;
    }
    let max = g.max_degree();
    let total: usize = (0..n).map(|v| max - g.degree(v)).sum();
    total as f64 / ((n - 1) * (n - 2)) as f64
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// All eleven indices. Variances are population variances over vertices.
pub fn connectivity_indices(g: &Graph) -> Result<ConnectivityIndices, GraphError> {
    if g.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let degrees: Vec<f64> = (0..g.vertex_count()).map(|v| g.degree(v) as f64).collect();
    let (degree_mean, degree_variance) = mean_and_variance(&degrees);

    let ecc = eccentricities(g);
    let eccentricity_min = *ecc.iter().min().expect("non-empty");
    let eccentricity_max = *ecc.iter().max().expect("non-empty");
    let center_size = ecc.iter().filter(|&&e| e == eccentricity_min).count();
    let periphery_size = ecc.iter().filter(|&&e| e == eccentricity_max).count();

    let (closeness_mean, closeness_variance) = mean_and_variance(&closeness_centrality(g));
    let (betweenness_mean, betweenness_variance) = mean_and_variance(&betweenness_centrality(g));

    Ok(ConnectivityIndices {
        degree_mean,
        degree_variance,
        eccentricity_min,
        eccentricity_max,
        center_size,
        periphery_size,
        centralization: degree_centralization(g),
        closeness_mean,
        closeness_variance,
        betweenness_mean,
        betweenness_variance,
    })
}

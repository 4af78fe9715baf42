//! Benchmark graphs with planted, vertex-disjoint cliques.
//!
//! Generation plants `n_cli` cliques, links every external node to random
//! targets, optionally links clique pairs, and relabels everything with a
//! seeded permutation. Every added edge is kept only if the greedy
//! chromatic bound stays at or below the bound of the cliques-only graph.
//! Because the clique number never exceeds the greedy bound, the largest
//! planted clique remains a maximum clique of the output.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{greedy_chromatic_upper_bound, Graph, GraphError, VertexSet};
use crate::solvers::EMBEDDING_LIMIT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
    #[error("clique size {c_m} must be at least 1 and below graph size {d_g}")]
    UndefinedRatio { c_m: usize, d_g: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecipe {
    pub n_node: usize,
    pub ex_node: usize,
    pub n_cli: usize,
    pub add_edges: bool,
    pub rand_cli: bool,
    /// Fraction of available targets each external node tries to link to.
    pub intra_edge_pct: f64,
    /// Fraction of cross pairs each clique pair tries to link.
    pub inter_edge_pct: f64,
    pub rng_seed: u64,
}

impl GraphRecipe {
    pub fn new(n_node: usize, ex_node: usize, n_cli: usize) -> Self {
        GraphRecipe {
            n_node,
            ex_node,
            n_cli,
            add_edges: false,
            rand_cli: false,
            intra_edge_pct: 0.3,
            inter_edge_pct: 0.3,
            rng_seed: 0,
        }
    }

    pub fn with_seed(&self, rng_seed: u64) -> Self {
        GraphRecipe {
            rng_seed,
            ..self.clone()
        }
    }

    pub fn final_dim(&self) -> usize {
        self.n_node * self.n_cli + self.ex_node
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::InvalidRecipe(m.to_string()));
        if self.n_node < 1 {
            return bad("n_node must be at least 1");
        }
        if self.n_cli < 1 {
            return bad("n_cli must be at least 1");
        }
        for (name, p) in [
            ("intra_edge_pct", self.intra_edge_pct),
            ("inter_edge_pct", self.inter_edge_pct),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(BenchError::InvalidRecipe(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchGraph {
    pub graph: Graph,
    pub clique_lists: Vec<VertexSet>,
    pub planted_max_size: usize,
    pub recipe: GraphRecipe,
    /// Greedy bound of the cliques-only graph that every edge addition respected.
    pub baseline_bound: usize,
    /// External nodes whose every link attempt was rejected.
    pub isolated_external: Vec<usize>,
    pub attempted_edges: usize,
    pub accepted_edges: usize,
}

/// Adds `(u, v)` if the greedy bound of the result stays `<= baseline_bound`.
pub fn add_guarded_edge(
    mut g: Graph,
    u: usize,
    v: usize,
    baseline_bound: usize,
) -> Result<(Graph, bool), GraphError> {
    g.try_add_edge(u, v)?;
    if greedy_chromatic_upper_bound(&g) <= baseline_bound {
        Ok((g, true))
    } else {
        g.remove_edge(u, v);
        Ok((g, false))
    }
}

fn attempts(pct: f64, available: usize) -> usize {
    ((pct * available as f64).ceil() as usize).min(available)
}

/// Runs the generator. Output has exactly `recipe.final_dim()` vertices.
pub fn graph_creation(recipe: &GraphRecipe) -> Result<BenchGraph, BenchError> {
    recipe.validate()?;
    let final_dim = recipe.final_dim();
    if final_dim > EMBEDDING_LIMIT {
        log::warn!("recipe has {final_dim} vertices, above the {EMBEDDING_LIMIT}-variable embedding limit");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.rng_seed);

    let sizes: Vec<usize> = (0..recipe.n_cli)
        .map(|_| {
            if recipe.rand_cli && recipe.n_node >= 2 {
                rng.random_range(2..=recipe.n_node)
            } else {
                recipe.n_node
            }
        })
        .collect();

    // cliques take labels 0.., external nodes follow
    let mut cliques: Vec<Vec<usize>> = Vec::with_capacity(sizes.len());
    let mut next = 0;
    for &s in &sizes {
        cliques.push((next..next + s).collect());
        next += s;
    }
    let externals: Vec<usize> = (next..final_dim).collect();

    let mut g = Graph::empty(final_dim);
    for c in &cliques {
        for (k, &u) in c.iter().enumerate() {
            for &v in &c[k + 1..] {
                g.try_add_edge(u, v)?;
            }
        }
    }
    let baseline = greedy_chromatic_upper_bound(&g);
    let mut attempted = 0;
    let mut accepted = 0;
    let mut isolated_external = Vec::new();

    for &v in &externals {
        let targets: Vec<usize> = (0..final_dim).filter(|&u| u != v && !g.has_edge(u, v)).collect();
        let k = attempts(recipe.intra_edge_pct, targets.len())
            .max(1)
            .min(targets.len());
        let mut linked = g.degree(v) > 0;
        for &u in targets.choose_multiple(&mut rng, k) {
            attempted += 1;
            let (next_g, ok) = add_guarded_edge(g, v, u, baseline)?;
            g = next_g;
            if ok {
                accepted += 1;
                linked = true;
            }
        }
        if !linked {
            isolated_external.push(v);
        }
    }

    if recipe.add_edges {
        for i in 0..cliques.len() {
            for j in i + 1..cliques.len() {
                let pairs: Vec<(usize, usize)> = cliques[i]
                    .iter()
                    .flat_map(|&a| cliques[j].iter().map(move |&b| (a, b)))
                    .filter(|&(a, b)| !g.has_edge(a, b))
                    .collect();
                let k = attempts(recipe.inter_edge_pct, pairs.len());
                for &(a, b) in pairs.choose_multiple(&mut rng, k) {
                    attempted += 1;
                    let (next_g, ok) = add_guarded_edge(g, a, b, baseline)?;
                    g = next_g;
                    accepted += usize::from(ok);
                }
            }
        }
    }

    let mut perm: Vec<usize> = (0..final_dim).collect();
    perm.shuffle(&mut rng);
    let graph = g.permuted(&perm);
    let relabel = |set: &[usize]| -> VertexSet { set.iter().map(|&v| perm[v]).collect() };
    let clique_lists: Vec<VertexSet> = cliques.iter().map(|c| relabel(c)).collect();
    let mut isolated_external: Vec<usize> = isolated_external.iter().map(|&v| perm[v]).collect();
    isolated_external.sort_unstable();
    if !isolated_external.is_empty() {
        log::info!(
            "{} external node(s) left isolated by the guard",
            isolated_external.len()
        );
    }

    Ok(BenchGraph {
        graph,
        planted_max_size: sizes.iter().copied().max().unwrap_or(0),
        clique_lists,
        recipe: recipe.clone(),
        baseline_bound: baseline,
        isolated_external,
        attempted_edges: attempted,
        accepted_edges: accepted,
    })
}

/// Clique size over the remaining vertices: `c_m / (d_g - c_m)`.
pub fn ratio(c_m: usize, d_g: usize) -> Result<f64, BenchError> {
    if c_m < 1 || d_g <= c_m {
        return Err(BenchError::UndefinedRatio { c_m, d_g });
    }
    Ok(c_m as f64 / (d_g - c_m) as f64)
}

/// Largest clique size `c` with `ratio(c, d_g) <= r`, at least 1.
pub fn clique_size_for_ratio(r: f64, d_g: usize) -> usize {
    ((r * d_g as f64 / (1.0 + r)).round() as usize).clamp(1, d_g.saturating_sub(1).max(1))
}

//! Independent-set decomposition: shrinks a graph (normally the complement of
//! the graph whose maximum clique is wanted) by removing high-degree
//! vertices that sit between two non-adjacent neighbors, while a greedy
//! chromatic bound on the complement keeps the clique size guarded.
//!
//! A removable triple `(v, v', v'')` has `v'` and `v''` adjacent to `v` but
//! not to each other. After `v` is removed, `v'` and `v''` become protected
//! and are never removed afterwards.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{greedy_chromatic_upper_bound, Graph, VertexSet};

pub const DEFAULT_MAX_TRIPLE_DEPTH: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("final_dim {final_dim} exceeds the graph's {vertices} vertices")]
    FinalDimTooLarge { final_dim: usize, vertices: usize },
    #[error("invalid decompose configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeConfig {
    pub final_dim: usize,
    pub min_cn: usize,
    pub max_triple_depth: usize,
    /// Random triples drawn per fallback search; `None` means `100 * N`.
    pub random_probe_budget: Option<usize>,
    pub rng_seed: u64,
    /// Break degree ties by ascending label instead of by the seeded RNG.
    pub deterministic_ties: bool,
}

impl DecomposeConfig {
    pub fn new(final_dim: usize, min_cn: usize) -> Self {
        DecomposeConfig {
            final_dim,
            min_cn,
            max_triple_depth: DEFAULT_MAX_TRIPLE_DEPTH,
            random_probe_budget: None,
            rng_seed: 0,
            deterministic_ties: false,
        }
    }

    fn validate(&self) -> Result<(), DecomposeError> {
        if self.final_dim < 1 {
            return Err(DecomposeError::InvalidConfig("final_dim must be at least 1"));
        }
        if self.min_cn < 1 {
            return Err(DecomposeError::InvalidConfig("min_cn must be at least 1"));
        }
        if self.max_triple_depth < 1 {
            return Err(DecomposeError::InvalidConfig(
                "max_triple_depth must be at least 1",
            ));
        }
        if self.random_probe_budget == Some(0) {
            return Err(DecomposeError::InvalidConfig(
                "random_probe_budget must be at least 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ReachedFinalDim,
    NoCandidate,
    GuardBlocked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeTrace {
    /// Input labels, in removal order.
    pub removed_vertices: Vec<usize>,
    /// Input labels of the non-removable list.
    pub protected_vertices: VertexSet,
    /// Input label of each output vertex (output vertex `i` is `surviving_vertices[i]`).
    pub surviving_vertices: Vec<usize>,
    pub iterations: usize,
    pub stop_reason: StopReason,
}

/// `(vertex, first, second)` with `first < second`, both adjacent to
/// `vertex` and not to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub vertex: usize,
    pub first: usize,
    pub second: usize,
}

/// True iff the complement of `g - v` still has greedy bound `>= min_cn`.
pub fn guard_allows_removal(g: &Graph, v: usize, min_cn: usize) -> bool {
    if min_cn == 0 {
        return true;
    }
    greedy_chromatic_upper_bound(&g.without_vertex(v).complement()) >= min_cn
}

fn first_open_pair(g: &Graph, v: usize) -> Option<(usize, usize)> {
    let nbrs = g.neighbors(v);
    nbrs.iter().enumerate().find_map(|(k, &a)| {
        nbrs[k + 1..]
            .iter()
            .find(|&&b| !g.has_edge(a, b))
            .map(|&b| (a, b))
    })
}

struct Scan {
    found: Option<Triple>,
    guard_rejected: bool,
}

fn scan_by_degree(
    g: &Graph,
    protected: &VertexSet,
    min_cn: usize,
    depth: usize,
    mut tie_rng: Option<&mut ChaCha8Rng>,
) -> Scan {
    let mut candidates: Vec<usize> = (0..g.vertex_count())
        .filter(|v| !protected.contains(v) && g.degree(*v) >= 2)
        .collect();
    candidates.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));

    let mut guard_rejected = false;
    let mut classes = candidates.chunk_by_mut(|&a, &b| g.degree(a) == g.degree(b));
    for class in classes.by_ref().take(depth) {
        if let Some(rng) = tie_rng.as_deref_mut() {
            class.shuffle(rng);
        }
        for &v in class.iter() {
            let Some((first, second)) = first_open_pair(g, v) else {
                continue;
            };
            if guard_allows_removal(g, v, min_cn) {
                return Scan {
                    found: Some(Triple {
                        vertex: v,
                        first,
                        second,
                    }),
                    guard_rejected,
                };
            }
            guard_rejected = true;
        }
    }
    Scan {
        found: None,
        guard_rejected,
    }
}

/// Depth-limited search from the highest degree class down, at most `depth`
/// classes, ties in label order. The returned vertex passes the guard.
pub fn find_max_degree_removable(
    g: &Graph,
    protected: &VertexSet,
    min_cn: usize,
    depth: usize,
) -> Option<Triple> {
    scan_by_degree(g, protected, min_cn, depth, None).found
}

fn scan_random<R: Rng + ?Sized>(
    g: &Graph,
    protected: &VertexSet,
    min_cn: usize,
    budget: usize,
    rng: &mut R,
) -> Scan {
    let n = g.vertex_count();
    let mut guard_rejected = false;
    if n == 0 {
        return Scan {
            found: None,
            guard_rejected,
        };
    }
    for _ in 0..budget {
        let v = rng.random_range(0..n);
        let nbrs = g.neighbors(v);
        if protected.contains(&v) || nbrs.len() < 2 {
            continue;
        }
        let i = rng.random_range(0..nbrs.len());
        let mut j = rng.random_range(0..nbrs.len() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = (nbrs[i.min(j)], nbrs[i.max(j)]);
        if g.has_edge(a, b) {
            continue;
        }
        if guard_allows_removal(g, v, min_cn) {
            return Scan {
                found: Some(Triple {
                    vertex: v,
                    first: a,
                    second: b,
                }),
                guard_rejected,
            };
        }
        guard_rejected = true;
    }
    Scan {
        found: None,
        guard_rejected,
    }
}

/// Draws up to `budget` random triples and returns the first removable one.
pub fn find_random_removable<R: Rng + ?Sized>(
    g: &Graph,
    protected: &VertexSet,
    min_cn: usize,
    budget: usize,
    rng: &mut R,
) -> Option<Triple> {
    scan_random(g, protected, min_cn, budget, rng).found
}

/// Runs the decomposition. The returned graph is the subgraph induced by
/// `trace.surviving_vertices`, relabeled densely.
pub fn decompose_is(g: &Graph, cfg: &DecomposeConfig) -> Result<(Graph, DecomposeTrace), DecomposeError> {
    cfg.validate()?;
    let n = g.vertex_count();
    if cfg.final_dim > n {
        return Err(DecomposeError::FinalDimTooLarge {
            final_dim: cfg.final_dim,
            vertices: n,
        });
    }
    let budget = cfg.random_probe_budget.unwrap_or(100 * n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    let mut current = g.clone();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut protected_orig = VertexSet::new();
    let mut removed = Vec::new();
    let mut iterations = 0;

    let stop_reason = loop {
        if current.vertex_count() <= cfg.final_dim {
            break StopReason::ReachedFinalDim;
        }
        if iterations >= 2 * n {
            break StopReason::GuardBlocked;
        }
        iterations += 1;

        let protected: VertexSet = labels
            .iter()
            .enumerate()
            .filter(|(_, orig)| protected_orig.contains(orig))
            .map(|(i, _)| i)
            .collect();

        let tie_rng = (!cfg.deterministic_ties).then_some(&mut rng);
        let by_degree = scan_by_degree(&current, &protected, cfg.min_cn, cfg.max_triple_depth, tie_rng);
        let (found, rejected) = match by_degree.found {
            Some(t) => (Some(t), by_degree.guard_rejected),
            None => {
                let random = scan_random(&current, &protected, cfg.min_cn, budget, &mut rng);
                (random.found, by_degree.guard_rejected || random.guard_rejected)
            }
        };

        let Some(t) = found else {
            break if rejected {
                StopReason::GuardBlocked
            } else {
                StopReason::NoCandidate
            };
        };
        if guard_allows_removal(&current, t.vertex, cfg.min_cn) {
            protected_orig.insert(labels[t.first]);
            protected_orig.insert(labels[t.second]);
            removed.push(labels.remove(t.vertex));
            current = current.without_vertex(t.vertex);
        }
    };

    Ok((
        current,
        DecomposeTrace {
            removed_vertices: removed,
            protected_vertices: protected_orig,
            surviving_vertices: labels,
            iterations,
            stop_reason,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Worked example: vertex 0 joins 1..=4; 1-3, 2-4 and 3-4 are edges.
    fn worked_example() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn no_protection() -> VertexSet {
        VertexSet::new()
    }

    #[test]
    fn worked_example_removes_hub_first() {
        let g = worked_example();
        let t = find_max_degree_removable(&g, &no_protection(), 2, 5).unwrap();
        assert_eq!(
            t,
            Triple {
                vertex: 0,
                first: 1,
                second: 2
            }
        );

        let mut cfg = DecomposeConfig::new(1, 2);
        cfg.deterministic_ties = true;
        let (out, trace) = decompose_is(&g, &cfg).unwrap();
        assert_eq!(trace.removed_vertices, vec![0, 3]);
        assert_eq!(trace.protected_vertices, [1, 2, 4].into_iter().collect());
        assert_eq!(trace.surviving_vertices, vec![1, 2, 4]);
        assert_eq!(trace.stop_reason, StopReason::NoCandidate);
        assert_eq!(out.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn worked_example_valid_triples() {
        let g = worked_example();
        for (a, b) in [(1, 2), (1, 4), (2, 3)] {
            assert!(g.has_edge(0, a) && g.has_edge(0, b) && !g.has_edge(a, b));
        }
        for (a, b) in [(1, 3), (2, 4), (3, 4)] {
            assert!(g.has_edge(a, b));
        }
    }

    #[test]
    fn complete_and_edgeless_inputs_are_unchanged() {
        for g in [Graph::complete(6), Graph::empty(6)] {
            let (out, trace) = decompose_is(&g, &DecomposeConfig::new(2, 1)).unwrap();
            assert_eq!(out, g);
            assert_eq!(trace.stop_reason, StopReason::NoCandidate);
            assert!(trace.removed_vertices.is_empty());
        }
        assert!(find_max_degree_removable(&Graph::complete(4), &no_protection(), 1, 5).is_none());
    }

    #[test]
    fn star_center_is_removable() {
        let t = find_max_degree_removable(&Graph::star(4), &no_protection(), 1, 5).unwrap();
        assert_eq!(t.vertex, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let t = find_random_removable(&Graph::star(4), &no_protection(), 1, 10, &mut rng).unwrap();
        assert_eq!(t.vertex, 0);
        assert!(t.first >= 1 && t.second > t.first);
    }

    #[test]
    fn random_search_finds_the_only_triple() {
        // path 0-1-2 plus a triangle on 3, 4, 5
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = find_random_removable(&g, &no_protection(), 1, 1000, &mut rng).unwrap();
        assert_eq!(
            t,
            Triple {
                vertex: 1,
                first: 0,
                second: 2
            }
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(find_random_removable(&Graph::complete(5), &no_protection(), 1, 1000, &mut rng).is_none());
    }

    #[test]
    fn protected_vertices_are_skipped() {
        let protected: VertexSet = [0].into_iter().collect();
        assert!(find_max_degree_removable(&Graph::star(4), &protected, 1, 5).is_none());
    }

    #[test]
    fn guard_examples() {
        let g = Graph::cycle(5);
        assert!((0..5).all(|v| guard_allows_removal(&g, v, 0)));
        assert!((0..5).all(|v| !guard_allows_removal(&g, v, 6)));
        let edgeless = Graph::empty(5);
        assert!((0..5).all(|v| !guard_allows_removal(&edgeless, v, 5)));
        assert!((0..5).all(|v| guard_allows_removal(&edgeless, v, 4)));
    }

    #[test]
    fn guard_blocks_removal() {
        // the complement of K_{1,3} minus its center is K3, bound 3 < 4
        let g = Graph::star(3);
        let (out, trace) = decompose_is(&g, &DecomposeConfig::new(1, 4)).unwrap();
        assert_eq!(out, g);
        assert_eq!(trace.stop_reason, StopReason::GuardBlocked);
    }

    #[test]
    fn argument_errors() {
        let g = Graph::path(3);
        assert_eq!(
            decompose_is(&g, &DecomposeConfig::new(4, 1)).unwrap_err(),
            DecomposeError::FinalDimTooLarge {
                final_dim: 4,
                vertices: 3
            }
        );
        assert!(decompose_is(&g, &DecomposeConfig::new(0, 1)).is_err());
        assert!(decompose_is(&g, &DecomposeConfig::new(1, 0)).is_err());
    }
}

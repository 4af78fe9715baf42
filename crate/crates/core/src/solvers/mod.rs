//! Solvers: the exact oracle, the annealing sampler that stands in for
//! annealing hardware, solution repair, and the client abstraction that
//! enforces the embedding limit.

mod anneal;
mod exact;

pub use anneal::{anneal_sample, AnnealConfig};
pub use exact::{clique_number, exact_max_clique, exact_max_independent_set, EXACT_ORACLE_LIMIT};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::qubo::{build_mc_qubo, Assignment, QuboError, QuboModel};

/// Largest problem (in variables) an annealer accepts.
pub const EMBEDDING_LIMIT: usize = 164;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("model has {num_vars} variables, embedding limit is {limit}")]
    EmbeddingLimit { num_vars: usize, limit: usize },
    #[error("exact oracle supports at most {limit} vertices (got {vertices})")]
    OracleSizeLimit { vertices: usize, limit: usize },
    #[error("invalid anneal configuration: {0}")]
    InvalidConfig(String),
    #[error("sampler returned no outcomes")]
    NoSamples,
    #[error(transparent)]
    Qubo(#[from] QuboError),
}

/// One read of a sampler, decoded and repaired.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub raw_assignment: Assignment,
    pub decoded_set: VertexSet,
    /// Feasible subset of `decoded_set`; equal to it when `valid`.
    pub repaired_set: VertexSet,
    pub energy: f64,
    pub valid: bool,
    /// `repaired_set` is empty.
    pub is_null: bool,
    pub reads_used: usize,
    pub seed: u64,
    pub read_index: usize,
}

/// Compact JSONL line for the `solve` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeLine {
    pub seed: u64,
    pub read: usize,
    pub energy: f64,
    pub set: Vec<usize>,
    pub valid: bool,
    pub is_null: bool,
}

impl From<&SampleOutcome> for OutcomeLine {
    fn from(o: &SampleOutcome) -> Self {
        OutcomeLine {
            seed: o.seed,
            read: o.read_index,
            energy: o.energy,
            set: o.repaired_set.iter().copied().collect(),
            valid: o.valid,
            is_null: o.is_null,
        }
    }
}

/// Anything that can sample a QUBO, local or remote.
///
/// Callers go through [`AnnealerClient::sample`], which applies the
/// capacity gate before delegating to [`AnnealerClient::run`].
pub trait AnnealerClient: Sync {
    fn max_variables(&self) -> usize {
        EMBEDDING_LIMIT
    }

    fn run(&self, model: &QuboModel, cfg: &AnnealConfig) -> Result<Vec<SampleOutcome>, SolverError>;

    fn sample(&self, model: &QuboModel, cfg: &AnnealConfig) -> Result<Vec<SampleOutcome>, SolverError> {
        let limit = self.max_variables();
        if model.num_vars() > limit {
            return Err(SolverError::EmbeddingLimit {
                num_vars: model.num_vars(),
                limit,
            });
        }
        self.run(model, cfg)
    }
}

/// In-process simulated annealing client.
#[derive(Debug, Clone)]
pub struct LocalAnnealer {
    max_variables: usize,
}

impl Default for LocalAnnealer {
    fn default() -> Self {
        LocalAnnealer {
            max_variables: EMBEDDING_LIMIT,
        }
    }
}

impl LocalAnnealer {
    pub fn new() -> Self {
        Self::default()
    }

    /// A client with a smaller capacity; values above the embedding limit
    /// are clamped to it.
    pub fn with_max_variables(max_variables: usize) -> Self {
        LocalAnnealer {
            max_variables: max_variables.min(EMBEDDING_LIMIT),
        }
    }
}

impl AnnealerClient for LocalAnnealer {
    fn max_variables(&self) -> usize {
        self.max_variables
    }

    fn run(&self, model: &QuboModel, cfg: &AnnealConfig) -> Result<Vec<SampleOutcome>, SolverError> {
        anneal::anneal_unchecked(model, cfg)
    }
}

/// Greedily deletes the member of `s` with the most neighbors inside `s`
/// (the highest label among ties) until `s` is independent in `g`.
pub fn repair_to_independent_set(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut kept = s.clone();
    loop {
        let worst = kept
            .iter()
            .map(|&v| {
                let conflicts = g.neighbors(v).iter().filter(|u| kept.contains(u)).count();
                (conflicts, v)
            })
            .max();
        match worst {
            Some((c, v)) if c > 0 => {
                kept.remove(&v);
            }
            _ => return kept,
        }
    }
}

/// Samples the clique QUBO of `g` and returns the outcome with the largest
/// repaired clique, breaking ties by lower energy and then read order.
pub fn solve_max_clique(
    g: &Graph,
    client: &dyn AnnealerClient,
    cfg: &AnnealConfig,
) -> Result<SampleOutcome, SolverError> {
    let model = build_mc_qubo(g, 1.0, 2.0)?;
    let outcomes = client.sample(&model, cfg)?;
    // outcomes arrive sorted by (energy, read); keep the first of max size
    let mut best: Option<SampleOutcome> = None;
    for o in outcomes {
        if best
            .as_ref()
            .is_none_or(|b| o.repaired_set.len() > b.repaired_set.len())
        {
            best = Some(o);
        }
    }
    best.ok_or(SolverError::NoSamples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::is_clique;

    fn set(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn repair_examples() {
        let p3 = Graph::path(3);
        assert_eq!(repair_to_independent_set(&p3, &set(&[0, 2])), set(&[0, 2]));
        assert_eq!(repair_to_independent_set(&p3, &set(&[0, 1, 2])), set(&[0, 2]));
        let k3 = Graph::complete(3);
        assert_eq!(repair_to_independent_set(&k3, &set(&[0, 1, 2])), set(&[0]));
        assert_eq!(repair_to_independent_set(&k3, &set(&[])), set(&[]));
    }

    #[test]
    fn gate_on_local_client() {
        let client = LocalAnnealer::new();
        let cfg = AnnealConfig {
            num_reads: 1,
            sweeps_per_read: 1,
            beta_initial: 0.1,
            beta_final: 1.0,
            rng_seed: 0,
        };
        assert!(client.sample(&QuboModel::new(164), &cfg).is_ok());
        assert_eq!(
            client.sample(&QuboModel::new(165), &cfg).unwrap_err(),
            SolverError::EmbeddingLimit {
                num_vars: 165,
                limit: 164
            }
        );
        assert!(anneal_sample(&QuboModel::new(165), &cfg).is_err());
        let small = LocalAnnealer::with_max_variables(10);
        assert!(small.sample(&QuboModel::new(11), &cfg).is_err());
        assert_eq!(LocalAnnealer::with_max_variables(500).max_variables(), 164);
    }

    #[test]
    fn solves_triangle() {
        let cfg = AnnealConfig {
            num_reads: 8,
            sweeps_per_read: 100,
            beta_initial: 0.1,
            beta_final: 10.0,
            rng_seed: 5,
        };
        let g = Graph::complete(3);
        let out = solve_max_clique(&g, &LocalAnnealer::new(), &cfg).unwrap();
        assert_eq!(out.repaired_set, set(&[0, 1, 2]));
        assert!(is_clique(&g, &out.repaired_set).unwrap());
        assert!(!out.is_null);
    }
}

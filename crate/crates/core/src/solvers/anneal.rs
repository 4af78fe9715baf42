//! Single-spin-flip Metropolis simulated annealing over QUBO variables.
//!
//! Each read owns its own ChaCha8 stream (`seed`, stream = read index), so
//! reads can run in parallel and still produce bit-identical outcomes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qubo::{decode_vertex_set, is_independent_set, Assignment, QuboModel};

use super::{repair_to_independent_set, SampleOutcome, SolverError, EMBEDDING_LIMIT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub num_reads: usize,
    pub sweeps_per_read: usize,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub rng_seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig::acceptance(0)
    }
}

impl AnnealConfig {
    /// 100 reads of 2000 sweeps, beta 0.05 -> 12.
    pub fn acceptance(rng_seed: u64) -> Self {
        AnnealConfig {
            num_reads: 100,
            sweeps_per_read: 2000,
            beta_initial: 0.05,
            beta_final: 12.0,
            rng_seed,
        }
    }

    pub fn with_seed(&self, rng_seed: u64) -> Self {
        AnnealConfig {
            rng_seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |reason: &str| Err(SolverError::InvalidConfig(reason.to_string()));
        if self.num_reads == 0 {
            return bad("num_reads must be at least 1");
        }
        if self.sweeps_per_read == 0 {
            return bad("sweeps_per_read must be at least 1");
        }
        if !(self.beta_initial > 0.0 && self.beta_initial.is_finite()) {
            return bad("beta_initial must be positive");
        }
        if !(self.beta_final > self.beta_initial && self.beta_final.is_finite()) {
            return bad("beta_final must exceed beta_initial");
        }
        Ok(())
    }

    /// Geometric inverse-temperature schedule, one value per sweep.
    pub fn beta_schedule(&self) -> Vec<f64> {
        let s = self.sweeps_per_read;
        if s == 1 {
            return vec![self.beta_final];
        }
        let ratio = (self.beta_final / self.beta_initial).ln();
        (0..s)
            .map(|t| self.beta_initial * (ratio * t as f64 / (s - 1) as f64).exp())
            .collect()
    }
}

/// Dense-row view of a model for fast local-field updates.
struct Couplings {
    linear: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    fn new(m: &QuboModel) -> Self {
        let n = m.num_vars();
        let mut linear = vec![0.0; n];
        for (&i, &c) in m.linear() {
            linear[i] += c;
        }
        let mut rows = vec![Vec::new(); n];
        for (&(i, j), &c) in m.quadratic() {
            rows[i].push((j, c));
            rows[j].push((i, c));
        }
        Couplings { linear, rows }
    }

    fn anneal(&self, schedule: &[f64], rng: &mut ChaCha8Rng) -> Vec<u8> {
        let n = self.linear.len();
        let mut x: Vec<u8> = (0..n).map(|_| rng.random::<bool>() as u8).collect();
        // field[i] = dE/dx_i given the other variables
        let mut field = self.linear.clone();
        for (&xi, row) in x.iter().zip(&self.rows) {
            if xi == 1 {
                for &(j, c) in row {
                    field[j] += c;
                }
            }
        }
        for &beta in schedule {
            for i in 0..n {
                let delta = if x[i] == 1 { -field[i] } else { field[i] };
                let accept = delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp();
                if accept {
                    let sign = if x[i] == 1 { -1.0 } else { 1.0 };
                    x[i] ^= 1;
                    for &(j, c) in &self.rows[i] {
                        field[j] += sign * c;
                    }
                }
            }
        }
        x
    }
}

/// Runs `cfg.num_reads` independent anneals and returns one outcome per
/// read, sorted by energy (ties by read index). Decoded sets are repaired
/// against the model's conflict graph (its positive quadratic terms).
pub fn anneal_sample(m: &QuboModel, cfg: &AnnealConfig) -> Result<Vec<SampleOutcome>, SolverError> {
    if m.num_vars() > EMBEDDING_LIMIT {
        return Err(SolverError::EmbeddingLimit {
            num_vars: m.num_vars(),
            limit: EMBEDDING_LIMIT,
        });
    }
    anneal_unchecked(m, cfg)
}

pub(crate) fn anneal_unchecked(m: &QuboModel, cfg: &AnnealConfig) -> Result<Vec<SampleOutcome>, SolverError> {
    cfg.validate()?;
    let couplings = Couplings::new(m);
    let conflicts = m.conflict_graph();
    let schedule = cfg.beta_schedule();

    let mut outcomes: Vec<SampleOutcome> = (0..cfg.num_reads)
        .into_par_iter()
        .map(|read| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(read as u64);
            let bits = couplings.anneal(&schedule, &mut rng);
            let raw_assignment = Assignment { bits };
            let energy = m.evaluate(&raw_assignment).expect("assignment sized to model");
            let decoded_set = decode_vertex_set(&raw_assignment);
            let valid = is_independent_set(&conflicts, &decoded_set).expect("decoded in range");
            let repaired_set = if valid {
                decoded_set.clone()
            } else {
                repair_to_independent_set(&conflicts, &decoded_set)
            };
            SampleOutcome {
                is_null: repaired_set.is_empty(),
                raw_assignment,
                decoded_set,
                repaired_set,
                energy,
                valid,
                reads_used: cfg.num_reads,
                seed: cfg.rng_seed,
                read_index: read,
            }
        })
        .collect();
    outcomes.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.read_index.cmp(&b.read_index))
    });
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::qubo::build_is_qubo;

    #[test]
    fn schedule_is_geometric() {
        let cfg = AnnealConfig {
            num_reads: 1,
            sweeps_per_read: 3,
            beta_initial: 0.1,
            beta_final: 10.0,
            rng_seed: 0,
        };
        let s = cfg.beta_schedule();
        assert!((s[0] - 0.1).abs() < 1e-15);
        assert!((s[1] - 1.0).abs() < 1e-12);
        assert!((s[2] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = AnnealConfig::acceptance(1);
        cfg.num_reads = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = AnnealConfig::acceptance(1);
        cfg.beta_final = cfg.beta_initial;
        assert!(cfg.validate().is_err());
        let mut cfg = AnnealConfig::acceptance(1);
        cfg.beta_initial = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unfrustrated_model_reaches_all_ones() {
        let m = build_is_qubo(&Graph::empty(5), 1.0, 2.0).unwrap();
        let cfg = AnnealConfig {
            num_reads: 10,
            sweeps_per_read: 100,
            beta_initial: 0.1,
            beta_final: 10.0,
            rng_seed: 3,
        };
        let out = anneal_sample(&m, &cfg).unwrap();
        assert_eq!(out.len(), 10);
        assert_eq!(out[0].raw_assignment, Assignment::ones(5));
        assert_eq!(out[0].energy, -5.0);
    }

    #[test]
    fn outcomes_sorted_and_deterministic() {
        let m = build_is_qubo(&Graph::cycle(9), 1.0, 2.0).unwrap();
        let cfg = AnnealConfig {
            num_reads: 16,
            sweeps_per_read: 20,
            beta_initial: 0.05,
            beta_final: 2.0,
            rng_seed: 11,
        };
        let a = anneal_sample(&m, &cfg).unwrap();
        let b = anneal_sample(&m, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].energy <= w[1].energy));
    }
}

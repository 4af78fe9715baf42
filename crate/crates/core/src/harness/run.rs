use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bench::GraphRecipe;
use crate::bench::{graph_creation, ratio};
use crate::indices::{connectivity_indices, ConnectivityIndices};
use crate::qubo::is_clique;
use crate::solvers::{
    clique_number, solve_max_clique, AnnealerClient, LocalAnnealer, SampleOutcome, EXACT_ORACLE_LIMIT,
};

use super::battery::{statistical_battery, StatsReport};
use super::plan::{ExperimentPlan, GroupSpec};
use super::HarnessError;

/// Independent seed streams derived for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedStream {
    Graph,
    Anneal,
}

/// SHA-256 of `(master_seed, label, replicate, attempt, stream)`, first 8
/// bytes read little-endian.
pub fn child_seed(
    master_seed: u64,
    label: &str,
    replicate: usize,
    attempt: usize,
    stream: SeedStream,
) -> u64 {
    let digest = Sha256::new()
        .chain_update(master_seed.to_le_bytes())
        .chain_update((label.len() as u64).to_le_bytes())
        .chain_update(label.as_bytes())
        .chain_update((replicate as u64).to_le_bytes())
        .chain_update((attempt as u64).to_le_bytes())
        .chain_update([stream as u8])
        .finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// Counted in the group's sample.
    Kept,
    /// Null outcome discarded and replaced by a fresh instance.
    ReplacedNull,
    /// Null outcome kept (quality 0) because the replacement budget ran out.
    ExhaustedNull,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub graph_id: String,
    pub group: String,
    pub replicate: usize,
    /// 0 for the first instance of a slot, then one per replacement.
    pub attempt: usize,
    pub status: RunStatus,
    pub recipe: GraphRecipe,
    pub anneal_seed: u64,
    pub final_dim: usize,
    pub planted_max_size: usize,
    /// Exact clique number, computed when the instance is small enough.
    pub oracle_clique_size: Option<usize>,
    /// `|repaired clique| / planted_max_size`.
    pub quality: f64,
    pub density: Option<f64>,
    /// Planted clique size over the remaining nodes; absent when every node is in the clique.
    pub ratio: Option<f64>,
    pub indices: Option<ConnectivityIndices>,
    /// Replacements made before this instance was obtained.
    pub replaced_null_count: usize,
    pub outcome: SampleOutcome,
}

impl RunRecord {
    pub fn is_null(&self) -> bool {
        self.outcome.is_null
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResult {
    pub label: String,
    /// One record per replicate slot, in slot order.
    pub records: Vec<RunRecord>,
    /// Null instances that were replaced, in the order they were produced.
    pub discarded: Vec<RunRecord>,
    pub budget: usize,
    pub replacements: usize,
    /// Some slot still holds a null outcome.
    pub incomplete: bool,
}

impl GroupResult {
    pub fn generated(&self) -> usize {
        self.records.len() + self.discarded.len()
    }

    pub fn qualities(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.quality).collect()
    }

    pub fn null_count(&self) -> usize {
        self.discarded.len() + self.records.iter().filter(|r| r.is_null()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub groups: Vec<GroupResult>,
    pub stats: StatsReport,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    /// A report with no groups and no statistics.
    pub fn empty(plan: ExperimentPlan) -> Self {
        ExperimentReport {
            plan,
            groups: Vec::new(),
            stats: StatsReport::default(),
            notes: Vec::new(),
        }
    }

    /// Every record (kept, replaced and exhausted), grouped by slot.
    pub fn all_records(&self) -> Vec<&RunRecord> {
        let mut out = Vec::new();
        for g in &self.groups {
            let mut all: Vec<&RunRecord> = g.records.iter().chain(&g.discarded).collect();
            all.sort_by_key(|r| (r.replicate, r.attempt));
            out.extend(all);
        }
        out
    }
}

fn run_instance(
    plan: &ExperimentPlan,
    spec: &GroupSpec,
    replicate: usize,
    attempt: usize,
    client: &dyn AnnealerClient,
) -> Result<RunRecord, HarnessError> {
    let graph_seed = child_seed(
        plan.master_seed,
        &spec.label,
        replicate,
        attempt,
        SeedStream::Graph,
    );
    let anneal_seed = child_seed(
        plan.master_seed,
        &spec.label,
        replicate,
        attempt,
        SeedStream::Anneal,
    );
    let bench = graph_creation(&spec.recipe(graph_seed))?;
    let outcome = solve_max_clique(&bench.graph, client, &plan.anneal.config(anneal_seed))?;
    let graph_id = format!("{}/r{}/a{}", spec.label, replicate, attempt);
    if !is_clique(&bench.graph, &outcome.repaired_set).unwrap_or(false) {
        return Err(HarnessError::InvalidOutcome { graph_id });
    }
    let final_dim = bench.graph.vertex_count();
    let oracle_clique_size = (final_dim <= EXACT_ORACLE_LIMIT)
        .then(|| clique_number(&bench.graph).ok())
        .flatten();
    Ok(RunRecord {
        graph_id,
        group: spec.label.clone(),
        replicate,
        attempt,
        status: RunStatus::Kept,
        recipe: bench.recipe.clone(),
        anneal_seed,
        final_dim,
        planted_max_size: bench.planted_max_size,
        oracle_clique_size,
        quality: outcome.repaired_set.len() as f64 / bench.planted_max_size as f64,
        density: bench.graph.density().ok(),
        ratio: ratio(bench.planted_max_size, final_dim).ok(),
        indices: connectivity_indices(&bench.graph).ok(),
        replaced_null_count: 0,
        outcome,
    })
}

fn run_group(
    plan: &ExperimentPlan,
    spec: &GroupSpec,
    client: &dyn AnnealerClient,
) -> Result<GroupResult, HarnessError> {
    let budget = plan.budget_for(spec);
    // first attempts run in parallel; replacements follow in slot order so
    // the shared budget is spent deterministically
    let first: Vec<RunRecord> = (0..spec.replicates)
        .into_par_iter()
        .map(|rep| run_instance(plan, spec, rep, 0, client))
        .collect::<Result<_, _>>()?;

    let mut records = Vec::with_capacity(first.len());
    let mut discarded = Vec::new();
    let mut replacements = 0;
    for mut current in first {
        while current.is_null() && replacements < budget {
            replacements += 1;
            let rep = current.replicate;
            let next_attempt = current.attempt + 1;
            current.status = RunStatus::ReplacedNull;
            log::info!("{}: null outcome replaced", current.graph_id);
            discarded.push(current);
            current = run_instance(plan, spec, rep, next_attempt, client)?;
            current.replaced_null_count = next_attempt;
        }
        if current.is_null() {
            current.status = RunStatus::ExhaustedNull;
            log::warn!("{}: replacement budget exhausted, null kept", current.graph_id);
        }
        records.push(current);
    }
    let incomplete = records.iter().any(|r| r.status == RunStatus::ExhaustedNull);
    Ok(GroupResult {
        label: spec.label.clone(),
        records,
        discarded,
        budget,
        replacements,
        incomplete,
    })
}

/// Runs the plan with the in-process sampler capped at `plan.max_nodes`.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport, HarnessError> {
    run_experiment_with(plan, &LocalAnnealer::with_max_variables(plan.max_nodes))
}

pub fn run_experiment_with(
    plan: &ExperimentPlan,
    client: &dyn AnnealerClient,
) -> Result<ExperimentReport, HarnessError> {
    plan.validate()?;
    let mut notes = Vec::new();
    let mut groups = Vec::with_capacity(plan.groups.len());
    for spec in &plan.groups {
        log::info!(
            "group {}: {} replicate(s), {} nodes",
            spec.label,
            spec.replicates,
            spec.final_dim()
        );
        let result = run_group(plan, spec, client)?;
        if result.incomplete {
            notes.push(format!(
                "group {}: replacement budget of {} exhausted, null outcomes kept with quality 0",
                result.label, result.budget
            ));
        }
        if spec.final_dim() > EXACT_ORACLE_LIMIT {
            notes.push(format!(
                "group {}: {} nodes, above {}; exact oracle check skipped",
                result.label,
                spec.final_dim(),
                EXACT_ORACLE_LIMIT
            ));
        }
        for r in result.records.iter().chain(&result.discarded) {
            if let Some(omega) = r.oracle_clique_size {
                if omega != r.planted_max_size {
                    notes.push(format!(
                        "{}: exact clique number {} differs from planted size {}",
                        r.graph_id, omega, r.planted_max_size
                    ));
                }
            }
        }
        groups.push(result);
    }
    let samples: Vec<(String, Vec<f64>)> = groups.iter().map(|g| (g.label.clone(), g.qualities())).collect();
    let stats = statistical_battery(&samples, &plan.alphas);
    Ok(ExperimentReport {
        plan: plan.clone(),
        groups,
        stats,
        notes,
    })
}

//! Experiment orchestration: plans, seeded execution with null replacement,
//! the statistical battery and report files.
//!
//! A run follows four steps: generate each group's instances, solve them,
//! replace instances whose best outcome is empty, then compare the groups'
//! quality samples statistically.

mod battery;
mod plan;
mod render;
mod run;

pub use battery::{statistical_battery, Panel, StatRow, StatsReport, StepResult};
pub use plan::{AnnealSettings, ExperimentKind, ExperimentPlan, GroupSpec};
pub use render::{render_matrices, render_stats_csv, render_summary, report_render, REPORT_FILES};
pub use run::{
    child_seed, run_experiment, run_experiment_with, ExperimentReport, GroupResult, RunRecord, RunStatus,
    SeedStream,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::bench::BenchError;
use crate::solvers::SolverError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("cannot parse plan: {0}")]
    PlanSyntax(#[from] toml::de::Error),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("instance {graph_id}: sampler returned an invalid clique")]
    InvalidOutcome { graph_id: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

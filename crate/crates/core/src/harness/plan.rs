use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bench::{clique_size_for_ratio, GraphRecipe};
use crate::solvers::{AnnealConfig, EMBEDDING_LIMIT};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    RatioSweep,
    DensitySweep,
    IndicesStudy,
    CliqueCount,
    SizeStudy,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::RatioSweep,
        ExperimentKind::DensitySweep,
        ExperimentKind::IndicesStudy,
        ExperimentKind::CliqueCount,
        ExperimentKind::SizeStudy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::RatioSweep => "ratio_sweep",
            ExperimentKind::DensitySweep => "density_sweep",
            ExperimentKind::IndicesStudy => "indices_study",
            ExperimentKind::CliqueCount => "clique_count",
            ExperimentKind::SizeStudy => "size_study",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment kind `{s}`"))
    }
}

fn default_pct() -> f64 {
    0.3
}

fn default_one() -> usize {
    1
}

/// One group of the plan: a recipe template (seed supplied per instance)
/// and the number of instances to keep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub label: String,
    pub replicates: usize,
    pub n_node: usize,
    #[serde(default)]
    pub ex_node: usize,
    #[serde(default = "default_one")]
    pub n_cli: usize,
    #[serde(default)]
    pub add_edges: bool,
    #[serde(default)]
    pub rand_cli: bool,
    #[serde(default = "default_pct")]
    pub intra_edge_pct: f64,
    #[serde(default = "default_pct")]
    pub inter_edge_pct: f64,
}

impl GroupSpec {
    pub fn new(
        label: impl Into<String>,
        replicates: usize,
        n_node: usize,
        ex_node: usize,
        n_cli: usize,
    ) -> Self {
        GroupSpec {
            label: label.into(),
            replicates,
            n_node,
            ex_node,
            n_cli,
            add_edges: false,
            rand_cli: false,
            intra_edge_pct: default_pct(),
            inter_edge_pct: default_pct(),
        }
    }

    pub fn recipe(&self, rng_seed: u64) -> GraphRecipe {
        GraphRecipe {
            n_node: self.n_node,
            ex_node: self.ex_node,
            n_cli: self.n_cli,
            add_edges: self.add_edges,
            rand_cli: self.rand_cli,
            intra_edge_pct: self.intra_edge_pct,
            inter_edge_pct: self.inter_edge_pct,
            rng_seed,
        }
    }

    pub fn final_dim(&self) -> usize {
        self.n_node * self.n_cli + self.ex_node
    }
}

/// Sampler settings; the seed of every solve is derived per instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealSettings {
    pub num_reads: usize,
    pub sweeps_per_read: usize,
    pub beta_initial: f64,
    pub beta_final: f64,
}

impl Default for AnnealSettings {
    fn default() -> Self {
        AnnealSettings::from(&AnnealConfig::acceptance(0))
    }
}

impl From<&AnnealConfig> for AnnealSettings {
    fn from(c: &AnnealConfig) -> Self {
        AnnealSettings {
            num_reads: c.num_reads,
            sweeps_per_read: c.sweeps_per_read,
            beta_initial: c.beta_initial,
            beta_final: c.beta_final,
        }
    }
}

impl AnnealSettings {
    /// Short, low-budget anneals that leave room for suboptimal answers on
    /// 40-node instances.
    pub fn desk() -> Self {
        AnnealSettings {
            num_reads: 4,
            sweeps_per_read: 12,
            beta_initial: 0.05,
            beta_final: 3.0,
        }
    }

    pub fn config(&self, rng_seed: u64) -> AnnealConfig {
        AnnealConfig {
            num_reads: self.num_reads,
            sweeps_per_read: self.sweeps_per_read,
            beta_initial: self.beta_initial,
            beta_final: self.beta_final,
            rng_seed,
        }
    }
}

fn default_alphas() -> Vec<f64> {
    vec![0.05, 0.1, 0.2]
}

fn default_max_nodes() -> usize {
    EMBEDDING_LIMIT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    pub master_seed: u64,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// Replacement budget per group; defaults to three times its replicates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_null_replacements: Option<usize>,
    /// Largest instance the sampler accepts (at most the embedding limit).
    #[serde(default = "default_max_nodes")]
    pub max_nodes: usize,
    #[serde(default)]
    pub anneal: AnnealSettings,
    pub groups: Vec<GroupSpec>,
}

/// Clique size and external nodes for one clique at ratio `r` in `d_g` nodes.
fn single_clique_group(label: String, replicates: usize, r: f64, d_g: usize) -> GroupSpec {
    let c = clique_size_for_ratio(r, d_g);
    GroupSpec::new(label, replicates, c, d_g - c, 1)
}

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let plan: ExperimentPlan = toml::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plans always serialize")
    }

    pub fn budget_for(&self, group: &GroupSpec) -> usize {
        self.max_null_replacements.unwrap_or(3 * group.replicates)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Plan(m));
        if self.groups.is_empty() {
            return bad("plan has no groups".into());
        }
        if self.max_nodes == 0 || self.max_nodes > EMBEDDING_LIMIT {
            return bad(format!(
                "max_nodes must lie in 1..={EMBEDDING_LIMIT}, got {}",
                self.max_nodes
            ));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
            return bad("alphas must be a non-empty list of values in (0, 1)".into());
        }
        self.anneal
            .config(0)
            .validate()
            .map_err(|e| HarnessError::Plan(e.to_string()))?;
        let mut labels = BTreeSet::new();
        for g in &self.groups {
            if !labels.insert(g.label.as_str()) {
                return bad(format!("duplicate group label `{}`", g.label));
            }
            if g.label.is_empty() || g.label.contains([',', '\n', '"']) {
                return bad(format!(
                    "group label `{}` must be non-empty without commas or quotes",
                    g.label
                ));
            }
            if g.replicates < 1 {
                return bad(format!("group `{}` needs at least 1 replicate", g.label));
            }
            g.recipe(0)
                .validate()
                .map_err(|e| HarnessError::Plan(format!("group `{}`: {e}", g.label)))?;
            if g.final_dim() > self.max_nodes {
                return bad(format!(
                    "group `{}` has {} nodes, above the {}-node limit",
                    g.label,
                    g.final_dim(),
                    self.max_nodes
                ));
            }
        }
        Ok(())
    }

    /// Built-in desk-scale plan for each experiment kind.
    pub fn desk(kind: ExperimentKind, master_seed: u64) -> Self {
        let groups = match kind {
            // seven ratio levels, one clique, 40 nodes
            ExperimentKind::RatioSweep => [0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0]
                .iter()
                .enumerate()
                .map(|(i, &r)| single_clique_group(format!("G{}", i + 1), 6, r, 40))
                .collect(),
            // ratio 0.42 at increasing external-link density
            ExperimentKind::DensitySweep => [0.05, 0.15, 0.3, 0.5, 0.8]
                .iter()
                .map(|&p| GroupSpec {
                    intra_edge_pct: p,
                    ..single_clique_group(format!("P{p:.2}"), 6, 0.42, 40)
                })
                .collect(),
            // a clique of 30% of the nodes, sparse and dense surroundings
            ExperimentKind::IndicesStudy => [0.1, 0.5]
                .iter()
                .map(|&p| GroupSpec {
                    intra_edge_pct: p,
                    ..GroupSpec::new(format!("P{p:.2}"), 10, 12, 28, 1)
                })
                .collect(),
            // ratio 0.42 with 1, 2 and 3 planted cliques of equal size
            ExperimentKind::CliqueCount => (1..=3)
                .map(|k| {
                    let c = clique_size_for_ratio(0.42, 40);
                    GroupSpec {
                        add_edges: k > 1,
                        ..GroupSpec::new(format!("C{k}"), 11, c, 40 - k * c, k)
                    }
                })
                .collect(),
            // growing sizes up to the embedding limit
            ExperimentKind::SizeStudy => [(121, 0.42), (143, 0.42), (164, 0.42), (164, 1.0)]
                .iter()
                .map(|&(d, r)| single_clique_group(format!("N{d}-R{r:.2}"), 6, r, d))
                .collect(),
        };
        ExperimentPlan {
            kind,
            master_seed,
            alphas: default_alphas(),
            max_null_replacements: None,
            max_nodes: EMBEDDING_LIMIT,
            anneal: AnnealSettings::desk(),
            groups,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_plans_are_valid() {
        for kind in ExperimentKind::ALL {
            let plan = ExperimentPlan::desk(kind, 1);
            plan.validate().unwrap();
            assert_eq!(plan.kind, kind);
            assert_eq!(ExperimentPlan::from_toml(&plan.to_toml()).unwrap(), plan);
        }
    }

    #[test]
    fn ratio_sweep_shape() {
        let plan = ExperimentPlan::desk(ExperimentKind::RatioSweep, 1);
        assert_eq!(plan.groups.len(), 7);
        let sizes: Vec<usize> = plan.groups.iter().map(|g| g.n_node).collect();
        assert_eq!(sizes, vec![4, 8, 11, 14, 16, 18, 20]);
        assert!(plan
            .groups
            .iter()
            .all(|g| g.final_dim() == 40 && g.replicates == 6));
    }

    #[test]
    fn clique_count_shape() {
        let plan = ExperimentPlan::desk(ExperimentKind::CliqueCount, 1);
        let dims: Vec<(usize, usize, usize)> = plan
            .groups
            .iter()
            .map(|g| (g.n_node, g.n_cli, g.final_dim()))
            .collect();
        assert_eq!(dims, vec![(12, 1, 40), (12, 2, 40), (12, 3, 40)]);
    }

    #[test]
    fn validation_errors() {
        let mut plan = ExperimentPlan::desk(ExperimentKind::RatioSweep, 1);
        plan.groups[1].label = plan.groups[0].label.clone();
        assert!(plan.validate().is_err());

        let mut plan = ExperimentPlan::desk(ExperimentKind::RatioSweep, 1);
        plan.groups[0].ex_node = 200;
        assert!(matches!(plan.validate(), Err(HarnessError::Plan(_))));

        let mut plan = ExperimentPlan::desk(ExperimentKind::RatioSweep, 1);
        plan.groups[0].replicates = 0;
        assert!(plan.validate().is_err());

        let mut plan = ExperimentPlan::desk(ExperimentKind::RatioSweep, 1);
        plan.alphas = vec![0.0];
        assert!(plan.validate().is_err());

        assert!(matches!(
            ExperimentPlan::from_toml("kind = \"nope\""),
            Err(HarnessError::PlanSyntax(_))
        ));
    }

    #[test]
    fn minimal_plan_uses_defaults() {
        let plan = ExperimentPlan::from_toml(
            r#"
kind = "ratio_sweep"
master_seed = 5

[[groups]]
label = "A"
replicates = 2
n_node = 5
"#,
        )
        .unwrap();
        assert_eq!(plan.alphas, vec![0.05, 0.1, 0.2]);
        assert_eq!(plan.max_nodes, 164);
        assert_eq!(plan.anneal, AnnealSettings::default());
        assert_eq!(plan.groups[0].n_cli, 1);
        assert_eq!(plan.budget_for(&plan.groups[0]), 6);
    }
}

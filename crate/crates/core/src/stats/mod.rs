//! Statistical battery for comparing groups of solution-quality samples:
//! Cochran's C, Shapiro–Wilk, one-way ANOVA with least-significant-difference
//! post-hoc, Kruskal–Wallis and pairwise Mann–Whitney.
//!
//! Every test reports a p-value (except the LSD matrix, which compares mean
//! differences against a threshold) and a decision at the requested alpha.

mod nonparametric;
mod parametric;
mod shapiro;

pub use nonparametric::{
    kruskal_wallis, mann_whitney_exact_cdf, mann_whitney_u, mann_whitney_u_with, pairwise_mw_matrix,
    MannWhitneyMethod,
};
pub use parametric::{anova_oneway, anova_table, cochran_c, lsd_pairwise, AnovaTable};
pub use shapiro::shapiro_wilk;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least 2 groups, got {0}")]
    TooFewGroups(usize),
    #[error("group `{label}` has {size} values, need at least {min}")]
    GroupTooSmall { label: String, size: usize, min: usize },
    #[error("non-finite value in group `{0}`")]
    NonFinite(String),
    #[error("group labels must be unique (`{0}` repeated)")]
    DuplicateLabel(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("unsupported design: {0}")]
    UnsupportedDesign(String),
    #[error("sample size {0} outside the supported range")]
    UnsupportedSize(usize),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("empty sample")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cochran,
    ShapiroWilk,
    Anova,
    Lsd,
    KruskalWallis,
    MannWhitney,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Cochran => "cochran",
            Method::ShapiroWilk => "shapiro_wilk",
            Method::Anova => "anova",
            Method::Lsd => "lsd",
            Method::KruskalWallis => "kruskal_wallis",
            Method::MannWhitney => "mann_whitney",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub method: Method,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub alpha: f64,
    pub reject_null: bool,
}

impl TestOutcome {
    pub(crate) fn from_p(method: Method, statistic: f64, p_value: f64, alpha: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestOutcome {
            method,
            statistic,
            p_value: Some(p_value),
            alpha,
            reject_null: p_value < alpha,
        }
    }

    /// Same statistic and p-value, decided at another alpha.
    pub fn at_alpha(&self, alpha: f64) -> Self {
        TestOutcome {
            alpha,
            reject_null: self.p_value.is_some_and(|p| p < alpha),
            ..self.clone()
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(StatsError::InvalidAlpha(alpha))
    }
}

/// Labeled groups of finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedSamples {
    groups: Vec<(String, Vec<f64>)>,
}

impl GroupedSamples {
    pub fn new<L: Into<String>>(groups: Vec<(L, Vec<f64>)>) -> Result<Self, StatsError> {
        let groups: Vec<(String, Vec<f64>)> = groups.into_iter().map(|(l, v)| (l.into(), v)).collect();
        if groups.len() < 2 {
            return Err(StatsError::TooFewGroups(groups.len()));
        }
        for (i, (label, values)) in groups.iter().enumerate() {
            if groups[..i].iter().any(|(l, _)| l == label) {
                return Err(StatsError::DuplicateLabel(label.clone()));
            }
            if values.is_empty() {
                return Err(StatsError::GroupTooSmall {
                    label: label.clone(),
                    size: 0,
                    min: 1,
                });
            }
            if values.iter().any(|x| !x.is_finite()) {
                return Err(StatsError::NonFinite(label.clone()));
            }
        }
        Ok(GroupedSamples { groups })
    }

    /// Groups labeled `G1`, `G2`, ...
    pub fn unlabeled(groups: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        Self::new(
            groups
                .into_iter()
                .enumerate()
                .map(|(i, g)| (format!("G{}", i + 1), g))
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.groups.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn groups(&self) -> &[(String, Vec<f64>)] {
        &self.groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|(_, v)| v.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(|(_, v)| v.len()).sum()
    }

    pub(crate) fn require_min_size(&self, min: usize) -> Result<(), StatsError> {
        match self.groups.iter().find(|(_, v)| v.len() < min) {
            Some((label, v)) => Err(StatsError::GroupTooSmall {
                label: label.clone(),
                size: v.len(),
                min,
            }),
            None => Ok(()),
        }
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance (denominator `n - 1`).
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64
}

/// 1-based ranks with ties sharing the average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank ((i+1) + j) / 2
        let r = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = r;
        }
        i = j;
    }
    ranks
}

/// `sum(t^3 - t)` over tie groups.
pub fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .chunk_by(|a, b| a == b)
        .map(|c| {
            let t = c.len() as f64;
            t * t * t - t
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    NoSignificantDifference,
    SignificantDifference,
}

impl Cell {
    pub fn symbol(self) -> &'static str {
        match self {
            Cell::NoSignificantDifference => "✓",
            Cell::SignificantDifference => "X",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCell {
    pub decision: Cell,
    /// Mann–Whitney p-value, or `|mean_i - mean_j|` for LSD.
    pub value: f64,
    /// LSD threshold for this pair (LSD matrices only).
    pub threshold: Option<f64>,
}

/// Upper-triangular pairwise decisions; `cell(i, j)` is defined for `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMatrix {
    pub method: Method,
    pub labels: Vec<String>,
    pub alpha: f64,
    cells: Vec<Vec<PairCell>>,
}

impl PairwiseMatrix {
    pub(crate) fn build(
        method: Method,
        labels: Vec<String>,
        alpha: f64,
        mut cell: impl FnMut(usize, usize) -> PairCell,
    ) -> Self {
        let k = labels.len();
        let cells = (0..k).map(|i| (i + 1..k).map(|j| cell(i, j)).collect()).collect();
        PairwiseMatrix {
            method,
            labels,
            alpha,
            cells,
        }
    }

    /// Symmetric access; `None` on the diagonal.
    pub fn cell(&self, i: usize, j: usize) -> Option<&PairCell> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b || b >= self.labels.len() {
            return None;
        }
        Some(&self.cells[a][b - a - 1])
    }

    pub fn decision(&self, i: usize, j: usize) -> Option<Cell> {
        self.cell(i, j).map(|c| c.decision)
    }

    pub fn significant_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.labels.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| self.decision(i, j) == Some(Cell::SignificantDifference))
            .collect()
    }

    pub fn title(&self) -> String {
        match self.method {
            Method::Lsd => format!("LSD alpha={}", self.alpha),
            Method::MannWhitney => format!("MW alpha={}", self.alpha),
            m => format!("{} alpha={}", m.name(), self.alpha),
        }
    }

    /// Aligned text panel: rows are the first `k-1` labels, columns the last
    /// `k-1`; `✓` means no significant difference, `X` a significant one.
    pub fn render_text(&self) -> String {
        let k = self.labels.len();
        let title = self.title();
        let col_w = self
            .labels
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(1)
            .max(1);
        let head_w = title
            .chars()
            .count()
            .max(self.labels.iter().map(|l| l.chars().count()).max().unwrap_or(0));
        let mut out = String::new();
        let _ = write!(out, "{title:<head_w$}");
        for label in &self.labels[1..] {
            let _ = write!(out, " | {label:^col_w$}");
        }
        out.push('\n');
        for i in 0..k.saturating_sub(1) {
            let mut line = format!("{:<head_w$}", self.labels[i]);
            for j in 1..k {
                let sym = if j > i {
                    self.decision(i, j).map_or("", |c| c.symbol())
                } else {
                    ""
                };
                let _ = write!(line, " | {sym:^col_w$}");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// `method,alpha,group_a,group_b,decision,value,threshold` rows, no header.
    pub fn csv_rows(&self) -> Vec<String> {
        let k = self.labels.len();
        let mut rows = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let c = self.cell(i, j).expect("upper triangle");
                rows.push(format!(
                    "{},{},{},{},{},{},{}",
                    self.method.name(),
                    self.alpha,
                    self.labels[i],
                    self.labels[j],
                    match c.decision {
                        Cell::NoSignificantDifference => "no_significant_difference",
                        Cell::SignificantDifference => "significant_difference",
                    },
                    c.value,
                    c.threshold.map(|t| t.to_string()).unwrap_or_default()
                ));
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[5.0, 5.0, 5.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(tie_term(&[1.0, 2.0, 2.0, 3.0, 3.0, 3.0]), 6.0 + 24.0);
    }

    #[test]
    fn grouped_samples_validation() {
        assert_eq!(
            GroupedSamples::new(vec![("a", vec![1.0])]).unwrap_err(),
            StatsError::TooFewGroups(1)
        );
        assert!(GroupedSamples::new(vec![("a", vec![1.0]), ("a", vec![2.0])]).is_err());
        assert!(GroupedSamples::new(vec![("a", vec![1.0]), ("b", vec![f64::NAN])]).is_err());
        assert!(GroupedSamples::new(vec![("a", vec![1.0]), ("b", vec![])]).is_err());
        let gs = GroupedSamples::unlabeled(vec![vec![1.0, 2.0], vec![3.0]]).unwrap();
        assert_eq!(gs.labels(), vec!["G1", "G2"]);
        assert_eq!(gs.total(), 3);
    }

    #[test]
    fn matrix_rendering() {
        let labels: Vec<String> = ["G1", "G2", "G3"].iter().map(|s| s.to_string()).collect();
        let m = PairwiseMatrix::build(Method::MannWhitney, labels, 0.05, |i, j| PairCell {
            decision: if i == 0 && j == 2 {
                Cell::SignificantDifference
            } else {
                Cell::NoSignificantDifference
            },
            value: 0.5,
            threshold: None,
        });
        assert_eq!(m.significant_pairs(), vec![(0, 2)]);
        assert_eq!(m.decision(2, 0), Some(Cell::SignificantDifference));
        assert_eq!(m.decision(1, 1), None);
        let text = m.render_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "MW alpha=0.05 | G2 | G3");
        assert_eq!(lines[1], "G1            | ✓  | X");
        assert_eq!(lines[2], "G2            |    | ✓");
        assert_eq!(m.csv_rows().len(), 3);
    }
}

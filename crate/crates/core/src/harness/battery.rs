use serde::{Deserialize, Serialize};

use crate::stats::{
    anova_oneway, cochran_c, kruskal_wallis, lsd_pairwise, pairwise_mw_matrix, shapiro_wilk, GroupedSamples,
    MannWhitneyMethod, Method, PairwiseMatrix, StatsError, TestOutcome,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepResult {
    Outcome(TestOutcome),
    /// The test could not run on this data (reason given).
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub method: Method,
    /// Set for per-group tests (Shapiro–Wilk).
    pub group: Option<String>,
    pub alpha: f64,
    pub result: StepResult,
}

/// A pairwise matrix plus whether its omnibus test rejected at that alpha.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub matrix: PairwiseMatrix,
    pub omnibus_rejected: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    /// In battery order: Cochran, Shapiro–Wilk per group, ANOVA, Kruskal–Wallis;
    /// each repeated for every alpha.
    pub rows: Vec<StatRow>,
    pub lsd_panels: Vec<Panel>,
    pub mw_panels: Vec<Panel>,
    pub notes: Vec<String>,
}

impl StatsReport {
    pub fn outcome(&self, method: Method, alpha: f64) -> Option<&TestOutcome> {
        self.rows.iter().find_map(|r| match &r.result {
            StepResult::Outcome(o) if r.method == method && r.alpha == alpha && r.group.is_none() => Some(o),
            _ => None,
        })
    }
}

fn rows_for(
    method: Method,
    group: Option<&str>,
    alphas: &[f64],
    result: Result<TestOutcome, StatsError>,
) -> Vec<StatRow> {
    alphas
        .iter()
        .map(|&alpha| StatRow {
            method,
            group: group.map(str::to_string),
            alpha,
            result: match &result {
                Ok(o) => StepResult::Outcome(o.at_alpha(alpha)),
                Err(e) => StepResult::Note(e.to_string()),
            },
        })
        .collect()
}

fn rejected(result: &Result<TestOutcome, StatsError>, alpha: f64) -> bool {
    result.as_ref().is_ok_and(|o| o.at_alpha(alpha).reject_null)
}

/// Runs Cochran, Shapiro–Wilk per group, ANOVA with LSD, and Kruskal–Wallis
/// with pairwise Mann–Whitney. Post-hoc matrices are produced at every alpha
/// and marked with whether the omnibus test rejected there. Failures become
/// notes rather than errors.
pub fn statistical_battery(samples: &[(String, Vec<f64>)], alphas: &[f64]) -> StatsReport {
    let mut report = StatsReport::default();
    let gs = match GroupedSamples::new(samples.to_vec()) {
        Ok(gs) => gs,
        Err(e) => {
            report.notes.push(format!("statistics skipped: {e}"));
            return report;
        }
    };
    let first = alphas.first().copied().unwrap_or(0.05);

    report
        .rows
        .extend(rows_for(Method::Cochran, None, alphas, cochran_c(&gs, first)));
    for (label, values) in gs.groups() {
        report.rows.extend(rows_for(
            Method::ShapiroWilk,
            Some(label),
            alphas,
            shapiro_wilk(values, first),
        ));
    }

    let anova = anova_oneway(&gs, first);
    report
        .rows
        .extend(rows_for(Method::Anova, None, alphas, anova.clone()));
    for &alpha in alphas {
        match lsd_pairwise(&gs, alpha) {
            Ok(matrix) => report.lsd_panels.push(Panel {
                matrix,
                omnibus_rejected: rejected(&anova, alpha),
            }),
            Err(e) => report.notes.push(format!("LSD at alpha={alpha}: {e}")),
        }
    }

    let kw = kruskal_wallis(&gs, first);
    report
        .rows
        .extend(rows_for(Method::KruskalWallis, None, alphas, kw.clone()));
    match pairwise_mw_matrix(&gs, alphas, MannWhitneyMethod::Auto) {
        Ok(ms) => report.mw_panels.extend(ms.into_iter().map(|matrix| Panel {
            omnibus_rejected: rejected(&kw, matrix.alpha),
            matrix,
        })),
        Err(e) => report.notes.push(format!("Mann–Whitney matrices: {e}")),
    }

    for row in &report.rows {
        if let (StepResult::Note(n), true) = (&row.result, row.alpha == first) {
            let who = row
                .group
                .as_deref()
                .map(|g| format!(" ({g})"))
                .unwrap_or_default();
            report.notes.push(format!("{}{who}: {n}", row.method.name()));
        }
    }
    report
}

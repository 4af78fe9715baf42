use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::stats::{mean, sample_variance, Cell};

use super::battery::{Panel, StatsReport, StepResult};
use super::plan::ExperimentKind;
use super::run::{ExperimentReport, GroupResult};
use super::HarnessError;

pub const REPORT_FILES: [&str; 4] = ["runs.jsonl", "stats.csv", "matrices.txt", "summary.txt"];

const STATS_HEADER: &str = "method,group,alpha,statistic,p_value,reject_null,note";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per test outcome and alpha, then one row per pairwise cell.
pub fn render_stats_csv(stats: &StatsReport) -> String {
    let mut out = String::from(STATS_HEADER);
    out.push('\n');
    for row in &stats.rows {
        let group = row.group.as_deref().unwrap_or("");
        match &row.result {
            StepResult::Outcome(o) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},",
                    row.method.name(),
                    csv_field(group),
                    row.alpha,
                    o.statistic,
                    opt(o.p_value),
                    o.reject_null
                );
            }
            StepResult::Note(n) => {
                let _ = writeln!(
                    out,
                    "{},{},{},,,,{}",
                    row.method.name(),
                    csv_field(group),
                    row.alpha,
                    csv_field(n)
                );
            }
        }
    }
    for panel in stats.lsd_panels.iter().chain(&stats.mw_panels) {
        let m = &panel.matrix;
        let k = m.labels.len();
        for i in 0..k {
            for j in i + 1..k {
                let c = m.cell(i, j).expect("upper triangle");
                let significant = c.decision == Cell::SignificantDifference;
                let (statistic, p, note) = match c.threshold {
                    Some(t) => (c.value.to_string(), String::new(), format!("threshold={t}")),
                    None => (String::new(), c.value.to_string(), String::new()),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    m.method.name(),
                    csv_field(&format!("{} vs {}", m.labels[i], m.labels[j])),
                    m.alpha,
                    statistic,
                    p,
                    significant,
                    note
                );
            }
        }
    }
    out
}

fn render_panel(out: &mut String, panel: &Panel, omnibus: &str) {
    out.push_str(&panel.matrix.render_text());
    if !panel.omnibus_rejected {
        let _ = writeln!(out, "({omnibus} did not reject at alpha={})", panel.matrix.alpha);
    }
    out.push('\n');
}

/// Pairwise panels: `✓` no significant difference, `X` significant.
pub fn render_matrices(stats: &StatsReport) -> String {
    let mut out =
        String::from("# Pairwise comparisons: ✓ = no significant difference, X = significant difference\n\n");
    for p in &stats.lsd_panels {
        render_panel(&mut out, p, "ANOVA");
    }
    for p in &stats.mw_panels {
        render_panel(&mut out, p, "Kruskal-Wallis");
    }
    out
}

fn fmt6(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        "-".to_string()
    }
}

fn group_line(g: &GroupResult) -> String {
    let q = g.qualities();
    let mean_q = if q.is_empty() { f64::NAN } else { mean(&q) };
    let var_q = if q.len() >= 2 {
        sample_variance(&q)
    } else {
        f64::NAN
    };
    let densities: Vec<f64> = g.records.iter().filter_map(|r| r.density).collect();
    let mean_density = if densities.is_empty() {
        f64::NAN
    } else {
        mean(&densities)
    };
    let ratio = g.records.first().and_then(|r| r.ratio).unwrap_or(f64::NAN);
    let checked = g
        .records
        .iter()
        .filter(|r| r.oracle_clique_size.is_some())
        .count();
    let agree = g
        .records
        .iter()
        .filter(|r| r.oracle_clique_size == Some(r.outcome.repaired_set.len()))
        .count();
    let null_rate = g.null_count() as f64 / g.generated() as f64;
    format!(
        "{:<10} {:>3} {:>12} {:>12} {:>9} {:>5} {:>8} {:>9} {:>9} {:>10} {:>12} {:>9} {:>7}/{:<7}",
        g.label,
        q.len(),
        fmt6(mean_q),
        fmt6(var_q),
        g.generated(),
        g.null_count(),
        g.replacements,
        g.records.iter().filter(|r| r.is_null()).count(),
        fmt6(null_rate),
        if g.incomplete { "yes" } else { "no" },
        fmt6(mean_density),
        fmt6(ratio),
        agree,
        checked
    )
}

fn indices_section(out: &mut String, report: &ExperimentReport) {
    let records: Vec<_> = report.groups.iter().flat_map(|g| &g.records).collect();
    let optimal: Vec<_> = records.iter().filter(|r| r.quality >= 1.0).collect();
    let other: Vec<_> = records.iter().filter(|r| r.quality < 1.0).collect();
    let _ = writeln!(
        out,
        "\nconnectivity indices: optimal ({}) vs suboptimal or null ({}) instances",
        optimal.len(),
        other.len()
    );
    type Field = fn(&crate::indices::ConnectivityIndices) -> f64;
    let fields: [(&str, Field); 11] = [
        ("degree_mean", |i| i.degree_mean),
        ("degree_variance", |i| i.degree_variance),
        ("eccentricity_min", |i| i.eccentricity_min as f64),
        ("eccentricity_max", |i| i.eccentricity_max as f64),
        ("center_size", |i| i.center_size as f64),
        ("periphery_size", |i| i.periphery_size as f64),
        ("centralization", |i| i.centralization),
        ("closeness_mean", |i| i.closeness_mean),
        ("closeness_variance", |i| i.closeness_variance),
        ("betweenness_mean", |i| i.betweenness_mean),
        ("betweenness_variance", |i| i.betweenness_variance),
    ];
    let _ = writeln!(
        out,
        "{:<22} {:>12} {:>12} {:>12}",
        "index", "optimal", "other", "difference"
    );
    for (name, f) in fields {
        let avg = |rs: &[&&super::RunRecord]| -> f64 {
            let v: Vec<f64> = rs.iter().filter_map(|r| r.indices.as_ref().map(f)).collect();
            if v.is_empty() {
                f64::NAN
            } else {
                mean(&v)
            }
        };
        let (a, b) = (avg(&optimal), avg(&other));
        let _ = writeln!(
            out,
            "{:<22} {:>12} {:>12} {:>12}",
            name,
            fmt6(a),
            fmt6(b),
            fmt6(a - b)
        );
    }
}

pub fn render_summary(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let plan = &report.plan;
    let _ = writeln!(out, "experiment: {}", plan.kind);
    let _ = writeln!(out, "master_seed: {}", plan.master_seed);
    let _ = writeln!(
        out,
        "anneal: reads={} sweeps={} beta={}..{}",
        plan.anneal.num_reads, plan.anneal.sweeps_per_read, plan.anneal.beta_initial, plan.anneal.beta_final
    );
    let _ = writeln!(
        out,
        "alphas: {}",
        plan.alphas
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(out, "groups: {}\n", report.groups.len());
    let _ = writeln!(
        out,
        "{:<10} {:>3} {:>12} {:>12} {:>9} {:>5} {:>8} {:>9} {:>9} {:>10} {:>12} {:>9} {:>15}",
        "group",
        "n",
        "mean_quality",
        "var_quality",
        "generated",
        "nulls",
        "replaced",
        "exhausted",
        "null_rate",
        "incomplete",
        "mean_density",
        "ratio",
        "oracle_optimal"
    );
    for g in &report.groups {
        out.push_str(group_line(g).trim_end());
        out.push('\n');
    }
    if plan.kind == ExperimentKind::IndicesStudy && !report.groups.is_empty() {
        indices_section(&mut out, report);
    }
    let notes: Vec<&String> = report.notes.iter().chain(&report.stats.notes).collect();
    if !notes.is_empty() {
        out.push_str("\nnotes:\n");
        for n in notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, HarnessError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| HarnessError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes `runs.jsonl`, `stats.csv`, `matrices.txt` and `summary.txt` into `dir`.
pub fn report_render(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut runs = String::new();
    for r in report.all_records() {
        runs.push_str(&serde_json::to_string(r).expect("records serialize"));
        runs.push('\n');
    }
    Ok(vec![
        write(dir, REPORT_FILES[0], &runs)?,
        write(dir, REPORT_FILES[1], &render_stats_csv(&report.stats))?,
        write(dir, REPORT_FILES[2], &render_matrices(&report.stats))?,
        write(dir, REPORT_FILES[3], &render_summary(report))?,
    ])
}

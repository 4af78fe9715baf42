use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, FisherSnedecor, StudentsT};

use super::{
    check_alpha, mean, sample_variance, Cell, GroupedSamples, Method, PairCell, PairwiseMatrix, StatsError,
    TestOutcome,
};

/// Cochran's C for homogeneity of variances: the largest group variance
/// over the sum of variances. Requires equal group sizes of at least 2.
///
/// The p-value is the Bonferroni bound `k * P(B > C)` with
/// `B ~ Beta((n-1)/2, (k-1)(n-1)/2)`, capped at 1.
pub fn cochran_c(gs: &GroupedSamples, alpha: f64) -> Result<TestOutcome, StatsError> {
    check_alpha(alpha)?;
    gs.require_min_size(2)?;
    let sizes = gs.sizes();
    let n = sizes[0];
    if sizes.iter().any(|&s| s != n) {
        return Err(StatsError::UnsupportedDesign(
            "Cochran's C needs equal group sizes".into(),
        ));
    }
    let vars: Vec<f64> = gs.groups().iter().map(|(_, v)| sample_variance(v)).collect();
    let total: f64 = vars.iter().sum();
    if total <= 0.0 {
        return Err(StatsError::Degenerate("every group has zero variance".into()));
    }
    let max = vars.iter().copied().fold(f64::MIN, f64::max);
    // 1 / sum(v_i / v_max): equal variances give exactly 1/k
    let c = 1.0 / vars.iter().map(|v| v / max).sum::<f64>();
    let k = gs.k() as f64;
    let nu = (n - 1) as f64;
    let beta = Beta::new(nu / 2.0, (k - 1.0) * nu / 2.0).expect("positive shape parameters");
    let p = (k * beta.sf(c)).min(1.0);
    Ok(TestOutcome::from_p(Method::Cochran, c, p, alpha))
}

/// One-way ANOVA sums of squares and mean squares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaTable {
    pub ss_between: f64,
    pub ss_within: f64,
    pub ss_total: f64,
    pub df_between: usize,
    pub df_within: usize,
    /// Mean square between groups (treatment).
    pub mqf: f64,
    /// Mean square within groups (error).
    pub mqe: f64,
    pub group_means: Vec<f64>,
}

pub fn anova_table(gs: &GroupedSamples) -> Result<AnovaTable, StatsError> {
    gs.require_min_size(2)?;
    let k = gs.k();
    let big_n = gs.total();
    let sizes = gs.sizes();
    let means: Vec<f64> = gs.groups().iter().map(|(_, v)| mean(v)).collect();
    // pairwise form: exactly zero whenever all group means coincide
    let mut ss_between = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            ss_between += (sizes[i] * sizes[j]) as f64 * (means[i] - means[j]).powi(2);
        }
    }
    ss_between /= big_n as f64;
    let ss_within: f64 = gs
        .groups()
        .iter()
        .zip(&means)
        .map(|((_, v), m)| v.iter().map(|x| (x - m).powi(2)).sum::<f64>())
        .sum();
    let all: Vec<f64> = gs.groups().iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let grand = mean(&all);
    let ss_total = all.iter().map(|x| (x - grand).powi(2)).sum();
    let df_between = k - 1;
    let df_within = big_n - k;
    Ok(AnovaTable {
        ss_between,
        ss_within,
        ss_total,
        df_between,
        df_within,
        mqf: ss_between / df_between as f64,
        mqe: ss_within / df_within as f64,
        group_means: means,
    })
}

/// One-way ANOVA, `F = MQF / MQE` against `F(k-1, N-k)`.
///
/// Zero within-group variance with distinct means gives `F = inf`, `p = 0`;
/// all values equal is reported as degenerate.
pub fn anova_oneway(gs: &GroupedSamples, alpha: f64) -> Result<TestOutcome, StatsError> {
    check_alpha(alpha)?;
    let t = anova_table(gs)?;
    if t.mqe == 0.0 {
        if t.mqf == 0.0 {
            return Err(StatsError::Degenerate("all values are equal".into()));
        }
        return Ok(TestOutcome::from_p(Method::Anova, f64::INFINITY, 0.0, alpha));
    }
    let f = t.mqf / t.mqe;
    let dist =
        FisherSnedecor::new(t.df_between as f64, t.df_within as f64).expect("positive degrees of freedom");
    Ok(TestOutcome::from_p(Method::Anova, f, dist.sf(f), alpha))
}

/// Fisher's least significant difference: pair `(i, j)` differs when
/// `|mean_i - mean_j| > t_{1-alpha/2, N-k} * sqrt(MQE (1/n_i + 1/n_j))`.
pub fn lsd_pairwise(gs: &GroupedSamples, alpha: f64) -> Result<PairwiseMatrix, StatsError> {
    check_alpha(alpha)?;
    let t = anova_table(gs)?;
    if t.mqe == 0.0 && t.mqf == 0.0 {
        return Err(StatsError::Degenerate("all values are equal".into()));
    }
    let tcrit = StudentsT::new(0.0, 1.0, t.df_within as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha / 2.0);
    let sizes = gs.sizes();
    Ok(PairwiseMatrix::build(Method::Lsd, gs.labels(), alpha, |i, j| {
        let diff = (t.group_means[i] - t.group_means[j]).abs();
        let threshold = tcrit * (t.mqe * (1.0 / sizes[i] as f64 + 1.0 / sizes[j] as f64)).sqrt();
        PairCell {
            decision: if diff > threshold {
                Cell::SignificantDifference
            } else {
                Cell::NoSignificantDifference
            },
            value: diff,
            threshold: Some(threshold),
        }
    }))
}

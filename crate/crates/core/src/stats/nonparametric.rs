use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use super::{
    average_ranks, check_alpha, tie_term, Cell, GroupedSamples, Method, PairCell, PairwiseMatrix, StatsError,
    TestOutcome,
};

/// Largest group size for which `Auto` uses the exact null distribution.
const EXACT_MAX_GROUP: usize = 8;

/// Kruskal–Wallis H with tie correction, against `chi2(k-1)`.
pub fn kruskal_wallis(gs: &GroupedSamples, alpha: f64) -> Result<TestOutcome, StatsError> {
    check_alpha(alpha)?;
    let pooled: Vec<f64> = gs.groups().iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let n = pooled.len() as f64;
    let correction = 1.0 - tie_term(&pooled) / (n * n * n - n);
    if correction <= 0.0 {
        return Err(StatsError::Degenerate("all values are tied".into()));
    }
    let ranks = average_ranks(&pooled);
    let center = (n + 1.0) / 2.0;
    let mut offset = 0;
    let mut spread = 0.0;
    for (_, v) in gs.groups() {
        let r = &ranks[offset..offset + v.len()];
        offset += v.len();
        let mean_rank = r.iter().sum::<f64>() / v.len() as f64;
        spread += v.len() as f64 * (mean_rank - center).powi(2);
    }
    let h = 12.0 / (n * (n + 1.0)) * spread / correction;
    let dist = ChiSquared::new((gs.k() - 1) as f64).expect("positive degrees of freedom");
    Ok(TestOutcome::from_p(Method::KruskalWallis, h, dist.sf(h), alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MannWhitneyMethod {
    /// Exact when both samples have at most 8 values and there are no ties,
    /// otherwise the normal approximation with continuity correction.
    #[default]
    Auto,
    Exact,
    Asymptotic {
        continuity: bool,
    },
}

/// Number of arrangements of sizes `(m, n)` with each `U` value, `U = 0..=m*n`.
fn mw_counts(m: usize, n: usize) -> Vec<f64> {
    // table[a][b] holds the count vector for sizes (a, b)
    let mut table: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); n + 1]; m + 1];
    for a in 0..=m {
        for b in 0..=n {
            table[a][b] = if a == 0 || b == 0 {
                vec![1.0]
            } else {
                let mut c = vec![0.0; a * b + 1];
                // largest of the pooled values belongs to the first sample
                // (adds b to U) or to the second (adds nothing)
                for (u, &cnt) in table[a - 1][b].iter().enumerate() {
                    c[u + b] += cnt;
                }
                for (u, &cnt) in table[a][b - 1].iter().enumerate() {
                    c[u] += cnt;
                }
                c
            };
        }
    }
    std::mem::take(&mut table[m][n])
}

/// `P(U <= u)` under the null for sample sizes `n_a`, `n_b` without ties.
pub fn mann_whitney_exact_cdf(u: f64, n_a: usize, n_b: usize) -> f64 {
    let counts = mw_counts(n_a, n_b);
    let total: f64 = counts.iter().sum();
    let below: f64 = counts
        .iter()
        .enumerate()
        .take_while(|(k, _)| *k as f64 <= u + 1e-9)
        .map(|(_, c)| c)
        .sum();
    below / total
}

/// Two-sided Mann–Whitney U test; the statistic is `min(U_a, U_b)`.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alpha: f64) -> Result<TestOutcome, StatsError> {
    mann_whitney_u_with(a, b, alpha, MannWhitneyMethod::Auto)
}

pub fn mann_whitney_u_with(
    a: &[f64],
    b: &[f64],
    alpha: f64,
    method: MannWhitneyMethod,
) -> Result<TestOutcome, StatsError> {
    check_alpha(alpha)?;
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite("sample".into()));
    }
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let r_a: f64 = ranks[..na].iter().sum();
    let nab = (na * nb) as f64;
    let u_a = nab + (na * (na + 1)) as f64 / 2.0 - r_a;
    let u = u_a.min(nab - u_a);
    let ties = tie_term(&pooled);

    let exact = match method {
        MannWhitneyMethod::Exact => true,
        MannWhitneyMethod::Asymptotic { .. } => false,
        MannWhitneyMethod::Auto => na <= EXACT_MAX_GROUP && nb <= EXACT_MAX_GROUP && ties == 0.0,
    };
    let p = if exact {
        2.0 * mann_whitney_exact_cdf(u, na, nb)
    } else {
        let continuity = !matches!(method, MannWhitneyMethod::Asymptotic { continuity: false });
        let n = (na + nb) as f64;
        let sigma = (nab / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)))).sqrt();
        if sigma <= 0.0 || !sigma.is_finite() {
            1.0
        } else {
            let mut num = (u - nab / 2.0).abs();
            if continuity {
                num = (num - 0.5).max(0.0);
            }
            2.0 * Normal::new(0.0, 1.0).expect("standard normal").sf(num / sigma)
        }
    };
    Ok(TestOutcome::from_p(Method::MannWhitney, u, p, alpha))
}

/// Mann–Whitney for every pair of groups, one matrix per alpha. P-values
/// are computed once per pair and reused across alphas.
pub fn pairwise_mw_matrix(
    gs: &GroupedSamples,
    alphas: &[f64],
    method: MannWhitneyMethod,
) -> Result<Vec<PairwiseMatrix>, StatsError> {
    for &alpha in alphas {
        check_alpha(alpha)?;
    }
    let k = gs.k();
    let groups = gs.groups();
    let mut p = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let out = mann_whitney_u_with(&groups[i].1, &groups[j].1, 0.5, method)?;
            p[i][j] = out.p_value.expect("MW always yields a p-value");
        }
    }
    Ok(alphas
        .iter()
        .map(|&alpha| {
            PairwiseMatrix::build(Method::MannWhitney, gs.labels(), alpha, |i, j| PairCell {
                decision: if p[i][j] < alpha {
                    Cell::SignificantDifference
                } else {
                    Cell::NoSignificantDifference
                },
                value: p[i][j],
                threshold: None,
            })
        })
        .collect())
}

mod common;

use cliquelab::stats::{
    anova_oneway, cochran_c, kruskal_wallis, lsd_pairwise, mann_whitney_u, pairwise_mw_matrix, shapiro_wilk,
    GroupedSamples, MannWhitneyMethod, StatsError,
};
use common::{close, oracle_anova, oracle_cochran, oracle_kruskal, oracle_mann_whitney, stats_reference};
use statrs::distribution::{ContinuousCDF, Normal};

#[test]
fn matches_direct_formulas_and_reference_values() {
    let reference = stats_reference();
    assert_eq!(reference.datasets.len(), 50);
    for (i, d) in reference.datasets.iter().enumerate() {
        let gs = GroupedSamples::unlabeled(d.groups.clone()).unwrap();

        let anova = anova_oneway(&gs, 0.05).unwrap();
        let (f, pf) = oracle_anova(&d.groups);
        assert!(
            close(anova.statistic, f, 1e-9) && close(anova.statistic, d.anova_f, 1e-9),
            "{i}: F"
        );
        let p = anova.p_value.unwrap();
        assert!(
            close(p, pf, 1e-9) && close(p, d.anova_p, 1e-9),
            "{i}: ANOVA p {p} vs {}",
            d.anova_p
        );

        let kw = kruskal_wallis(&gs, 0.05).unwrap();
        let (h, ph) = oracle_kruskal(&d.groups);
        assert!(
            close(kw.statistic, h, 1e-9) && close(kw.statistic, d.kruskal_h, 1e-9),
            "{i}: H"
        );
        let p = kw.p_value.unwrap();
        assert!(close(p, ph, 1e-9) && close(p, d.kruskal_p, 1e-9), "{i}: KW p");

        let mw = mann_whitney_u(&d.groups[0], &d.groups[1], 0.05).unwrap();
        let (u, pu) = oracle_mann_whitney(&d.groups[0], &d.groups[1], d.mw_method == "exact");
        assert!(
            close(mw.statistic, u, 1e-9) && close(mw.statistic, d.mw_u, 1e-9),
            "{i}: U"
        );
        let p = mw.p_value.unwrap();
        assert!(
            close(p, pu, 1e-9) && close(p, d.mw_p, 1e-9),
            "{i}: MW p {p} vs {}",
            d.mw_p
        );

        let c = cochran_c(&gs, 0.05).unwrap();
        let (cc, pc) = oracle_cochran(&d.groups);
        assert!(
            close(c.statistic, cc, 1e-9) && close(c.statistic, d.cochran_c, 1e-9),
            "{i}: C"
        );
        let p = c.p_value.unwrap();
        assert!(
            close(p, pc, 1e-9) && close(p, d.cochran_p, 1e-9),
            "{i}: Cochran p"
        );
    }
}

#[test]
fn shapiro_wilk_reference_vectors() {
    for r in stats_reference().shapiro {
        let out = shapiro_wilk(&r.values, 0.05).unwrap();
        assert!(
            (out.statistic - r.w).abs() < 1e-6,
            "n={} W {} vs {}",
            r.values.len(),
            out.statistic,
            r.w
        );
        assert!(
            (out.p_value.unwrap() - r.p).abs() < 1e-6,
            "n={} p {:?} vs {}",
            r.values.len(),
            out.p_value,
            r.p
        );
    }
}

#[test]
fn identical_groups_are_exact() {
    for k in 2..=7 {
        for n in [3usize, 4, 6, 9] {
            let g: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() * 3.0 + 0.1).collect();
            let gs = GroupedSamples::unlabeled(vec![g.clone(); k]).unwrap();
            assert_eq!(anova_oneway(&gs, 0.05).unwrap().statistic, 0.0);
            assert_eq!(cochran_c(&gs, 0.05).unwrap().statistic, 1.0 / k as f64);
            assert_eq!(kruskal_wallis(&gs, 0.05).unwrap().statistic, 0.0);
            assert_eq!(
                mann_whitney_u(&g, &g, 0.05).unwrap().statistic,
                (n * n) as f64 / 2.0
            );
        }
    }
}

#[test]
fn identical_groups_have_no_significant_pairs() {
    let g = vec![0.4, 0.7, 0.5, 0.9, 0.6];
    let gs = GroupedSamples::unlabeled(vec![g; 7]).unwrap();
    for alpha in [0.05, 0.1, 0.2] {
        let lsd = lsd_pairwise(&gs, alpha).unwrap();
        assert!(lsd.significant_pairs().is_empty());
        // k - 1 rows by k - 1 columns
        let text = lsd.render_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0].split('|').count(), 7);
    }
}

#[test]
fn perfect_normal_quantiles_look_normal() {
    let n = 10;
    let z = Normal::standard();
    let values: Vec<f64> = (1..=n)
        .map(|i| z.inverse_cdf((i as f64 - 0.375) / (n as f64 + 0.25)))
        .collect();
    let out = shapiro_wilk(&values, 0.05).unwrap();
    assert!(out.statistic > 0.98, "{}", out.statistic);
    assert!(!out.reject_null);
    assert!(matches!(
        shapiro_wilk(&[1.0; 4], 0.05),
        Err(StatsError::Degenerate(_))
    ));
}

#[test]
fn equal_means_with_unequal_spread_give_zero_f() {
    let gs = GroupedSamples::unlabeled(vec![vec![1.0, 3.0], vec![0.0, 4.0]]).unwrap();
    let out = anova_oneway(&gs, 0.05).unwrap();
    assert_eq!(out.statistic, 0.0);
    assert_eq!(out.p_value, Some(1.0));
}

#[test]
fn kruskal_wallis_three_pairs() {
    let groups = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
    let out = kruskal_wallis(&GroupedSamples::unlabeled(groups.clone()).unwrap(), 0.05).unwrap();
    let (h, p) = oracle_kruskal(&groups);
    assert!(close(out.statistic, h, 1e-12) && close(out.statistic, 32.0 / 7.0, 1e-12));
    assert!(close(out.p_value.unwrap(), p, 1e-12));
    assert!(close(p, (-16.0f64 / 7.0).exp(), 1e-12));
}

#[test]
fn only_the_separated_group_stands_out() {
    let base = [0.31, 0.42, 0.55, 0.38, 0.47, 0.50];
    let mut groups: Vec<Vec<f64>> = (0..6)
        .map(|r| (0..6).map(|i| base[(i + r) % 6]).collect())
        .collect();
    groups.push(base.iter().map(|v| v + 10.0).collect());
    let gs = GroupedSamples::unlabeled(groups).unwrap();
    let separated: Vec<(usize, usize)> = (0..6).map(|i| (i, 6)).collect();
    for alpha in [0.05, 0.1, 0.2] {
        assert!(anova_oneway(&gs, alpha).unwrap().reject_null);
        assert!(kruskal_wallis(&gs, alpha).unwrap().reject_null);
        assert_eq!(lsd_pairwise(&gs, alpha).unwrap().significant_pairs(), separated);
    }
    for m in pairwise_mw_matrix(&gs, &[0.05, 0.1, 0.2], MannWhitneyMethod::Auto).unwrap() {
        assert_eq!(m.significant_pairs(), separated);
    }
}

//! Shapiro–Wilk normality test, Royston's approximation for `3 <= n <= 5000`.

use std::f64::consts::PI;

use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_alpha, Method, StatsError, TestOutcome};

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Positive weights for the upper half of the order statistics.
fn half_weights(n: usize, std_normal: &Normal) -> Vec<f64> {
    let n2 = n / 2;
    if n == 3 {
        return vec![0.5f64.sqrt()];
    }
    let an = n as f64;
    let m: Vec<f64> = (1..=n2)
        .map(|i| std_normal.inverse_cdf((i as f64 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;
    let mut a = vec![0.0; n2];
    a[0] = a1;
    let (first_scaled, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let fac =
            ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in first_scaled..n2 {
        a[i] = -m[i] / fac;
    }
    a
}

/// Returns `(W, p)`.
fn w_and_p(values: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = values.len();
    if !(3..=5000).contains(&n) {
        return Err(StatsError::UnsupportedSize(n));
    }
    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    if x[n - 1] - x[0] <= 0.0 {
        return Err(StatsError::Degenerate("all values are equal".into()));
    }
    let std_normal = Normal::new(0.0, 1.0).expect("standard normal");
    let half = half_weights(n, &std_normal);

    let mean = x.iter().sum::<f64>() / n as f64;
    let ss_x: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    let mut dot = 0.0;
    let mut ss_a = 0.0;
    for (i, &a) in half.iter().enumerate() {
        dot += a * (x[n - 1 - i] - x[i]);
        ss_a += 2.0 * a * a;
    }
    let w = (dot * dot / (ss_a * ss_x)).min(1.0);

    if n == 3 {
        let p = (6.0 / PI) * (w.sqrt().asin() - PI / 3.0);
        return Ok((w, p.max(0.0)));
    }
    let an = n as f64;
    let mut y = (1.0 - w).ln();
    let (m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return Ok((w, 1e-99));
        }
        y = -(gamma - y).ln();
        (poly(&C3, an), poly(&C4, an).exp())
    } else {
        let ln_n = an.ln();
        (poly(&C5, ln_n), poly(&C6, ln_n).exp())
    };
    Ok((w, std_normal.sf((y - m) / s)))
}

/// Shapiro–Wilk test of one sample; rejects normality when `p < alpha`.
pub fn shapiro_wilk(values: &[f64], alpha: f64) -> Result<TestOutcome, StatsError> {
    check_alpha(alpha)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite("sample".into()));
    }
    let (w, p) = w_and_p(values)?;
    Ok(TestOutcome::from_p(Method::ShapiroWilk, w, p, alpha))
}

use super::{require, SeasonalityMethod, TestResult};
use crate::error::{Error, Result};
use crate::series::{acf_values, diff_values, TimeSeries, PERIOD};
use crate::stats;

/// Seasonality tests on the first-differenced series.
pub fn test_seasonality(s: &TimeSeries, method: SeasonalityMethod) -> Result<TestResult> {
    let x = s.values();
    require(x, 3 * PERIOD)?;
    let dy = diff_values(x);
    if stats::is_constant(&dy) {
        return Err(Error::DegenerateSample("differenced series is constant"));
    }
    Ok(match method {
        SeasonalityMethod::Qs => qs(&dy),
        SeasonalityMethod::Friedman => friedman(&dy),
        SeasonalityMethod::Welch => welch(&dy),
        SeasonalityMethod::Combined => {
            let parts = [qs(&dy), friedman(&dy), welch(&dy)];
            let votes = parts.iter().filter(|t| t.reject_at_05).count();
            // the second-smallest p-value is below alpha exactly when two reject
            let mut ps: Vec<f64> = parts.iter().map(|t| t.p_value).collect();
            ps.sort_by(f64::total_cmp);
            TestResult::new("combined", votes as f64, ps[1], false).param("votes_needed", 2.0)
        }
    })
}

/// Ljung–Box type statistic on the positive seasonal autocorrelations.
fn qs(y: &[f64]) -> TestResult {
    let n = y.len() as f64;
    let rho = acf_values(y, 2 * PERIOD);
    let (r1, r2) = (rho[PERIOD].max(0.0), rho[2 * PERIOD].max(0.0));
    let stat = if r1 <= 0.0 {
        0.0
    } else {
        n * (n + 2.0) * (r1 * r1 / (n - PERIOD as f64) + r2 * r2 / (n - 2.0 * PERIOD as f64))
    };
    TestResult::new("qs", stat, stats::chi2_sf(stat, 2.0), false).param("df", 2.0)
}

/// Complete cycles taken from the end of the series, one row per cycle.
fn cycles(y: &[f64]) -> Vec<&[f64]> {
    let k = y.len() / PERIOD;
    y[y.len() - k * PERIOD..].chunks(PERIOD).collect()
}

/// Rank test across cycles blocked by position within the cycle.
fn friedman(y: &[f64]) -> TestResult {
    let rows = cycles(y);
    let b = rows.len() as f64;
    let k = PERIOD as f64;
    let mut rank_sums = [0.0; PERIOD];
    let mut ties = 0.0;
    for row in &rows {
        let r = stats::ranks(row);
        for (j, v) in r.iter().enumerate() {
            rank_sums[j] += v;
        }
        let mut sorted = stats::sorted(row);
        sorted.dedup();
        for v in sorted {
            let t = row.iter().filter(|&&w| w == v).count() as f64;
            ties += t * t * t - t;
        }
    }
    let ss: f64 = rank_sums.iter().map(|r| r * r).sum();
    let raw = 12.0 / (b * k * (k + 1.0)) * ss - 3.0 * b * (k + 1.0);
    let stat = raw / (1.0 - ties / (b * k * (k * k - 1.0)));
    TestResult::new("friedman", stat, stats::chi2_sf(stat, k - 1.0), false)
        .param("df", k - 1.0)
        .param("blocks", b)
}

/// One-way comparison of position-within-cycle means without assuming
/// equal variances.
fn welch(y: &[f64]) -> TestResult {
    let rows = cycles(y);
    let k = PERIOD as f64;
    let groups: Vec<Vec<f64>> = (0..PERIOD)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let n: Vec<f64> = groups.iter().map(|g| g.len() as f64).collect();
    let m: Vec<f64> = groups.iter().map(|g| stats::mean(g)).collect();
    let w: Vec<f64> = groups
        .iter()
        .zip(&n)
        .map(|(g, ni)| ni / stats::sample_variance(g))
        .collect();
    let sw: f64 = w.iter().sum();
    let mw: f64 = w.iter().zip(&m).map(|(wi, mi)| wi * mi).sum::<f64>() / sw;
    let a: f64 = w
        .iter()
        .zip(&m)
        .map(|(wi, mi)| wi * (mi - mw) * (mi - mw))
        .sum::<f64>()
        / (k - 1.0);
    let tmp: f64 = w
        .iter()
        .zip(&n)
        .map(|(wi, ni)| (1.0 - wi / sw).powi(2) / (ni - 1.0))
        .sum();
    let b = 1.0 + 2.0 * (k - 2.0) / (k * k - 1.0) * tmp;
    let stat = a / b;
    let df2 = (k * k - 1.0) / (3.0 * tmp);
    let p = if stat.is_finite() {
        stats::f_sf(stat, k - 1.0, df2)
    } else {
        0.0
    };
    TestResult::new("welch", stat, p, false)
        .param("df1", k - 1.0)
        .param("df2", df2)
}

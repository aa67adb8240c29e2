use super::{lag_matrix, require, Deterministic, StationarityMethod, TestResult, ALPHA};
use crate::error::{Error, Result};
use crate::series::{diff_values, difference, TimeSeries};
use crate::stats;

/// Bartlett-window truncation lag of the long-run variance.
pub const KPSS_LAG: usize = 5;

const KPSS_PROBS: [f64; 4] = [0.10, 0.05, 0.025, 0.01];
const KPSS_NONE: [f64; 4] = [1.196, 1.656, 2.135, 2.787];
const KPSS_LEVEL: [f64; 4] = [0.347, 0.463, 0.574, 0.739];
const KPSS_TREND: [f64; 4] = [0.119, 0.146, 0.176, 0.216];

const ADF_PROBS: [f64; 8] = [0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99];
const ADF_SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, 100000.0];

#[rustfmt::skip]
const ADF_NONE: [[f64; 8]; 6] = [
    [-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16],
    [-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08],
    [-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03],
    [-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01],
    [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
    [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
];

#[rustfmt::skip]
#[allow(clippy::approx_constant)]
const ADF_DRIFT: [[f64; 8]; 6] = [
    [-3.75, -3.33, -3.00, -2.62, -0.37,  0.00, 0.34, 0.72],
    [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
    [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
    [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
    [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
    [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
];

#[rustfmt::skip]
const ADF_TREND: [[f64; 8]; 6] = [
    [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
    [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
    [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
    [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
    [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
    [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
];

pub fn test_stationarity(
    s: &TimeSeries,
    method: StationarityMethod,
    deterministic: Deterministic,
) -> Result<TestResult> {
    let x = s.values();
    require(x, 30)?;
    match method {
        StationarityMethod::Kpss => Ok(kpss_ar(x, deterministic)),
        StationarityMethod::Adf => adf(x, deterministic),
    }
}

/// KPSS on the residuals of a first-order autoregression carrying the
/// requested deterministic terms.
fn kpss_ar(x: &[f64], det: Deterministic) -> TestResult {
    let y = &x[1..];
    let n = y.len();
    let mut cols = vec![x[..n].to_vec()];
    if det != Deterministic::None {
        cols.push(vec![1.0; n]);
    }
    if det == Deterministic::Trend {
        cols.push((2..n + 2).map(|t| t as f64).collect());
    }
    let e = stats::ols(&cols, y).residuals;
    let table = match det {
        Deterministic::None => &KPSS_NONE,
        Deterministic::Drift => &KPSS_LEVEL,
        Deterministic::Trend => &KPSS_TREND,
    };
    kpss_result(&e, table, det)
}

/// Classical level-stationarity KPSS on demeaned observations.
fn kpss_level(x: &[f64]) -> TestResult {
    let m = stats::mean(x);
    let e: Vec<f64> = x.iter().map(|v| v - m).collect();
    kpss_result(&e, &KPSS_LEVEL, Deterministic::Drift)
}

fn kpss_result(e: &[f64], table: &[f64; 4], det: Deterministic) -> TestResult {
    let n = e.len() as f64;
    let mut partial = 0.0;
    let eta: f64 = e
        .iter()
        .map(|v| {
            partial += v;
            partial * partial
        })
        .sum::<f64>()
        / (n * n);
    let stat = eta / long_run_variance(e, KPSS_LAG);
    let (p, clamped) = if stat <= table[0] {
        (KPSS_PROBS[0], true)
    } else if stat >= table[3] {
        (KPSS_PROBS[3], true)
    } else {
        (stats::interp_clamped(table, &KPSS_PROBS, stat), false)
    };
    TestResult::new("kpss", stat, p, clamped)
        .param("lag", KPSS_LAG as f64)
        .param("type", det_code(det))
}

fn long_run_variance(e: &[f64], lag: usize) -> f64 {
    let n = e.len();
    let mut s = e.iter().map(|v| v * v).sum::<f64>();
    for k in 1..=lag.min(n - 1) {
        let w = 1.0 - k as f64 / (lag as f64 + 1.0);
        s += 2.0 * w * (k..n).map(|t| e[t] * e[t - k]).sum::<f64>();
    }
    s / n as f64
}

fn det_code(det: Deterministic) -> f64 {
    match det {
        Deterministic::None => 1.0,
        Deterministic::Drift => 2.0,
        Deterministic::Trend => 3.0,
    }
}

/// Augmented Dickey–Fuller t-test with ⌊(N−1)^(1/3)⌋ lagged differences.
fn adf(x: &[f64], det: Deterministic) -> Result<TestResult> {
    let lags = ((x.len() - 1) as f64).cbrt().floor() as usize;
    let dy = diff_values(x);
    let (y, lagged) = lag_matrix(&dy, lags);
    let m = y.len();
    let mut cols = vec![x[lags..lags + m].to_vec()];
    cols.extend(lagged);
    if det != Deterministic::None {
        cols.push(vec![1.0; m]);
    }
    if det == Deterministic::Trend {
        cols.push((lags + 1..lags + 1 + m).map(|t| t as f64).collect());
    }
    let fit = stats::ols(&cols, &y);
    let se = fit
        .std_err
        .ok_or(Error::DegenerateSample("singular unit-root regression"))?;
    let stat = fit.coef[0] / se[0];

    let table = match det {
        Deterministic::None => &ADF_NONE,
        Deterministic::Drift => &ADF_DRIFT,
        Deterministic::Trend => &ADF_TREND,
    };
    let crit: Vec<f64> = (0..ADF_PROBS.len())
        .map(|j| {
            let column: Vec<f64> = table.iter().map(|row| row[j]).collect();
            stats::interp_clamped(&ADF_SIZES, &column, m as f64)
        })
        .collect();
    let clamped = stat <= crit[0] || stat >= crit[crit.len() - 1];
    let p = stats::interp_clamped(&crit, &ADF_PROBS, stat);
    Ok(TestResult::new("adf", stat, p, clamped)
        .param("lag", lags as f64)
        .param("type", det_code(det)))
}

/// Smallest number of differences in {0, 1, 2} after which the series passes
/// the chosen test at the 5% level. KPSS here is the classical level test;
/// ADF uses a drift term.
pub fn integration_order(s: &TimeSeries, method: StationarityMethod) -> Result<usize> {
    require(s.values(), 30)?;
    for k in 0..2 {
        let series = if k == 0 { s.clone() } else { difference(s, k)? };
        if stats::is_constant(series.values()) {
            return Ok(k);
        }
        let stationary = match method {
            StationarityMethod::Kpss => kpss_level(series.values()).p_value >= ALPHA,
            StationarityMethod::Adf => adf(series.values(), Deterministic::Drift)?.reject_at_05,
        };
        if stationary {
            return Ok(k);
        }
    }
    Ok(2)
}

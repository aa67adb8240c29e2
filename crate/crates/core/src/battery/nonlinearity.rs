use super::{lag_matrix, require, NonlinearityMethod, TestResult};
use crate::error::{Error, Result};
use crate::series::{acf_values, durbin_levinson, TimeSeries};
use crate::stats::{self, Projection};

/// Squared-observation autocorrelation lags examined by the McLeod–Li test.
pub const MCLEOD_LI_LAGS: usize = 24;

pub fn test_nonlinearity(s: &TimeSeries, method: NonlinearityMethod) -> Result<TestResult> {
    let x = s.values();
    require(x, 50)?;
    match method {
        NonlinearityMethod::Teraesvirta => Ok(teraesvirta(x)),
        NonlinearityMethod::Keenan => keenan(x, ar_order(x)),
        NonlinearityMethod::Tsay => tsay(x, ar_order(x)),
        NonlinearityMethod::McleodLi => Ok(mcleod_li(x)),
    }
}

/// Autoregressive order minimising AIC over Yule–Walker fits, with the
/// search bounded by 10·log10(N); at least 1.
fn ar_order(x: &[f64]) -> usize {
    let n = x.len();
    let max_order = ((10.0 * (n as f64).log10()).floor() as usize).min(n - 1);
    let rho = acf_values(x, max_order);
    let (_, ratios) = durbin_levinson(&rho);
    let nf = n as f64;
    let mut best = (0.0, 0);
    for (k, v) in ratios.iter().enumerate() {
        let aic = nf * v.ln() + 2.0 * (k + 1) as f64;
        if aic < best.0 {
            best = (aic, k + 1);
        }
    }
    best.1.max(1)
}

/// Neural-network LM test at lag 1 with the Taylor expansion truncated at
/// the cubic term.
fn teraesvirta(x: &[f64]) -> TestResult {
    let n = x.len();
    let m = stats::mean(x);
    let sd = stats::sample_variance(x).sqrt();
    let z: Vec<f64> = x.iter().map(|v| (v - m) / sd).collect();
    let y = &z[1..];
    let lag = z[..n - 1].to_vec();
    let ones = vec![1.0; n - 1];
    let base = stats::ols(&[ones.clone(), lag.clone()], y);
    let sq: Vec<f64> = lag.iter().map(|v| v * v).collect();
    let cube: Vec<f64> = lag.iter().map(|v| v * v * v).collect();
    let aux = stats::ols(&[ones, lag, sq, cube], &base.residuals);
    let stat = n as f64 * (base.rss / aux.rss).ln();
    TestResult::new("teraesvirta", stat, stats::chi2_sf(stat, 2.0), false)
        .param("lag", 1.0)
        .param("df", 2.0)
}

fn ar_design(x: &[f64], p: usize) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (y, lags) = lag_matrix(x, p);
    let mut design = vec![vec![1.0; y.len()]];
    design.extend(lags.iter().cloned());
    (y, lags, design)
}

/// One-degree-of-freedom test for a squared-fitted-value term.
fn keenan(x: &[f64], p: usize) -> Result<TestResult> {
    let n = x.len();
    let (y, _, design) = ar_design(x, p);
    let fit1 = stats::ols(&design, &y);
    let fitted_sq: Vec<f64> = y
        .iter()
        .zip(&fit1.residuals)
        .map(|(yi, ri)| (yi - ri) * (yi - ri))
        .collect();
    let r2 = stats::ols(&design, &fitted_sq).residuals;
    let s22: f64 = r2.iter().map(|v| v * v).sum();
    if s22 == 0.0 {
        return Err(Error::DegenerateSample(
            "squared fitted values are collinear",
        ));
    }
    let eta = fit1
        .residuals
        .iter()
        .zip(&r2)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / s22;
    let ss = eta * eta * s22;
    let df2 = n as f64 - 2.0 * p as f64 - 2.0;
    let stat = ss * df2 / (fit1.rss - ss);
    Ok(
        TestResult::new("keenan", stat, stats::f_sf(stat, 1.0, df2), false)
            .param("order", p as f64)
            .param("df1", 1.0)
            .param("df2", df2),
    )
}

/// F test of the AR residuals against all second-order lag products, each
/// first purged of the linear autoregression.
fn tsay(x: &[f64], p: usize) -> Result<TestResult> {
    let (y, lags, design) = ar_design(x, p);
    let m = y.len();
    let base = stats::ols(&design, &y);
    let proj = Projection::new(&design);
    let mut products = Vec::with_capacity(p * (p + 1) / 2);
    for i in 0..p {
        for j in i..p {
            let prod: Vec<f64> = lags[i].iter().zip(&lags[j]).map(|(a, b)| a * b).collect();
            products.push(proj.residuals(&prod));
        }
    }
    let k = products.len();
    let df2 = m as f64 - p as f64 - k as f64 - 1.0;
    if df2 < 1.0 {
        return Err(Error::insufficient(p + k + 2 + p, x.len()));
    }
    let aux = stats::ols(&products, &base.residuals);
    let stat = ((base.rss - aux.rss) / k as f64) / (aux.rss / df2);
    Ok(
        TestResult::new("tsay", stat, stats::f_sf(stat, k as f64, df2), false)
            .param("order", p as f64)
            .param("df1", k as f64)
            .param("df2", df2),
    )
}

/// Portmanteau test on squared mean-removed observations; reports the
/// largest p-value over lags 1..=24 and the statistic at lag 24.
fn mcleod_li(x: &[f64]) -> TestResult {
    let m = stats::mean(x);
    let sq: Vec<f64> = x.iter().map(|v| (v - m) * (v - m)).collect();
    let n = sq.len() as f64;
    let rho = acf_values(&sq, MCLEOD_LI_LAGS);
    let mut q = 0.0;
    let mut p_max: f64 = 0.0;
    for (k, r) in rho.iter().enumerate().skip(1) {
        q += n * (n + 2.0) * r * r / (n - k as f64);
        p_max = p_max.max(stats::chi2_sf(q, k as f64));
    }
    TestResult::new("mcleod_li", q, p_max, false).param("lags", MCLEOD_LI_LAGS as f64)
}

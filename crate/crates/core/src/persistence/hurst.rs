use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Shortest sequence accepted by the estimators.
pub const MIN_LENGTH: usize = 16;

/// Smallest block on the geometric grid.
const FIRST_BLOCK: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HurstMethod {
    Rs,
    Dfa,
}

impl HurstMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            HurstMethod::Rs => "rs",
            HurstMethod::Dfa => "dfa",
        }
    }
}

impl fmt::Display for HurstMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HurstMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rs" => Ok(HurstMethod::Rs),
            "dfa" => Ok(HurstMethod::Dfa),
            other => Err(Error::InvalidParameter(format!(
                "unknown hurst method {other:?} (expected rs or dfa)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub block_size: usize,
    pub mean_statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub h: f64,
    pub method: HurstMethod,
    pub points: Vec<ScalePoint>,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

pub fn hurst(x: &[f64], method: HurstMethod) -> Result<HurstEstimate> {
    match method {
        HurstMethod::Rs => hurst_rs(x),
        HurstMethod::Dfa => hurst_dfa(x),
    }
}

/// Block sizes round(8·2^(k/4)) up to ⌊N/2⌋, with ⌊N/2⌋ itself appended.
/// Short inputs that yield fewer than four sizes fall back to the four
/// largest sizes ending at ⌊N/2⌋.
pub fn block_sizes(n: usize) -> Vec<usize> {
    let top = n / 2;
    let mut sizes: Vec<usize> = Vec::new();
    for k in 0.. {
        let b = (FIRST_BLOCK * 2f64.powf(k as f64 / 4.0)).round() as usize;
        if b > top {
            break;
        }
        if sizes.last() != Some(&b) {
            sizes.push(b);
        }
    }
    if top >= FIRST_BLOCK as usize && sizes.last() != Some(&top) {
        sizes.push(top);
    }
    if sizes.len() < 4 {
        sizes = (top.saturating_sub(3).max(4)..=top).collect();
    }
    sizes
}

fn check(x: &[f64]) -> Result<()> {
    if x.len() < MIN_LENGTH {
        return Err(Error::insufficient(MIN_LENGTH, x.len()));
    }
    if stats::is_constant(x) {
        return Err(Error::ZeroVariance);
    }
    Ok(())
}

/// Classical rescaled-range estimate.
pub fn hurst_rs(x: &[f64]) -> Result<HurstEstimate> {
    check(x)?;
    let points = block_sizes(x.len())
        .into_iter()
        .filter_map(|t| {
            let ratios: Vec<f64> = x.chunks_exact(t).filter_map(rescaled_range).collect();
            (!ratios.is_empty()).then(|| ScalePoint {
                block_size: t,
                mean_statistic: stats::mean(&ratios),
            })
        })
        .collect();
    fit(points, HurstMethod::Rs)
}

fn rescaled_range(block: &[f64]) -> Option<f64> {
    let m = stats::mean(block);
    let mut acc = 0.0;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut ss = 0.0;
    for v in block {
        let d = v - m;
        acc += d;
        lo = lo.min(acc);
        hi = hi.max(acc);
        ss += d * d;
    }
    let s = (ss / block.len() as f64).sqrt();
    (s > 0.0).then(|| (hi - lo) / s)
}

/// Detrended fluctuation analysis with per-block linear detrending of the
/// integrated, mean-removed series.
pub fn hurst_dfa(x: &[f64]) -> Result<HurstEstimate> {
    check(x)?;
    let m = stats::mean(x);
    let profile: Vec<f64> = x
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v - m;
            Some(*acc)
        })
        .collect();
    let points = block_sizes(x.len())
        .into_iter()
        .filter_map(|t| {
            let ms: Vec<f64> = profile.chunks_exact(t).map(detrended_ms).collect();
            let f = stats::mean(&ms).sqrt();
            (f > 0.0).then_some(ScalePoint {
                block_size: t,
                mean_statistic: f,
            })
        })
        .collect();
    fit(points, HurstMethod::Dfa)
}

/// Mean squared residual of a least-squares line through the block.
fn detrended_ms(block: &[f64]) -> f64 {
    let n = block.len() as f64;
    let tm = (n - 1.0) / 2.0;
    let ym = stats::mean(block);
    let (mut sty, mut stt) = (0.0, 0.0);
    for (i, y) in block.iter().enumerate() {
        let dt = i as f64 - tm;
        sty += dt * (y - ym);
        stt += dt * dt;
    }
    let slope = sty / stt;
    block
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let r = y - ym - slope * (i as f64 - tm);
            r * r
        })
        .sum::<f64>()
        / n
}

fn fit(points: Vec<ScalePoint>, method: HurstMethod) -> Result<HurstEstimate> {
    if points.len() < 4 {
        return Err(Error::DegenerateSample(
            "fewer than four usable block sizes",
        ));
    }
    let lt: Vec<f64> = points.iter().map(|p| (p.block_size as f64).ln()).collect();
    let ls: Vec<f64> = points.iter().map(|p| p.mean_statistic.ln()).collect();
    let ols = stats::ols(&[vec![1.0; lt.len()], lt], &ls);
    let tss = stats::centered_ss(&ls);
    let r_squared = if tss > 0.0 { 1.0 - ols.rss / tss } else { 1.0 };
    let slope_stderr = ols.std_err.map_or(f64::NAN, |se| se[1]);
    Ok(HurstEstimate {
        h: ols.coef[1],
        method,
        points,
        slope_stderr,
        r_squared,
    })
}

use serde::{Deserialize, Serialize};

use super::che::CheCurve;
use crate::error::{Error, Result};
use crate::series::MonthStamp;

/// Smallest fitted amplitude L2 − L1 treated as a transition.
pub const MIN_AMPLITUDE: f64 = 0.05;

const MIDPOINT_GRID: usize = 300;
const RATE_GRID: usize = 160;
/// Rate bounds in reciprocal years.
const RATE_MIN: f64 = 0.05;
const RATE_MAX: f64 = 20.0;
const REFINE_ROUNDS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub lower: f64,
    pub upper: f64,
    /// Decimal year of the inflection.
    pub midpoint: f64,
    /// Per year.
    pub rate: f64,
}

impl LogisticFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.lower + (self.upper - self.lower) * sigmoid(self.rate * (t - self.midpoint))
    }

    /// Half the distance between the 10% and 90% crossings, in years.
    pub fn half_width(&self) -> f64 {
        9f64.ln() / self.rate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChePeriods {
    pub p1_end: MonthStamp,
    pub p2_end: MonthStamp,
    /// Fitted lower plateau.
    pub p1_level: f64,
    /// Fitted upper plateau.
    pub p3_level: f64,
    /// Hurst units per year across period 2.
    pub p2_slope: f64,
    pub fit: LogisticFit,
    pub sse: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z.clamp(-700.0, 700.0)).exp())
}

/// Least-squares plateaus for fixed (t0, k) and the resulting SSE.
fn plateaus(t: &[f64], y: &[f64], t0: f64, k: f64) -> Option<(f64, f64, f64)> {
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (ti, yi) in t.iter().zip(y) {
        let s = sigmoid(k * (ti - t0));
        let u = 1.0 - s;
        a11 += u * u;
        a12 += u * s;
        a22 += s * s;
        b1 += u * yi;
        b2 += s * yi;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() <= 1e-12 * (a11 * a22).max(f64::MIN_POSITIVE) {
        return None;
    }
    let lower = (b1 * a22 - b2 * a12) / det;
    let upper = (a11 * b2 - a12 * b1) / det;
    let sse = t
        .iter()
        .zip(y)
        .map(|(ti, yi)| {
            let r = yi - lower - (upper - lower) * sigmoid(k * (ti - t0));
            r * r
        })
        .sum();
    Some((lower, upper, sse))
}

/// Fits the four-parameter logistic by a grid over (midpoint, log rate)
/// followed by pattern-search refinement. Both 10%/90% crossings must lie
/// within the sampled span.
pub fn fit_logistic(t: &[f64], y: &[f64]) -> Result<(LogisticFit, f64)> {
    let (first, last) = (t[0], t[t.len() - 1]);
    let admissible = |t0: f64, k: f64| {
        let w = 9f64.ln() / k;
        (RATE_MIN..=RATE_MAX).contains(&k) && t0 - w >= first && t0 + w <= last
    };
    let evaluate = |t0: f64, k: f64| -> Option<(LogisticFit, f64)> {
        if !admissible(t0, k) {
            return None;
        }
        let (lower, upper, sse) = plateaus(t, y, t0, k)?;
        (upper > lower).then_some((
            LogisticFit {
                lower,
                upper,
                midpoint: t0,
                rate: k,
            },
            sse,
        ))
    };

    let dt = (last - first) / (MIDPOINT_GRID - 1) as f64;
    let dlk = (RATE_MAX / RATE_MIN).ln() / (RATE_GRID - 1) as f64;
    let mut best: Option<(LogisticFit, f64)> = None;
    for i in 0..MIDPOINT_GRID {
        let t0 = first + i as f64 * dt;
        for j in 0..RATE_GRID {
            let k = (RATE_MIN.ln() + j as f64 * dlk).exp().min(RATE_MAX);
            if let Some(cand) = evaluate(t0, k) {
                if best.as_ref().is_none_or(|b| cand.1 < b.1) {
                    best = Some(cand);
                }
            }
        }
    }
    let Some(mut best) = best else {
        return Err(Error::NoTransition { amplitude: 0.0 });
    };

    let (mut st, mut sk) = (dt, dlk);
    for _ in 0..REFINE_ROUNDS {
        let (t0, lk) = (best.0.midpoint, best.0.rate.ln());
        let moves = [(st, 0.0), (-st, 0.0), (0.0, sk), (0.0, -sk)];
        let improved = moves
            .iter()
            .filter_map(|&(a, b)| evaluate(t0 + a, (lk + b).exp()))
            .filter(|c| c.1 < best.1)
            .fold(None::<(LogisticFit, f64)>, |acc, c| match acc {
                Some(a) if a.1 <= c.1 => Some(a),
                _ => Some(c),
            });
        match improved {
            Some(c) => best = c,
            None => {
                st /= 2.0;
                sk /= 2.0;
            }
        }
    }
    Ok(best)
}

/// Splits a chronological Hurst curve into the flat, ramp and saturated
/// periods at the 10% and 90% crossings of a fitted logistic.
pub fn segment_che(c: &CheCurve) -> Result<ChePeriods> {
    if c.len() < 24 {
        return Err(Error::insufficient(24, c.len()));
    }
    let t: Vec<f64> = c.prefix_end.iter().map(|m| m.decimal_year()).collect();
    let (fit, sse) = fit_logistic(&t, &c.h_values)?;
    let amplitude = fit.upper - fit.lower;
    if amplitude < MIN_AMPLITUDE {
        return Err(Error::NoTransition { amplitude });
    }
    let w = fit.half_width();
    Ok(ChePeriods {
        p1_end: MonthStamp::from_decimal_year(fit.midpoint - w),
        p2_end: MonthStamp::from_decimal_year(fit.midpoint + w),
        p1_level: fit.lower,
        p3_level: fit.upper,
        p2_slope: 0.8 * amplitude / (2.0 * w),
        fit,
        sse,
    })
}

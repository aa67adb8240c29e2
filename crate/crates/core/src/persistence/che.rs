use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hurst::{hurst, HurstMethod, MIN_LENGTH};
use crate::error::{Error, Result};
use crate::series::{MonthStamp, TimeSeries};

pub const DEFAULT_MIN_WINDOW: usize = 24;
pub const DEFAULT_STEP: usize = 1;

/// Hurst estimates over expanding prefixes anchored at the series start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheCurve {
    pub prefix_end: Vec<MonthStamp>,
    pub h_values: Vec<f64>,
    pub min_window: usize,
    pub step: usize,
    pub method: HurstMethod,
    pub source_digest: String,
}

impl CheCurve {
    pub fn len(&self) -> usize {
        self.h_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_values.is_empty()
    }

    /// `prefix_end,h` rows with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("prefix_end,h\n");
        for (m, h) in self.prefix_end.iter().zip(&self.h_values) {
            writeln!(out, "{m},{h}").expect("writing to a String");
        }
        out
    }

    /// Value at the prefix ending in `month`, if that prefix was evaluated.
    pub fn at(&self, month: MonthStamp) -> Option<f64> {
        self.prefix_end
            .iter()
            .position(|m| *m == month)
            .map(|i| self.h_values[i])
    }
}

fn prefix_lengths(s: &TimeSeries, min_window: usize, step: usize) -> Result<Vec<usize>> {
    if min_window < MIN_LENGTH {
        return Err(Error::InvalidParameter(format!(
            "min_window {min_window} below {MIN_LENGTH}"
        )));
    }
    if step == 0 {
        return Err(Error::InvalidParameter("step must be >= 1".into()));
    }
    if s.len() < min_window {
        return Err(Error::insufficient(min_window, s.len()));
    }
    Ok((min_window..=s.len()).step_by(step).collect())
}

fn assemble(
    s: &TimeSeries,
    lengths: &[usize],
    h_values: Vec<f64>,
    method: HurstMethod,
    min_window: usize,
    step: usize,
) -> CheCurve {
    CheCurve {
        prefix_end: lengths.iter().map(|&l| s.month_at(l - 1)).collect(),
        h_values,
        min_window,
        step,
        method,
        source_digest: s.digest(),
    }
}

/// Evaluates prefixes in parallel; output order follows prefix length.
pub fn che(
    s: &TimeSeries,
    method: HurstMethod,
    min_window: usize,
    step: usize,
) -> Result<CheCurve> {
    let lengths = prefix_lengths(s, min_window, step)?;
    let h_values = lengths
        .par_iter()
        .map(|&l| hurst(&s.values()[..l], method).map(|e| e.h))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(s, &lengths, h_values, method, min_window, step))
}

/// Single-threaded evaluation of the same curve.
pub fn che_serial(
    s: &TimeSeries,
    method: HurstMethod,
    min_window: usize,
    step: usize,
) -> Result<CheCurve> {
    let lengths = prefix_lengths(s, min_window, step)?;
    let h_values = lengths
        .iter()
        .map(|&l| hurst(&s.values()[..l], method).map(|e| e.h))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(s, &lengths, h_values, method, min_window, step))
}

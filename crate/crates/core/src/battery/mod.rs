//! Intrinsic-property test battery: normality, stationarity and order of
//! integration, seasonality, nonlinearity, and a log-periodogram estimate of
//! the fractional-differencing order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{difference, TimeSeries};
use crate::stats;

mod gph;
mod nonlinearity;
mod normality;
mod seasonality;
mod stationarity;

pub use gph::{estimate_gph, GphEstimate};
pub use nonlinearity::test_nonlinearity;
pub use normality::test_normality;
pub use seasonality::test_seasonality;
pub use stationarity::{integration_order, test_stationarity};

/// Significance level used for every `reject_at_05` decision.
pub const ALPHA: f64 = 0.05;

/// Smallest p-value reported by the normality tests.
pub const P_FLOOR: f64 = 2.2e-16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub p_value: f64,
    /// True when `p_value` is a table or floor bound rather than an estimate.
    pub p_clamped: bool,
    pub reject_at_05: bool,
    pub params: BTreeMap<String, f64>,
}

impl TestResult {
    pub(crate) fn new(name: &str, statistic: f64, p_value: f64, p_clamped: bool) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestResult {
            name: name.to_string(),
            statistic,
            p_value,
            p_clamped,
            reject_at_05: p_value < ALPHA,
            params: BTreeMap::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

macro_rules! method_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::InvalidParameter(format!(
                        concat!("unknown ", stringify!($name), " {:?}"),
                        other
                    ))),
                }
            }
        }
    };
}

method_enum!(NormalityMethod {
    AndersonDarling => "anderson_darling",
    CramerVonMises => "cramer_von_mises",
});

method_enum!(StationarityMethod {
    Kpss => "kpss",
    Adf => "adf",
});

method_enum!(
    /// Deterministic terms of the auxiliary regression.
    Deterministic {
        None => "none",
        Drift => "drift",
        Trend => "trend",
    }
);

method_enum!(SeasonalityMethod {
    Qs => "qs",
    Friedman => "friedman",
    Welch => "welch",
    Combined => "combined",
});

method_enum!(NonlinearityMethod {
    Teraesvirta => "teraesvirta",
    Keenan => "keenan",
    McleodLi => "mcleod_li",
    Tsay => "tsay",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub non_normal: bool,
    pub non_stationary: bool,
    pub seasonal: bool,
    pub non_linear: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub normality: Vec<TestResult>,
    pub stationarity: Vec<TestResult>,
    pub seasonality: Vec<TestResult>,
    pub nonlinearity: Vec<TestResult>,
    /// KPSS-based order of integration, capped at 2.
    pub integration_order: usize,
    /// Log-periodogram estimate on the first difference.
    pub long_memory: GphEstimate,
    pub verdicts: Verdicts,
}

/// Nonlinearity is declared when at least this many of the four tests reject.
pub const NONLINEAR_VOTES: usize = 2;

impl Verdicts {
    pub fn derive(
        normality: &[TestResult],
        integration_order: usize,
        seasonality: &[TestResult],
        nonlinearity: &[TestResult],
    ) -> Self {
        Verdicts {
            non_normal: normality.iter().any(|t| t.reject_at_05),
            non_stationary: integration_order >= 1,
            seasonal: seasonality
                .iter()
                .find(|t| t.name == SeasonalityMethod::Combined.as_str())
                .is_some_and(|t| t.reject_at_05),
            non_linear: nonlinearity.iter().filter(|t| t.reject_at_05).count() >= NONLINEAR_VOTES,
        }
    }
}

/// Runs every test family on `s`. Stationarity results are reported for
/// levels and first differences under each deterministic specification.
pub fn run_battery(s: &TimeSeries) -> Result<BatteryReport> {
    let normality = NormalityMethod::ALL
        .iter()
        .map(|&m| test_normality(s, m))
        .collect::<Result<Vec<_>>>()?;

    let diff = difference(s, 1)?;
    let mut stationarity = Vec::new();
    for (label, series) in [("level", s), ("diff1", &diff)] {
        for &method in StationarityMethod::ALL {
            for &det in Deterministic::ALL {
                let mut r = test_stationarity(series, method, det)?;
                r.name = format!("{}_{}_{}", method, det, label);
                stationarity.push(r);
            }
        }
    }
    let integration_order = integration_order(s, StationarityMethod::Kpss)?;

    let seasonality = SeasonalityMethod::ALL
        .iter()
        .map(|&m| test_seasonality(s, m))
        .collect::<Result<Vec<_>>>()?;
    let nonlinearity = NonlinearityMethod::ALL
        .iter()
        .map(|&m| test_nonlinearity(s, m))
        .collect::<Result<Vec<_>>>()?;
    let long_memory = estimate_gph(&diff)?;

    let verdicts = Verdicts::derive(&normality, integration_order, &seasonality, &nonlinearity);
    Ok(BatteryReport {
        normality,
        stationarity,
        seasonality,
        nonlinearity,
        integration_order,
        long_memory,
        verdicts,
    })
}

pub(crate) fn require(x: &[f64], needed: usize) -> Result<()> {
    if x.len() < needed {
        return Err(Error::insufficient(needed, x.len()));
    }
    if stats::is_constant(x) {
        return Err(Error::DegenerateSample("series is constant"));
    }
    Ok(())
}

/// Response and lag columns for an autoregression of order `p`:
/// `y = x[p..]`, column `k-1` holds `x[t-k]`.
pub(crate) fn lag_matrix(x: &[f64], p: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = x.len();
    let y = x[p..].to_vec();
    let cols = (1..=p).map(|k| x[p - k..n - k].to_vec()).collect();
    (y, cols)
}

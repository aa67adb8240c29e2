use serde::{Deserialize, Serialize};

use super::config::{CleanMode, InputSource, PipelineConfig};
use crate::battery::{run_battery, BatteryReport};
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::persistence::{
    che, hurst, segment_che, CheCurve, ChePeriods, HurstEstimate, HurstMethod,
};
use crate::preclean::{
    clean_auto, clean_like_paper, clean_months, CleanRule, OutlierEvent, Replacement,
};
use crate::series::{
    descriptive_stats, parse_csv, sha256_hex, DescriptiveStats, MonthStamp, TimeSeries,
};

pub const TOOL_NAME: &str = "chronohurst";

/// Configuration as recorded in the report. The output directory is left
/// out so identical runs produce identical bytes wherever they are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: InputSource,
    pub clean: CleanMode,
    pub months: Vec<MonthStamp>,
    pub threshold: f64,
    pub method: HurstMethod,
    pub min_window: usize,
    pub step: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub label: String,
    /// SHA-256 of the input bytes as read.
    pub input_digest: String,
    pub config: ConfigEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierSummary {
    pub mode: CleanMode,
    /// `None` when cleaning is off.
    pub rule: Option<CleanRule>,
    pub source_digest: String,
    pub cleaned_digest: String,
    pub events: Vec<OutlierEvent>,
    pub replacements: Vec<Replacement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub meta: Meta,
    pub descriptive: DescriptiveStats,
    pub outliers: OutlierSummary,
    pub battery: BatteryReport,
    /// Estimate over the full cleaned series.
    pub hurst: HurstEstimate,
    pub che: CheCurve,
    /// `None` when the curve shows no transition.
    pub periods: Option<ChePeriods>,
    /// The cleaned series that every downstream stage analysed.
    pub series: TimeSeries,
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at_stage(name))
}

fn read_input(input: &InputSource) -> Result<Vec<u8>> {
    match input {
        InputSource::Fixture(f) => Ok(f.csv().as_bytes().to_vec()),
        InputSource::Path(p) => std::fs::read(p).map_err(|e| Error::io(p, e)),
    }
}

fn clean(s: &TimeSeries, cfg: &PipelineConfig) -> Result<OutlierSummary> {
    let report = match cfg.clean {
        CleanMode::Off => {
            return Ok(OutlierSummary {
                mode: CleanMode::Off,
                rule: None,
                source_digest: s.digest(),
                cleaned_digest: s.digest(),
                events: Vec::new(),
                replacements: Vec::new(),
            })
        }
        CleanMode::Auto => clean_auto(s, cfg.threshold)?,
        CleanMode::Paper if !cfg.months.is_empty() => clean_months(s, &cfg.months)?,
        CleanMode::Paper => {
            let fixture = match &cfg.input {
                InputSource::Fixture(f) => *f,
                InputSource::Path(_) => {
                    let digest = s.digest();
                    Fixture::ALL
                        .into_iter()
                        .find(|f| f.sha256() == digest)
                        .ok_or(Error::WrongFixture {
                            expected: "patents or trademarks",
                            found: digest,
                        })?
                }
            };
            clean_like_paper(s, fixture)?
        }
    };
    Ok(OutlierSummary {
        mode: cfg.clean,
        rule: Some(report.rule),
        source_digest: report.source_digest,
        cleaned_digest: report.repaired.digest(),
        events: report.events,
        replacements: report.replacements,
    })
}

fn apply(s: &TimeSeries, summary: &OutlierSummary) -> TimeSeries {
    let mut values = s.values().to_vec();
    for r in &summary.replacements {
        values[r.index] = r.replacement;
    }
    s.with_values(values)
}

/// The parsed input and its cleaned version, shared by all later stages.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedInput {
    pub input_digest: String,
    pub raw: TimeSeries,
    pub outliers: OutlierSummary,
    pub series: TimeSeries,
}

/// Reads, parses, and cleans the configured input.
pub fn prepare(cfg: &PipelineConfig) -> Result<PreparedInput> {
    cfg.validate()?;
    let bytes = stage("read", read_input(&cfg.input))?;
    let text = stage(
        "parse",
        std::str::from_utf8(&bytes)
            .map_err(|_| Error::InvalidParameter("input is not valid UTF-8".into())),
    )?;
    let raw = stage("parse", parse_csv(text))?;
    let outliers = stage("clean", clean(&raw, cfg))?;
    let series = apply(&raw, &outliers);
    Ok(PreparedInput {
        input_digest: sha256_hex(&bytes),
        raw,
        outliers,
        series,
    })
}

/// Parse, clean, describe, test, estimate, and segment, in that order.
/// Errors carry the name of the stage that failed.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<ReportDocument> {
    let PreparedInput {
        input_digest,
        outliers,
        series,
        ..
    } = prepare(cfg)?;
    let descriptive = stage("descriptive", descriptive_stats(&series))?;
    let battery = stage("battery", run_battery(&series))?;
    let hurst = stage("hurst", hurst(series.values(), cfg.method))?;
    let che = stage("che", che(&series, cfg.method, cfg.min_window, cfg.step))?;
    let periods = match segment_che(&che) {
        Ok(p) => Some(p),
        Err(Error::NoTransition { .. }) => None,
        Err(e) => return Err(e.at_stage("segment")),
    };

    Ok(ReportDocument {
        meta: Meta {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            label: cfg.input.label(),
            input_digest,
            config: ConfigEcho {
                input: cfg.input.clone(),
                clean: cfg.clean,
                months: cfg.months.clone(),
                threshold: cfg.threshold,
                method: cfg.method,
                min_window: cfg.min_window,
                step: cfg.step,
                seed: cfg.seed,
            },
        },
        descriptive,
        outliers,
        battery,
        hurst,
        che,
        periods,
        series,
    })
}

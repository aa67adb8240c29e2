use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::persistence::{HurstMethod, DEFAULT_MIN_WINDOW, DEFAULT_STEP, MIN_LENGTH};
use crate::preclean::DEFAULT_THRESHOLD;
use crate::series::MonthStamp;

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_OUT: &str = "out";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSource {
    Fixture(Fixture),
    Path(PathBuf),
}

impl InputSource {
    /// Short label used in file names and figure titles.
    pub fn label(&self) -> String {
        match self {
            InputSource::Fixture(f) => f.name().to_string(),
            InputSource::Path(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "series".to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanMode {
    /// Detector-driven repair of additive outliers.
    Auto,
    /// Repair at a fixed month list: the reference list for a bundled
    /// fixture, or the months given in the configuration.
    Paper,
    Off,
}

impl fmt::Display for CleanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CleanMode::Auto => "auto",
            CleanMode::Paper => "paper",
            CleanMode::Off => "off",
        })
    }
}

impl FromStr for CleanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CleanMode::Auto),
            "paper" | "paper_list" => Ok(CleanMode::Paper),
            "off" => Ok(CleanMode::Off),
            other => Err(Error::InvalidParameter(format!(
                "unknown clean mode {other:?} (expected auto, paper or off)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: InputSource,
    pub clean: CleanMode,
    /// Forced repair months; empty means the fixture's reference list.
    pub months: Vec<MonthStamp>,
    pub threshold: f64,
    pub method: HurstMethod,
    pub min_window: usize,
    pub step: usize,
    pub out: PathBuf,
    pub seed: u64,
}

impl PipelineConfig {
    /// Defaults for the given input. Bundled fixtures are cleaned at the
    /// reference months; other inputs use the detector.
    pub fn new(input: InputSource) -> Self {
        let clean = match input {
            InputSource::Fixture(_) => CleanMode::Paper,
            InputSource::Path(_) => CleanMode::Auto,
        };
        PipelineConfig {
            input,
            clean,
            months: Vec::new(),
            threshold: DEFAULT_THRESHOLD,
            method: HurstMethod::Rs,
            min_window: DEFAULT_MIN_WINDOW,
            step: DEFAULT_STEP,
            out: PathBuf::from(DEFAULT_OUT),
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_window < MIN_LENGTH {
            return Err(Error::InvalidParameter(format!(
                "min_window must be >= {MIN_LENGTH}, got {}",
                self.min_window
            )));
        }
        if self.step < 1 {
            return Err(Error::InvalidParameter("step must be >= 1".into()));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// A partial configuration from one source (command line or file).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub input: Option<PathBuf>,
    pub fixture: Option<Fixture>,
    pub clean: Option<CleanMode>,
    pub months: Option<Vec<MonthStamp>>,
    pub threshold: Option<f64>,
    pub method: Option<HurstMethod>,
    pub min_window: Option<usize>,
    pub step: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ConfigLayer {
    /// Parses a flat `key = value` file. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key = value", no + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| {
                Error::InvalidParameter(format!("config line {}: invalid {what} {value:?}", no + 1))
            };
            match key {
                "input" => layer.input = Some(PathBuf::from(value)),
                "fixture" => layer.fixture = Some(value.parse()?),
                "clean" => layer.clean = Some(value.parse()?),
                "months" => layer.months = Some(parse_months(value)?),
                "threshold" => layer.threshold = Some(value.parse().map_err(|_| bad("threshold"))?),
                "method" => layer.method = Some(value.parse()?),
                "min_window" => {
                    layer.min_window = Some(value.parse().map_err(|_| bad("min_window"))?)
                }
                "step" => layer.step = Some(value.parse().map_err(|_| bad("step"))?),
                "out" => layer.out = Some(PathBuf::from(value)),
                "seed" => layer.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "config line {}: unknown key {other:?}",
                        no + 1
                    )))
                }
            }
        }
        Ok(layer)
    }

    /// Fields set here win over `lower`. The input source is taken as a
    /// unit so a command-line fixture replaces a file path from the config.
    pub fn over(self, lower: ConfigLayer) -> ConfigLayer {
        let (input, fixture) = if self.input.is_some() || self.fixture.is_some() {
            (self.input, self.fixture)
        } else {
            (lower.input, lower.fixture)
        };
        ConfigLayer {
            input,
            fixture,
            clean: self.clean.or(lower.clean),
            months: self.months.or(lower.months),
            threshold: self.threshold.or(lower.threshold),
            method: self.method.or(lower.method),
            min_window: self.min_window.or(lower.min_window),
            step: self.step.or(lower.step),
            out: self.out.or(lower.out),
            seed: self.seed.or(lower.seed),
        }
    }

    /// Fills remaining fields with defaults and validates.
    pub fn resolve(self) -> Result<PipelineConfig> {
        let input = match (self.input, self.fixture) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter(
                    "give either an input path or a fixture, not both".into(),
                ))
            }
            (Some(p), None) => InputSource::Path(p),
            (None, Some(f)) => InputSource::Fixture(f),
            (None, None) => {
                return Err(Error::InvalidParameter(
                    "no input: give an input path or a fixture".into(),
                ))
            }
        };
        let mut cfg = PipelineConfig::new(input);
        if let Some(v) = self.clean {
            cfg.clean = v;
        }
        if let Some(v) = self.months {
            cfg.months = v;
        }
        if let Some(v) = self.threshold {
            cfg.threshold = v;
        }
        if let Some(v) = self.method {
            cfg.method = v;
        }
        if let Some(v) = self.min_window {
            cfg.min_window = v;
        }
        if let Some(v) = self.step {
            cfg.step = v;
        }
        if let Some(v) = self.out {
            cfg.out = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Comma-separated `YYYY-MM` list.
pub fn parse_months(text: &str) -> Result<Vec<MonthStamp>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_layer_parses_and_cli_wins() {
        let file = ConfigLayer::parse(
            "# defaults for the lab\ninput = data/x.csv\nmin_window = 30\nstep=2\nmethod = dfa # cross-check\n",
        )
        .unwrap();
        assert_eq!(file.min_window, Some(30));
        let cli = ConfigLayer {
            fixture: Some(Fixture::Patents),
            step: Some(3),
            ..Default::default()
        };
        let cfg = cli.over(file).resolve().unwrap();
        assert_eq!(cfg.input, InputSource::Fixture(Fixture::Patents));
        assert_eq!(cfg.step, 3);
        assert_eq!(cfg.min_window, 30);
        assert_eq!(cfg.method, HurstMethod::Dfa);
        assert_eq!(cfg.clean, CleanMode::Paper);
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn rejects_bad_lines_and_values() {
        assert!(ConfigLayer::parse("min_window 30").is_err());
        assert!(ConfigLayer::parse("colour = red").is_err());
        assert!(ConfigLayer::parse("step = -1").is_err());
        let small = ConfigLayer {
            fixture: Some(Fixture::Trademarks),
            min_window: Some(12),
            ..Default::default()
        };
        assert!(matches!(small.resolve(), Err(Error::InvalidParameter(_))));
        assert!(ConfigLayer::default().resolve().is_err());
    }

    #[test]
    fn month_lists() {
        let m = parse_months("1982-09, 1995-06").unwrap();
        assert_eq!(
            m,
            vec![
                MonthStamp::new(1982, 9).unwrap(),
                MonthStamp::new(1995, 6).unwrap()
            ]
        );
        assert!(parse_months("1982-13").is_err());
    }
}

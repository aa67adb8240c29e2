use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use chronohurst::battery::run_battery;
use chronohurst::fixtures::Fixture;
use chronohurst::persistence::{che, hurst, segment_che, simulate_fgn, FgnSpec, HurstMethod};
use chronohurst::report::{
    emit_comparison, emit_figures, emit_report, parse_report, prepare, run_pipeline, CleanMode,
    ConfigLayer, PipelineConfig, ReportDocument, DEFAULT_SEED,
};
use chronohurst::series::{descriptive_stats, MonthStamp};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "chronohurst",
    version,
    about = "Chronological Hurst exponent for monthly count series"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Input CSV with a `date,value` header.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Bundled series.
    #[arg(long, global = true, value_parser = parse_with::<Fixture>)]
    fixture: Option<Fixture>,
    /// Outlier handling: auto, paper or off.
    #[arg(long, global = true, value_parser = parse_with::<CleanMode>)]
    clean: Option<CleanMode>,
    /// Forced repair months, comma-separated YYYY-MM.
    #[arg(long, global = true, value_name = "LIST", value_delimiter = ',', value_parser = parse_with::<MonthStamp>)]
    months: Option<Vec<MonthStamp>>,
    /// Robust z threshold for the outlier detector.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Hurst estimator: rs or dfa.
    #[arg(long, global = true, value_parser = parse_with::<HurstMethod>)]
    method: Option<HurstMethod>,
    #[arg(long, global = true, value_name = "N")]
    min_window: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    step: Option<usize>,
    /// Output directory for written files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Descriptive statistics of the cleaned series.
    Stats,
    /// Outlier repair summary; writes clean.csv.
    Clean,
    /// Intrinsic-property test battery.
    Battery {
        #[arg(long, value_enum, default_value_t = Family::All)]
        family: Family,
    },
    /// Hurst exponent of the full cleaned series.
    Hurst,
    /// Chronological Hurst curve as CSV on stdout.
    Che,
    /// Three-period segmentation of the chronological Hurst curve.
    Segment,
    /// Full pipeline; writes report.json, che.csv and clean.csv.
    Report,
    /// SVG figures from saved reports, or from a fresh run of the configured input.
    Figures {
        /// A report.json to plot; give two for the comparison figure.
        #[arg(long = "report", value_name = "PATH")]
        reports: Vec<PathBuf>,
        /// Write only the comparison figure.
        #[arg(long)]
        compare: bool,
    },
    /// Fractional Gaussian noise as `index,value` CSV on stdout.
    SimulateFgn {
        #[arg(long)]
        h: f64,
        #[arg(long)]
        n: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    All,
    Normality,
    Stationarity,
    Seasonality,
    Nonlinearity,
}

fn parse_with<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn data(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }
}

impl From<chronohurst::Error> for Failure {
    fn from(e: chronohurst::Error) -> Self {
        Failure {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }
}

impl Common {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            input: self.input.clone(),
            fixture: self.fixture,
            clean: self.clean,
            months: self.months.clone(),
            threshold: self.threshold,
            method: self.method,
            min_window: self.min_window,
            step: self.step,
            out: self.out.clone(),
            seed: self.seed,
        }
    }

    fn resolve(&self) -> Result<PipelineConfig, Failure> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                ConfigLayer::parse(&text).map_err(Failure::usage)?
            }
            None => ConfigLayer::default(),
        };
        self.layer().over(file).resolve().map_err(Failure::usage)
    }
}

/// Writes to stdout. A closed pipe (e.g. `| head`) ends output quietly.
fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::data(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Failure::data)?;
    text.push('\n');
    emit(&text)
}

fn print_paths(paths: &[PathBuf]) -> Result<(), Failure> {
    let text: String = paths.iter().map(|p| format!("{}\n", p.display())).collect();
    emit(&text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Command::SimulateFgn { h, n } = cli.command {
        let seed = cli.common.seed.unwrap_or(DEFAULT_SEED);
        let x = simulate_fgn(FgnSpec { h, n, seed })?;
        let mut out = String::from("index,value\n");
        for (i, v) in x.iter().enumerate() {
            let _ = writeln!(out, "{i},{v}");
        }
        return emit(&out);
    }
    if let Command::Figures { reports, compare } = &cli.command {
        if !reports.is_empty() {
            let docs = reports
                .iter()
                .map(|p| {
                    let text = std::fs::read_to_string(p)
                        .map_err(|e| Failure::data(format!("{}: {e}", p.display())))?;
                    Ok(parse_report(&text)?)
                })
                .collect::<Result<Vec<ReportDocument>, Failure>>()?;
            let out = cli
                .common
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(chronohurst::report::DEFAULT_OUT));
            return write_figures(&docs, &out, *compare);
        }
    }

    let cfg = cli.common.resolve()?;
    match cli.command {
        Command::Stats => {
            let p = prepare(&cfg)?;
            print_json(&descriptive_stats(&p.series).map_err(|e| e.at_stage("descriptive"))?)
        }
        Command::Clean => {
            let p = prepare(&cfg)?;
            std::fs::create_dir_all(&cfg.out)
                .map_err(|e| Failure::data(format!("{}: {e}", cfg.out.display())))?;
            let path = cfg.out.join(chronohurst::report::CLEAN_FILE);
            std::fs::write(&path, p.series.to_csv())
                .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
            print_json(&p.outliers)
        }
        Command::Battery { family } => {
            let p = prepare(&cfg)?;
            let report = run_battery(&p.series).map_err(|e| e.at_stage("battery"))?;
            let full = serde_json::to_value(&report).map_err(Failure::data)?;
            let key = match family {
                Family::All => return print_json(&full),
                Family::Normality => "normality",
                Family::Stationarity => "stationarity",
                Family::Seasonality => "seasonality",
                Family::Nonlinearity => "nonlinearity",
            };
            let mut section = serde_json::Map::new();
            section.insert(key.to_string(), full[key].clone());
            if matches!(family, Family::Stationarity) {
                section.insert(
                    "integration_order".into(),
                    full["integration_order"].clone(),
                );
            }
            print_json(&section)
        }
        Command::Hurst => {
            let p = prepare(&cfg)?;
            print_json(&hurst(p.series.values(), cfg.method).map_err(|e| e.at_stage("hurst"))?)
        }
        Command::Che => {
            let p = prepare(&cfg)?;
            let curve = che(&p.series, cfg.method, cfg.min_window, cfg.step)
                .map_err(|e| e.at_stage("che"))?;
            emit(&curve.to_csv())
        }
        Command::Segment => {
            let p = prepare(&cfg)?;
            let curve = che(&p.series, cfg.method, cfg.min_window, cfg.step)
                .map_err(|e| e.at_stage("che"))?;
            print_json(&segment_che(&curve).map_err(|e| e.at_stage("segment"))?)
        }
        Command::Report => {
            let doc = run_pipeline(&cfg)?;
            print_paths(&emit_report(&doc, &cfg.out)?)
        }
        Command::Figures { compare, .. } => {
            let doc = run_pipeline(&cfg)?;
            write_figures(&[doc], &cfg.out, compare)
        }
        Command::SimulateFgn { .. } => unreachable!("handled above"),
    }
}

fn write_figures(
    docs: &[ReportDocument],
    out: &std::path::Path,
    compare: bool,
) -> Result<(), Failure> {
    let written = if compare {
        vec![emit_comparison(docs, out)?]
    } else {
        emit_figures(docs, out)?
    };
    print_paths(&written)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

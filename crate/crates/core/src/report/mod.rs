//! Pipeline orchestration, report serialization, and figure output.

mod config;
mod emit;
mod pipeline;
mod svg;

pub use config::{
    parse_months, CleanMode, ConfigLayer, InputSource, PipelineConfig, DEFAULT_OUT, DEFAULT_SEED,
};
pub use emit::{emit_report, parse_report, report_json, CHE_FILE, CLEAN_FILE, REPORT_FILE};
pub use pipeline::{
    prepare, run_pipeline, ConfigEcho, Meta, OutlierSummary, PreparedInput, ReportDocument,
    TOOL_NAME,
};
pub use svg::{compare_svg, emit_comparison, emit_figures, series_svg, HEIGHT, WIDTH};

use std::fs;
use std::path::{Path, PathBuf};

use super::pipeline::ReportDocument;
use crate::error::{Error, Result};

pub const REPORT_FILE: &str = "report.json";
pub const CHE_FILE: &str = "che.csv";
pub const CLEAN_FILE: &str = "clean.csv";

/// Pretty-printed JSON with a trailing newline. Key order follows the
/// struct definitions, so output is stable across runs.
pub fn report_json(doc: &ReportDocument) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_report(text: &str) -> Result<ReportDocument> {
    Ok(serde_json::from_str(text)?)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `report.json`, `che.csv` and `clean.csv` into `dir`, creating it
/// if needed. Returns the written paths.
pub fn emit_report(doc: &ReportDocument, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let files = [
        (REPORT_FILE, report_json(doc)?),
        (CHE_FILE, doc.che.to_csv()),
        (CLEAN_FILE, doc.series.to_csv()),
    ];
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            write_file(&path, &body)?;
            Ok(path)
        })
        .collect()
}

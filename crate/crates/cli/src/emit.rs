//! Writing reports and tables to disk.

use std::path::{Path, PathBuf};

use crate::config::OutputFormat;
use crate::report::SuiteReport;
use crate::HarnessError;

/// Creates `dir` and checks that files can be written there.
pub fn ensure_writable(dir: &Path) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Output(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let probe = dir.join(".quantaequiv-probe");
    std::fs::write(&probe, b"").map_err(io)?;
    std::fs::remove_file(&probe).map_err(io)
}

/// Writes `<suite>.report.json`, then every table as
/// `<suite>.<table>.csv` or `<suite>.<table>.json`. Returns the paths in
/// write order.
pub fn emit_tables(
    report: &SuiteReport,
    format: OutputFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    ensure_writable(dir)?;
    let write = |name: String, body: String| -> Result<PathBuf, HarnessError> {
        let path = dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| HarnessError::Output(format!("{}: {e}", path.display())))?;
        Ok(path)
    };
    let mut paths = vec![write(format!("{}.report.json", report.suite), report.to_json())?];
    for table in &report.tables {
        let (ext, body) = match format {
            OutputFormat::Csv => ("csv", table.to_csv()),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(table).expect("tables serialize");
                s.push('\n');
                ("json", s)
            }
        };
        paths.push(write(format!("{}.{}.{ext}", report.suite, table.id), body)?);
    }
    Ok(paths)
}

//! On-disk cache of invariant reports keyed by canonical expression.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::report::InvariantReport;
use crate::CliError;

/// File name for a canonical expression: its bytes in hex.
fn key_path(dir: &Path, canonical: &str) -> PathBuf {
    let hex: String = canonical.bytes().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{hex}.json"))
}

pub fn load(dir: &Path, canonical: &str) -> Option<InvariantReport> {
    let text = fs::read_to_string(key_path(dir, canonical)).ok()?;
    let report: InvariantReport = serde_json::from_str(&text).ok()?;
    (report.canonical == canonical && report.schema_version == crate::report::SCHEMA_VERSION)
        .then_some(report)
}

/// Writes through a temporary file and a rename so readers never see a
/// partial entry.
pub fn store(dir: &Path, report: &InvariantReport) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::io(format!("cache {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let path = key_path(dir, &report.canonical);
    let tmp = path.with_extension(format!("json.{}.tmp", std::process::id()));
    let mut stored = report.clone();
    stored.timing_ms = None;
    stored.expression = stored.canonical.clone();
    let text = serde_json::to_string_pretty(&stored).expect("report serializes");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    fs::rename(&tmp, &path).map_err(io)?;
    Ok(())
}

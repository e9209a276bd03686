//! Result persistence: records.csv, result.json, optional snapshots.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::result::RunResult;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.display().to_string(),
        source: e,
    }
}

/// Writes the configured artifacts into `config.output.dir`. A missing
/// directory setting writes nothing; snapshots are emitted only when both
/// requested and captured.
pub fn emit_outputs(result: &RunResult, config: &ExperimentConfig) -> Result<()> {
    let Some(dir) = &config.output.dir else {
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    if config.output.format.wants_csv() {
        let path = dir.join("records.csv");
        let mut text = DiagnosticsRecord::csv_header(&config.diagnostics);
        text.push('\n');
        for r in &result.records {
            text.push_str(&r.csv_row());
            text.push('\n');
        }
        fs::write(&path, text).map_err(io_err(&path))?;
    }

    if config.output.format.wants_json() {
        let path = dir.join("result.json");
        let json = serde_json::to_string_pretty(result)
            .map_err(|e| Error::Config(format!("result serialization failed: {e}")))?;
        fs::write(&path, json + "\n").map_err(io_err(&path))?;
    }

    if config.output.snapshots && !result.snapshots.is_empty() {
        let snap_dir = dir.join("snapshots");
        fs::create_dir_all(&snap_dir).map_err(io_err(&snap_dir))?;
        for (k, (t, u)) in result.snapshots.iter().enumerate() {
            let path = snap_dir.join(format!("snapshot_{k:04}.csv"));
            let mut w = Vec::with_capacity(u.len() * 32);
            writeln!(w, "# t = {t}").unwrap();
            writeln!(w, "x,u").unwrap();
            for (x, v) in u.grid().nodes().iter().zip(u.values()) {
                writeln!(w, "{x},{v}").unwrap();
            }
            fs::write(&path, w).map_err(io_err(&path))?;
        }
    }
    Ok(())
}

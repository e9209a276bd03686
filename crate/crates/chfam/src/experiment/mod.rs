//! Scenario orchestration: configuration, canned experiments, verdicts and
//! result persistence. The CLI in `src/main.rs` is a thin shell over
//! [`run`] and [`sweep`].

pub mod config;
pub mod output;
pub mod result;
mod scenarios;

use std::path::PathBuf;

pub use config::{ExperimentConfig, GridConfig, OutputConfig, OutputFormat, Scenario};
pub use output::emit_outputs;
pub use result::{FinalSummary, Provenance, RunResult, Verdict, VerdictStatus};
pub use scenarios::apex_of;

use crate::error::{Error, Result};

/// Executes the configured scenario, writes any requested outputs, and
/// returns the full result. A detected blow-up is a recorded verdict, not
/// an error.
pub fn run(config: &ExperimentConfig) -> Result<RunResult> {
    let config = config.validate()?;
    let result = scenarios::dispatch(&config)?;
    debug_assert!(result.records_strictly_increasing());
    emit_outputs(&result, &config)?;
    Ok(result)
}

/// One sweep axis: a dotted config path and the values to fan out over.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

impl SweepAxis {
    /// Parses `key=v1,v2,v3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (key, rest) = spec.split_once('=').ok_or_else(|| {
            Error::Config(format!("sweep axis '{spec}' must look like key=v1,v2,..."))
        })?;
        let values: Vec<String> = rest
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        if key.trim().is_empty() || values.is_empty() {
            return Err(Error::Config(format!(
                "sweep axis '{spec}' needs a key and at least one value"
            )));
        }
        Ok(Self {
            key: key.trim().to_string(),
            values,
        })
    }
}

/// One completed sweep point.
pub struct SweepOutcome {
    pub label: String,
    pub result: Result<RunResult>,
}

/// Runs the Cartesian product of the sweep axes over a base config text.
/// Each point is an independent run on its own thread with its own output
/// subdirectory `<base>/<label>`.
pub fn sweep(base_text: &str, axes: &[SweepAxis], out_dir: Option<&PathBuf>) -> Result<Vec<SweepOutcome>> {
    if axes.is_empty() {
        return Err(Error::Config("sweep needs at least one --vary axis".into()));
    }
    let mut points: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::new();
        for point in &points {
            for value in &axis.values {
                let mut p = point.clone();
                p.push((axis.key.clone(), value.clone()));
                next.push(p);
            }
        }
        points = next;
    }

    let mut configs = Vec::new();
    for point in &points {
        let mut text = base_text.to_string();
        for (key, value) in point {
            text = config::apply_override(&text, key, value)?;
        }
        let label: String = point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join("_");
        let mut cfg = ExperimentConfig::from_toml_str(&text)?;
        if let Some(dir) = out_dir {
            cfg.output.dir = Some(dir.join(&label));
        } else if let Some(base) = &cfg.output.dir {
            cfg.output.dir = Some(base.join(&label));
        }
        configs.push((label, cfg));
    }

    // independent runs, one thread each; no shared output files
    let outcomes = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|(label, cfg)| {
                let label = label.clone();
                let handle = scope.spawn(move || run(cfg));
                (label, handle)
            })
            .collect();
        handles
            .into_iter()
            .map(|(label, h)| SweepOutcome {
                label,
                result: h.join().expect("sweep worker panicked"),
            })
            .collect::<Vec<_>>()
    });
    Ok(outcomes)
}

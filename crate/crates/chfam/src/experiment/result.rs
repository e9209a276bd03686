//! Run results: diagnostics records, verdicts, provenance.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagnostics::DiagnosticsRecord;
use crate::field::Field;

use super::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// One named check with its measured value and the tolerance it was held
/// to. The anchor describes the property in words so the result file is
/// readable on its own.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub measured: f64,
    pub tolerance: f64,
    pub anchor: String,
}

impl Verdict {
    /// Pass iff `measured <= tolerance`.
    pub fn at_most(measured: f64, tolerance: f64, anchor: &str) -> Self {
        let status = if measured.is_finite() && measured <= tolerance {
            VerdictStatus::Pass
        } else {
            VerdictStatus::Fail
        };
        Self {
            status,
            measured,
            tolerance,
            anchor: anchor.to_string(),
        }
    }

    /// Pass iff `measured >= tolerance`.
    pub fn at_least(measured: f64, tolerance: f64, anchor: &str) -> Self {
        let status = if measured.is_finite() && measured >= tolerance {
            VerdictStatus::Pass
        } else {
            VerdictStatus::Fail
        };
        Self {
            status,
            measured,
            tolerance,
            anchor: anchor.to_string(),
        }
    }

    pub fn inconclusive(tolerance: f64, anchor: &str) -> Self {
        Self {
            status: VerdictStatus::Inconclusive,
            measured: f64::NAN,
            tolerance,
            anchor: anchor.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FinalSummary {
    pub time: f64,
    pub steps: u64,
    pub sup_norm: f64,
    pub h1: f64,
    pub h: f64,
    /// Present when the run terminated in a detected blow-up.
    pub blowup: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub artifact_version: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub records: Vec<DiagnosticsRecord>,
    pub final_summary: FinalSummary,
    pub verdicts: BTreeMap<String, Verdict>,
    pub provenance: Provenance,
    /// Saved fields for snapshot output; not serialized into result.json.
    #[serde(skip)]
    pub snapshots: Vec<(f64, Field)>,
}

impl RunResult {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            records: Vec::new(),
            final_summary: FinalSummary {
                time: 0.0,
                steps: 0,
                sup_norm: 0.0,
                h1: 0.0,
                h: 0.0,
                blowup: None,
            },
            verdicts: BTreeMap::new(),
            provenance: Provenance {
                artifact_version: env!("CARGO_PKG_VERSION").to_string(),
                config: config.clone(),
            },
            snapshots: Vec::new(),
        }
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts
            .values()
            .any(|v| v.status == VerdictStatus::Fail)
    }

    pub fn blew_up(&self) -> bool {
        self.final_summary.blowup.is_some()
    }

    /// `time` strictly increasing across records (the RunResult invariant).
    pub fn records_strictly_increasing(&self) -> bool {
        self.records.windows(2).all(|w| w[0].time < w[1].time)
    }
}

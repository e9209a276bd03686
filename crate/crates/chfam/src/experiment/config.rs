//! Declarative experiment configuration, loaded from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsPlan;
use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::profiles::{ProfileKind, ProfileSpec};
use crate::spectral::DealiasRule;
use crate::timestep::StepControl;

/// The closed registry of canned experiments. Unknown names are config
/// errors at parse time, never a silent fallthrough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Monitor drift of the conserved functionals along a smooth run.
    Conservation,
    /// Track the apex of a (mollified) peaked traveling wave.
    PeakonSpeed,
    /// Check that an exponential right tail keeps its decay rate.
    DecayPersistence,
    /// Probe how super-exponential tails relax onto the kernel rate.
    VanishingProbe,
    /// Show that compactly supported data leaks mass instantly.
    CompactSupport,
    /// Static operator-identity battery on seeded random profiles.
    IdentitySuite,
    /// Fixed-step dt-halving study of the integrator order.
    ConvergenceStudy,
    /// Evolve a user-supplied profile and record diagnostics.
    Custom,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Conservation => "conservation",
            Scenario::PeakonSpeed => "peakon_speed",
            Scenario::DecayPersistence => "decay_persistence",
            Scenario::VanishingProbe => "vanishing_probe",
            Scenario::CompactSupport => "compact_support",
            Scenario::IdentitySuite => "identity_suite",
            Scenario::ConvergenceStudy => "convergence_study",
            Scenario::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub num_points: usize,
    pub half_length: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.num_points, self.half_length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn wants_csv(&self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
    pub fn wants_json(&self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for result files; nothing is written when absent.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Also write per-time field snapshots for external plotting.
    #[serde(default)]
    pub snapshots: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Seed for randomized checks; fixed seed means bit-identical outputs.
    #[serde(default)]
    pub seed: u64,
    pub model: ModelParams,
    pub grid: GridConfig,
    #[serde(default)]
    pub profile: Option<ProfileSpec>,
    #[serde(default)]
    pub control: StepControl,
    #[serde(default = "default_dealias")]
    pub dealias: DealiasRule,
    #[serde(default)]
    pub diagnostics: DiagnosticsPlan,
    /// Diagnostics sampling interval on the time axis.
    #[serde(default = "default_output_interval")]
    pub output_interval: f64,
    #[serde(default)]
    pub output: OutputConfig,
    /// Escalate boundary-decay warnings to hard errors.
    #[serde(default)]
    pub strict: bool,
}

fn default_dealias() -> DealiasRule {
    DealiasRule::TwoThirds
}

fn default_output_interval() -> f64 {
    0.1
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<Self> {
        if !(self.output_interval > 0.0) {
            return Err(Error::Config(format!(
                "output_interval must be positive, got {}",
                self.output_interval
            )));
        }
        self.control.validate()?;
        self.grid.build()?;
        if let Some(p) = &self.profile {
            p.validate()?;
        }
        match self.scenario {
            Scenario::IdentitySuite => {}
            Scenario::PeakonSpeed => {
                let p = self.require_profile()?;
                if !matches!(
                    p.kind,
                    ProfileKind::Peakon | ProfileKind::MollifiedPeakon
                ) {
                    return Err(Error::Config(
                        "peakon_speed needs a peakon or mollified_peakon profile \
                         (set [profile] kind accordingly)"
                            .into(),
                    ));
                }
                if !(p.c > 0.0) {
                    return Err(Error::Config(format!(
                        "peakon_speed needs a positive wave speed c, got {}",
                        p.c
                    )));
                }
            }
            Scenario::DecayPersistence => {
                let p = self.require_profile()?;
                if p.kind == ProfileKind::ExpDecay && !(p.theta > 0.0 && p.theta < 1.0) {
                    return Err(Error::Config(format!(
                        "decay_persistence needs tail exponent theta in (0, 1), got {}",
                        p.theta
                    )));
                }
            }
            Scenario::VanishingProbe => {
                self.require_profile()?;
                if self.model.n.is_multiple_of(2) {
                    return Err(Error::Config(format!(
                        "vanishing_probe requires odd model order n, got {}",
                        self.model.n
                    )));
                }
            }
            Scenario::CompactSupport => {
                let p = self.require_profile()?;
                if p.kind != ProfileKind::Bump {
                    return Err(Error::Config(
                        "compact_support needs a bump profile (compactly supported data)".into(),
                    ));
                }
            }
            _ => {
                self.require_profile()?;
            }
        }
        Ok(self.clone())
    }

    pub fn require_profile(&self) -> Result<&ProfileSpec> {
        self.profile.as_ref().ok_or_else(|| {
            Error::Config(format!(
                "scenario '{}' requires a [profile] section",
                self.scenario.name()
            ))
        })
    }
}

/// Applies a dotted-path override (e.g. `model.n = 3`) to a TOML document,
/// used by parameter sweeps to fan a base config out over a value list.
pub fn apply_override(text: &str, path: &str, value: &str) -> Result<String> {
    let mut doc: toml::Value = text
        .parse()
        .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
    let parsed: toml::Value = format!("v = {value}")
        .parse::<toml::Table>()
        .map(|t| t["v"].clone())
        .or_else(|_| {
            format!("v = \"{value}\"")
                .parse::<toml::Table>()
                .map(|t| t["v"].clone())
        })
        .map_err(|e| Error::Config(format!("cannot parse override value '{value}': {e}")))?;
    let mut cursor = &mut doc;
    let segments: Vec<&str> = path.split('.').collect();
    for (i, seg) in segments.iter().enumerate() {
        let table = cursor.as_table_mut().ok_or_else(|| {
            Error::Config(format!("override path '{path}' does not address a table"))
        })?;
        if i + 1 == segments.len() {
            table.insert(seg.to_string(), parsed);
            break;
        }
        cursor = table
            .entry(seg.to_string())
            .or_insert(toml::Value::Table(toml::Table::new()));
    }
    toml::to_string(&doc).map_err(|e| Error::Config(format!("config serialize error: {e}")))
}

//! Thin command-line shell over the experiment runner.
//!
//! Exit codes: 0 all checks pass, 1 any check fails, 2 configuration or
//! I/O error, 3 blow-up encountered.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chfam::experiment::{self, ExperimentConfig, OutputFormat, RunResult, SweepAxis, VerdictStatus};
use chfam::Error;

#[derive(Parser)]
#[command(name = "chfam", version, about = "Pseudospectral lab for a Camassa-Holm-type equation family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config's [output] dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Escalate boundary-decay warnings to hard errors.
    #[arg(long, global = true)]
    strict: bool,
    /// Result file format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Both => OutputFormat::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute one experiment from a TOML config file.
    Run { config: PathBuf },
    /// Fan a base config out over value lists and run every combination.
    Sweep {
        config: PathBuf,
        /// Sweep axis as key=v1,v2,... (repeatable), e.g. model.n=1,3,5
        #[arg(long, required = true)]
        vary: Vec<String>,
    },
    /// Run the static operator-identity battery on random profiles.
    CheckIdentities {
        /// Seed for the random profile suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the artifact version.
    Version,
}

fn apply_flags(config: &mut ExperimentConfig, cli: &Cli) {
    if let Some(out) = &cli.out {
        config.output.dir = Some(out.clone());
    }
    if let Some(format) = cli.format {
        config.output.format = format.into();
    }
    if cli.strict {
        config.strict = true;
    }
}

fn print_verdicts(label: &str, result: &RunResult) {
    for (name, v) in &result.verdicts {
        let status = match v.status {
            VerdictStatus::Pass => "PASS",
            VerdictStatus::Fail => "FAIL",
            VerdictStatus::Inconclusive => "INCONCLUSIVE",
        };
        println!(
            "{label}{name}: {status} (measured {:.6e}, tolerance {:.6e})",
            v.measured, v.tolerance
        );
    }
    if let Some(msg) = &result.final_summary.blowup {
        println!("{label}{msg}");
    }
}

fn exit_for(results: &[&RunResult]) -> ExitCode {
    if results.iter().any(|r| r.blew_up()) {
        ExitCode::from(3)
    } else if results.iter().any(|r| r.any_fail()) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::Io { .. } => ExitCode::from(2),
        Error::BlowUp { .. } => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { config } => {
            let mut cfg = match ExperimentConfig::load(config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            apply_flags(&mut cfg, &cli);
            match experiment::run(&cfg) {
                Ok(result) => {
                    print_verdicts("", &result);
                    exit_for(&[&result])
                }
                Err(e) => fail(e),
            }
        }
        Command::Sweep { config, vary } => {
            let text = match std::fs::read_to_string(config) {
                Ok(t) => t,
                Err(e) => {
                    return fail(Error::Io {
                        path: config.display().to_string(),
                        source: e,
                    })
                }
            };
            let axes: Vec<SweepAxis> = match vary.iter().map(|v| SweepAxis::parse(v)).collect() {
                Ok(a) => a,
                Err(e) => return fail(e),
            };
            // --strict / --format propagate through the base text
            let text = match prepare_sweep_text(text, &cli) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            match experiment::sweep(&text, &axes, cli.out.as_ref()) {
                Ok(outcomes) => {
                    let mut results = Vec::new();
                    let mut failed_point = false;
                    for o in &outcomes {
                        match &o.result {
                            Ok(r) => {
                                print_verdicts(&format!("[{}] ", o.label), r);
                                results.push(r);
                            }
                            Err(e) => {
                                eprintln!("[{}] error: {e}", o.label);
                                failed_point = true;
                            }
                        }
                    }
                    if failed_point {
                        ExitCode::from(2)
                    } else {
                        exit_for(&results)
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::CheckIdentities { seed } => {
            let text = format!(
                r#"
                scenario = "identity_suite"
                seed = {seed}
                [model]
                n = 1
                [grid]
                num_points = 4096
                half_length = 31.41592653589793
                "#
            );
            let mut cfg = match ExperimentConfig::from_toml_str(&text) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            apply_flags(&mut cfg, &cli);
            match experiment::run(&cfg) {
                Ok(result) => {
                    print_verdicts("", &result);
                    exit_for(&[&result])
                }
                Err(e) => fail(e),
            }
        }
        Command::Version => {
            println!("chfam {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}

/// Folds the global CLI flags into the sweep base text so every fanned-out
/// config inherits them.
fn prepare_sweep_text(mut text: String, cli: &Cli) -> Result<String, Error> {
    if cli.strict {
        text = experiment::config::apply_override(&text, "strict", "true")?;
    }
    if let Some(format) = cli.format {
        let value = match OutputFormat::from(format) {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Both => "both",
        };
        text = experiment::config::apply_override(&text, "output.format", value)?;
    }
    Ok(text)
}

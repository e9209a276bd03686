//! Probes two unique-continuation-style properties at a fixed later time:
//! a solution that is nonzero initially does not develop an interval of
//! zeros, and a decaying tail relaxes toward the kernel rate e^{-|x|}.
//!
//! Run with: cargo run --release --example vanishing_probe

use chfam::experiment::{self, ExperimentConfig};

fn main() -> chfam::Result<()> {
    let config = ExperimentConfig::from_toml_str(&format!(
        r#"
        scenario = "vanishing_probe"
        [model]
        n = 1
        [grid]
        num_points = 4096
        half_length = {}
        [profile]
        kind = "gaussian"
        c = 0.5
        sigma = 1.5
        [control]
        cfl = 0.3
        dt_max = 0.02
        t_end = 1.0
        "#,
        20.0 * std::f64::consts::PI
    ))?;

    let result = experiment::run(&config)?;
    for (name, v) in &result.verdicts {
        println!(
            "{name}: {:?} (measured {:.4e}, tolerance {:.4e})",
            v.status, v.measured, v.tolerance
        );
    }
    Ok(())
}

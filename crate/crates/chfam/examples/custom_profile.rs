//! Runs a short custom-scenario simulation from an initial profile given
//! as a text expression over `x`, recording the standard diagnostics.
//!
//! Run with: cargo run --release --example custom_profile

use chfam::experiment::{self, ExperimentConfig};

fn main() -> chfam::Result<()> {
    let config = ExperimentConfig::from_toml_str(&format!(
        r#"
        scenario = "custom"
        [model]
        n = 1
        [grid]
        num_points = 2048
        half_length = {}
        [profile]
        kind = "custom_expression"
        expression = "0.5 * exp(-(x - 2.0)^2) + 0.2 * sin(x / 5.0) * exp(-x^2 / 50.0)"
        [control]
        cfl = 0.2
        dt_max = 0.02
        t_end = 1.0
        [diagnostics]
        lp_exponents = [2.0, 4.0]
        "#,
        10.0 * std::f64::consts::PI
    ))?;

    let result = experiment::run(&config)?;
    println!(" time        H1              H           sup|u|      ||u||_2     ||u||_4");
    for r in &result.records {
        print!("{:5.2}  {:13.8}  {:13.8}  {:9.6}", r.time, r.h1, r.h, r.sup_norm);
        for (_, v) in &r.lp_norms {
            print!("  {v:9.6}");
        }
        println!();
    }
    let fin = &result.final_summary;
    println!();
    println!(
        "final state: t = {}, {} steps, sup-norm {:.6}",
        fin.time, fin.steps, fin.sup_norm
    );
    Ok(())
}

//! Evolves data with an exponentially decaying tail e^{-theta |x|} and
//! watches two things: the fitted tail exponent (it should not drop below
//! theta) and a ladder of weighted sup norms (they should stay bounded).
//!
//! Run with: cargo run --release --example decay_persistence

use chfam::experiment::{self, ExperimentConfig};

fn main() -> chfam::Result<()> {
    let config = ExperimentConfig::from_toml_str(&format!(
        r#"
        scenario = "decay_persistence"
        dealias = {{ strict = {{ n = 3 }} }}
        [model]
        n = 3
        [grid]
        num_points = 4096
        half_length = {}
        [profile]
        kind = "exp_decay"
        c = 0.25
        theta = 0.5
        [control]
        cfl = 0.3
        dt_max = 0.02
        t_end = 2.0
        [diagnostics]
        weight_ns = [10, 20, 40]
        weight_theta = 0.5
        tail_window = [12.0, 30.0]
        "#,
        20.0 * std::f64::consts::PI
    ))?;

    let result = experiment::run(&config)?;
    println!(" time    tail exponent   wsup N=10    wsup N=20    wsup N=40");
    for r in &result.records {
        let theta = r.tail_fit.as_ref().map_or(f64::NAN, |f| f.theta_hat);
        print!("{:5.2}  {theta:14.6}", r.time);
        for (_, v) in &r.weighted_sup {
            print!("  {v:11.6}");
        }
        println!();
    }
    println!();
    for (name, v) in &result.verdicts {
        println!("{name}: {:?} (measured {:.4e})", v.status, v.measured);
    }
    Ok(())
}

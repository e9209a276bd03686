//! Evolves a smoothed peakon and prints the drift of the two conserved
//! quantities (the mean-like H1 and the energy H) over time.
//!
//! Run with: cargo run --release --example conservation

use chfam::dynamics::ModelParams;
use chfam::profiles::ProfileSpec;
use chfam::spectral::DealiasRule;
use chfam::timestep::{self, SolverState, StepControl};
use chfam::{diagnostics, Grid};

fn main() -> chfam::Result<()> {
    let n = 3;
    let grid = Grid::new(1024, 40.0 * std::f64::consts::PI)?;
    let spec = ProfileSpec::mollified_peakon(1.0, 0.0, 0.2);
    let u0 = chfam::profiles::sample_profile(&spec, &grid, n, false)?;

    let params = ModelParams::new(n)?;
    // cubic nonlinearity: the two-thirds rule is not enough, pad for u^4
    let rule = DealiasRule::Strict { n };
    let ctl = StepControl {
        cfl: 0.05,
        dt_max: 0.05,
        t_end: 5.0,
        blowup_threshold: 1e3,
    };

    let h1_0 = diagnostics::conserved_h1(&u0);
    let h_0 = diagnostics::conserved_h(&u0)?;
    println!("t = 0.000  H1 = {h1_0:.12}  H = {h_0:.12}");

    let mut next_report = 1.0;
    let state = timestep::evolve(SolverState::new(u0, params, rule), &ctl, |s| {
        if s.time >= next_report - 1e-12 {
            let h1 = diagnostics::conserved_h1(&s.u);
            let h = diagnostics::conserved_h(&s.u).expect("grid is power-of-two sized");
            println!(
                "t = {:.3}  H1 = {h1:.12}  H = {h:.12}  (rel drift {:.2e}, {:.2e})",
                s.time,
                (h1 - h1_0).abs() / h1_0.abs(),
                (h - h_0).abs() / h_0.abs()
            );
            next_report += 1.0;
        }
    })?;

    println!("finished after {} steps", state.step_count);
    Ok(())
}

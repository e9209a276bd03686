//! Tracks the apex of a smoothed peakon and compares its measured speed
//! and height against the traveling-wave prediction (speed c, height
//! c^(1/n) for nonlinearity degree n).
//!
//! Run with: cargo run --release --example peakon_transport

use chfam::dynamics::ModelParams;
use chfam::experiment::apex_of;
use chfam::profiles::ProfileSpec;
use chfam::spectral::DealiasRule;
use chfam::timestep::{self, SolverState, StepControl};
use chfam::Grid;

fn main() -> chfam::Result<()> {
    let n = 2;
    let c = 1.0f64;
    let grid = Grid::new(8192, 25.0)?;
    let spec = ProfileSpec::mollified_peakon(c, -5.0, 0.02);
    let u0 = chfam::profiles::sample_profile(&spec, &grid, n, false)?;

    let params = ModelParams::new(n)?;
    let ctl = StepControl {
        cfl: 0.5,
        dt_max: 0.01,
        t_end: 5.0,
        blowup_threshold: 1e3,
    };

    let mut track: Vec<(f64, f64, f64)> = Vec::new();
    let mut next_sample = 0.0;
    let record = |track: &mut Vec<(f64, f64, f64)>, t: f64, u: &chfam::Field| {
        let (pos, amp) = apex_of(u);
        track.push((t, pos, amp));
    };
    record(&mut track, 0.0, &u0);
    next_sample += 0.5;

    timestep::evolve(
        SolverState::new(u0, params, DealiasRule::TwoThirds),
        &ctl,
        |s| {
            if s.time >= next_sample - 1e-12 {
                record(&mut track, s.time, &s.u);
                next_sample += 0.5;
            }
        },
    )?;

    println!("   t      apex position   apex height");
    for (t, pos, amp) in &track {
        println!("{t:5.2}  {pos:15.6}  {amp:12.6}");
    }

    // least-squares slope of position vs time
    let m = track.len() as f64;
    let (st, sp): (f64, f64) = track.iter().fold((0.0, 0.0), |a, r| (a.0 + r.0, a.1 + r.1));
    let (tb, pb) = (st / m, sp / m);
    let num: f64 = track.iter().map(|r| (r.0 - tb) * (r.1 - pb)).sum();
    let den: f64 = track.iter().map(|r| (r.0 - tb) * (r.0 - tb)).sum();
    let speed = num / den;
    let expected_height = c.powf(1.0 / n as f64);

    println!();
    println!("measured speed  {speed:.6}  (traveling-wave prediction {c:.6})");
    println!(
        "final height    {:.6}  (traveling-wave prediction {expected_height:.6})",
        track.last().unwrap().2
    );
    Ok(())
}

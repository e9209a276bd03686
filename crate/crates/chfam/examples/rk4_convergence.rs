//! Measures the temporal convergence order of the RK4 stepper by halving
//! the (fixed) step size and comparing successive solutions at a common
//! final time. The observed order should approach 4.
//!
//! Run with: cargo run --release --example rk4_convergence

use chfam::dynamics::ModelParams;
use chfam::profiles::ProfileSpec;
use chfam::spectral::DealiasRule;
use chfam::timestep::{step_rk4, SolverState};
use chfam::{Field, Grid};

fn main() -> chfam::Result<()> {
    let grid = Grid::new(256, 10.0 * std::f64::consts::PI)?;
    let spec = ProfileSpec::mollified_peakon(1.0, 0.0, 0.2);
    let u0 = chfam::profiles::sample_profile(&spec, &grid, 1, false)?;
    let params = ModelParams::new(1)?;
    let t_end = 0.5;

    let solve = |steps: u32| -> chfam::Result<Field> {
        let dt = t_end / steps as f64;
        let mut state = SolverState::new(u0.clone(), params, DealiasRule::TwoThirds);
        for _ in 0..steps {
            state = step_rk4(&state, dt)?;
        }
        Ok(state.u)
    };

    let solutions: Vec<Field> = [16u32, 32, 64, 128, 256]
        .iter()
        .map(|&s| solve(s))
        .collect::<chfam::Result<_>>()?;

    let errors: Vec<f64> = solutions
        .windows(2)
        .map(|w| w[0].max_abs_diff(&w[1]))
        .collect();
    println!("steps   error vs next refinement   observed order");
    let mut steps = 16;
    for (i, e) in errors.iter().enumerate() {
        let order = if i > 0 {
            format!("{:.3}", (errors[i - 1] / e).log2())
        } else {
            "-".to_string()
        };
        println!("{steps:5}   {e:24.6e}   {order}");
        steps *= 2;
    }
    Ok(())
}

//! Verifies the interval form of the nonlocal flux: the difference of the
//! smoothed flux between two points equals an integral of the source
//! against the two-point kernel S_{a,b}, and that kernel is one-signed
//! outside [a, b].
//!
//! Run with: cargo run --release --example kernel_identities

use chfam::diagnostics::{kernel_identity_residual, s_kernel};
use chfam::dynamics::ModelParams;
use chfam::{Field, Grid};

fn main() -> chfam::Result<()> {
    let grid = Grid::new(4096, 10.0 * std::f64::consts::PI)?;
    let u = Field::from_fn(grid, |x| {
        (-(x - 1.0) * (x - 1.0) / 2.0).exp() + 0.4 * (-(x + 3.0) * (x + 3.0)).exp()
    })?;

    for n in [1u32, 2, 3] {
        let params = ModelParams::new(n)?;
        for (a, b) in [(-2.0, 1.5), (-4.0, 4.0), (0.5, 0.9)] {
            let resid = kernel_identity_residual(&u, &params, a, b)?;
            println!("n = {n}, interval [{a:5.2}, {b:5.2}]: residual {resid:.3e}");
        }
    }

    // S_{a,b}(y) keeps one sign on each side of the interval
    let (a, b) = (-1.0, 2.0);
    let min_outside = (-300..=300)
        .map(|i| i as f64 / 10.0)
        .filter(|y| *y < a || *y > b)
        .map(|y| s_kernel(a, b, y))
        .fold(f64::INFINITY, f64::min);
    println!("min of S_{{{a},{b}}} outside the interval: {min_outside:.3e} (must be >= 0)");
    Ok(())
}

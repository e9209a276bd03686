//! Cross-checks the two independent implementations of the smoothing
//! operator (1 - d_xx)^{-1}: the spectral multiplier 1/(1 + k^2) against
//! direct quadrature of the convolution with the kernel e^{-|x|}/2.
//!
//! Run with: cargo run --release --example operator_oracles

use chfam::convolve::{green_convolve, BoundaryPolicy, KernelKind};
use chfam::spectral;
use chfam::{Field, Grid};

fn main() -> chfam::Result<()> {
    let grid = Grid::new(4096, 10.0 * std::f64::consts::PI)?;
    let f = Field::from_fn(grid, |x| {
        0.8 * (-(x - 2.0) * (x - 2.0) / 2.0).exp() - 0.5 * (-(x + 4.0) * (x + 4.0) / 3.0).exp()
    })?;

    let spectral_smooth = spectral::helmholtz_inverse(&f)?;
    let kernel_smooth = green_convolve(&f, KernelKind::Green, BoundaryPolicy::Strict)?;
    let gap = spectral_smooth.max_abs_diff(&kernel_smooth);
    println!("(1 - d_xx)^-1      : spectral vs kernel quadrature, max gap {gap:.3e}");

    let spectral_dx = spectral::dx_helmholtz_inverse(&f)?;
    let kernel_dx = green_convolve(&f, KernelKind::GreenDx, BoundaryPolicy::Strict)?;
    let gap_dx = spectral_dx.max_abs_diff(&kernel_dx);
    println!("d_x (1 - d_xx)^-1  : spectral vs kernel quadrature, max gap {gap_dx:.3e}");

    // the smoothing of f minus f equals the second derivative of the smoothing
    let check = spectral::spectral_second_derivative(&spectral_smooth)?;
    let resid = (0..check.values().len())
        .map(|i| (spectral_smooth.values()[i] - f.values()[i] - check.values()[i]).abs())
        .fold(0.0f64, f64::max);
    println!("operator identity  : max |(1-d_xx)^-1 f - f - d_xx (1-d_xx)^-1 f| = {resid:.3e}");
    Ok(())
}

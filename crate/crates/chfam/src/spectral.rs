//! Fourier-side machinery: derivatives, Helmholtz inversion, dealiasing,
//! quadrature and off-node spectral interpolation.
//!
//! All operators act on real fields through a complex FFT (rustfft). Forward
//! transforms are unnormalized; the `1/N` factor is applied on the inverse.
//! Odd-order derivative multipliers zero the Nyquist mode.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::field::Field;
use crate::grid::Grid;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(PlanCache {
        planner: FftPlanner::new(),
        forward: HashMap::new(),
        inverse: HashMap::new(),
    });
}

struct PlanCache {
    planner: FftPlanner<f64>,
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn with_plans<T>(f: impl FnOnce(&mut PlanCache) -> T) -> T {
    PLANS.with(|p| f(&mut p.borrow_mut()))
}

/// Forward DFT of the field values (unnormalized).
pub fn forward(f: &Field) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = f.values().iter().map(|&v| Complex::new(v, 0.0)).collect();
    with_plans(|p| {
        let n = buf.len();
        let plan = p
            .forward
            .entry(n)
            .or_insert_with(|| p.planner.plan_fft_forward(n))
            .clone();
        plan.process(&mut buf);
    });
    buf
}

/// Inverse DFT back to a real field (imaginary parts discarded).
pub fn inverse(grid: &Grid, mut hat: Vec<Complex<f64>>) -> Field {
    with_plans(|p| {
        let n = hat.len();
        let plan = p
            .inverse
            .entry(n)
            .or_insert_with(|| p.planner.plan_fft_inverse(n))
            .clone();
        plan.process(&mut hat);
    });
    let n = hat.len() as f64;
    let values = hat.iter().map(|c| c.re / n).collect();
    Field::new(grid.clone(), values).expect("inverse transform produced non-finite values")
}

fn apply_multiplier(f: &Field, mult: impl Fn(f64, usize) -> Complex<f64>) -> Field {
    let mut hat = forward(f);
    let ks = f.grid().wavenumbers();
    for (j, h) in hat.iter_mut().enumerate() {
        *h *= mult(ks[j], j);
    }
    inverse(f.grid(), hat)
}

/// Spectral first derivative; multiplier `i k`, Nyquist zeroed.
pub fn spectral_derivative(f: &Field) -> Result<Field> {
    f.check_finite("spectral_derivative input")?;
    let ny = f.grid().nyquist_index();
    Ok(apply_multiplier(f, |k, j| {
        if j == ny {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(0.0, k)
        }
    }))
}

/// Spectral second derivative; multiplier `-k^2` (even order, Nyquist kept).
pub fn spectral_second_derivative(f: &Field) -> Result<Field> {
    f.check_finite("spectral_second_derivative input")?;
    Ok(apply_multiplier(f, |k, _| Complex::new(-k * k, 0.0)))
}

/// `(1 - d_xx)^{-1} f` via the multiplier `1/(1+k^2)`.
pub fn helmholtz_inverse(f: &Field) -> Result<Field> {
    f.check_finite("helmholtz_inverse input")?;
    Ok(apply_multiplier(f, |k, _| {
        Complex::new(1.0 / (1.0 + k * k), 0.0)
    }))
}

/// `d_x (1 - d_xx)^{-1} f` via the multiplier `i k/(1+k^2)`, Nyquist zeroed.
pub fn dx_helmholtz_inverse(f: &Field) -> Result<Field> {
    f.check_finite("dx_helmholtz_inverse input")?;
    let ny = f.grid().nyquist_index();
    Ok(apply_multiplier(f, |k, j| {
        if j == ny {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(0.0, k / (1.0 + k * k))
        }
    }))
}

/// Which spectral band survives a dealiasing pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    /// Zero modes with index `|j| >= N/3` (alias-free quadratic products).
    TwoThirds,
    /// Zero modes with index `|j| >= N/(n+2)`; alias-free for degree-(n+1)
    /// products.
    Strict { n: u32 },
    /// No filtering.
    Off,
}

impl DealiasRule {
    /// First removed mode index for a grid of `num_points` modes, if any.
    pub fn cutoff(self, num_points: usize) -> Option<usize> {
        match self {
            DealiasRule::TwoThirds => Some(num_points / 3),
            DealiasRule::Strict { n } => Some(num_points / (n as usize + 2)),
            DealiasRule::Off => None,
        }
    }
}

/// In-place spectral-tail zeroing on an already transformed signal.
pub fn dealias_hat(hat: &mut [Complex<f64>], rule: DealiasRule) {
    let Some(cut) = rule.cutoff(hat.len()) else {
        return;
    };
    let n = hat.len();
    for (j, h) in hat.iter_mut().enumerate() {
        let idx = j.min(n - j); // symmetric index |j|
        if idx >= cut {
            *h = Complex::new(0.0, 0.0);
        }
    }
}

/// Zeroes the spectral tail of `f` per the rule; band-limited inputs inside
/// the retained band pass through unchanged.
pub fn dealias(f: &Field, rule: DealiasRule) -> Field {
    if rule.cutoff(f.len()).is_none() {
        return f.clone();
    }
    let mut hat = forward(f);
    dealias_hat(&mut hat, rule);
    inverse(f.grid(), hat)
}

/// Periodic trapezoidal (= rectangle) rule `dx * sum(values)`; spectrally
/// accurate for smooth periodic integrands.
pub fn quadrature(f: &Field) -> f64 {
    f.grid().spacing() * f.values().iter().sum::<f64>()
}

/// Spectral-side energy `dx/N * sum |u_hat|^2`, equal to `quadrature(f^2)`
/// by Parseval.
pub fn spectral_energy(f: &Field) -> f64 {
    let hat = forward(f);
    let n = f.len() as f64;
    f.grid().spacing() / n * hat.iter().map(|c| c.norm_sqr()).sum::<f64>()
}

/// Discrete Sobolev `H^s` norm through the weights `(1+k^2)^s`.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let hat = forward(f);
    let ks = f.grid().wavenumbers();
    let n = f.len() as f64;
    let sum: f64 = hat
        .iter()
        .zip(ks)
        .map(|(c, &k)| (1.0 + k * k).powf(s) * c.norm_sqr())
        .sum();
    (f.grid().spacing() / n * sum).sqrt()
}

/// Evaluates the trigonometric interpolant of `f` at an arbitrary point `x`.
///
/// The Nyquist mode is split evenly between `+k` and `-k` so the interpolant
/// is real.
pub fn eval_at(f: &Field, x: f64) -> f64 {
    let hat = forward(f);
    let n = f.len();
    let ny = n / 2;
    let ks = f.grid().wavenumbers();
    // phase convention: node i corresponds to x_i = -L + i*dx, so the DFT
    // basis function is exp(i k_j (x + L)).
    let shift = x + f.grid().half_length();
    let mut acc = hat[0].re;
    for j in 1..ny {
        let phase = ks[j] * shift;
        acc += 2.0 * (hat[j] * Complex::from_polar(1.0, phase)).re;
    }
    // modes ny+1..n are covered by the conjugate pairing above
    acc += hat[ny].re * (ks[ny] * shift).cos();
    acc / n as f64
}

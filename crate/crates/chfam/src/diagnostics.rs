//! Measured quantities: conserved functionals, L^p and weighted norms,
//! tail-exponent fits, support probes and the convolution-kernel identities.

use serde::{Deserialize, Serialize};

use crate::convolve::{self, KernelKind};
use crate::dynamics::{self, ModelParams};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::spectral;

/// `H_1 = int u dx`.
pub fn conserved_h1(u: &Field) -> f64 {
    spectral::quadrature(u)
}

/// `H = 1/2 int (u^2 + u_x^2) dx`, with the derivative taken spectrally.
pub fn conserved_h(u: &Field) -> Result<f64> {
    let ux = spectral::spectral_derivative(u)?;
    let dens = u.zip_with(&ux, |a, b| 0.5 * (a * a + b * b));
    Ok(spectral::quadrature(&dens))
}

/// `L^p` norm; pass `f64::INFINITY` for the max-norm.
pub fn lp_norm(u: &Field, p: f64) -> f64 {
    assert!(p >= 1.0, "lp_norm requires p >= 1");
    if p.is_infinite() {
        return u.max_abs();
    }
    let integrand = u.map(|v| v.abs().powf(p));
    spectral::quadrature(&integrand).powf(1.0 / p)
}

const WEIGHT_EXP_CAP: f64 = 700.0;

/// Sampled weight: 1 for `x <= 0`, `e^{theta x}` on `(0, N)`, `e^{theta N}`
/// for `x >= N`.
pub fn weight_phi(n_weight: u32, theta: f64, grid: &Grid) -> Result<Field> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Config(format!(
            "weight requires theta in (0, 1), got {theta}"
        )));
    }
    let cap = theta * n_weight as f64;
    if cap > WEIGHT_EXP_CAP {
        return Err(Error::Config(format!(
            "weight exponent theta*N = {cap} would overflow"
        )));
    }
    let nf = n_weight as f64;
    Field::from_fn(grid.clone(), |x| {
        if x <= 0.0 {
            1.0
        } else if x < nf {
            (theta * x).exp()
        } else {
            cap.exp()
        }
    })
}

/// `max_i |phi_i u_i|`.
pub fn weighted_sup(u: &Field, phi: &Field) -> f64 {
    u.zip_with(phi, |a, b| a * b).max_abs()
}

/// `||phi u||_inf + ||phi u_x||_inf` with the spectral derivative.
pub fn weighted_pair_sup(u: &Field, phi: &Field) -> Result<f64> {
    let ux = spectral::spectral_derivative(u)?;
    Ok(weighted_sup(u, phi) + weighted_sup(&ux, phi))
}

/// Trapezoid with Gregory corrections applied piecewise between the given
/// break node indices, so integrand kinks that sit on break nodes do not
/// degrade the order.
fn piecewise_gregory(values: &[f64], dx: f64, breaks: &[usize]) -> f64 {
    let mut pts = vec![0usize];
    pts.extend(breaks.iter().copied().filter(|&b| b > 0 && b < values.len() - 1));
    pts.push(values.len() - 1);
    pts.sort_unstable();
    pts.dedup();
    pts.windows(2)
        .map(|w| convolve::gregory_integral(values, dx, w[0], w[1]))
        .sum()
}

/// Quadrature of `phi_N(x) e^{-|x-y|} / phi_N(y)` over the grid, with the
/// cap position `N` chosen at half the domain half-length. The evaluation
/// point must sit well inside `(0, N)` with the kernel resolved.
pub fn weight_convolution_identity(theta: f64, x: f64, grid: &Grid) -> Result<f64> {
    let n_weight = (grid.half_length() / 2.0).floor() as u32;
    let phi = weight_phi(n_weight, theta, grid)?;
    let phi_x = if x <= 0.0 {
        1.0
    } else if x < n_weight as f64 {
        (theta * x).exp()
    } else {
        (theta * n_weight as f64).exp()
    };
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(phi.values())
        .map(|(&y, &p)| (-(x - y).abs()).exp() / p)
        .collect();
    // integrand kinks: weight branch points at 0 and N, kernel kink at x
    let breaks = [
        grid.nearest_node(0.0),
        grid.nearest_node(x),
        grid.nearest_node(n_weight as f64),
    ];
    Ok(phi_x * piecewise_gregory(&values, grid.spacing(), &breaks))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSide {
    Right,
    Left,
}

/// Result of a log-linear tail fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailFit {
    pub window: (f64, f64),
    pub side: TailSide,
    /// Estimated decay exponent (positive for a decaying tail).
    pub theta_hat: f64,
    pub intercept: f64,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    pub nodes_used: usize,
}

pub const TAIL_FLOOR: f64 = 1e-14;
pub const TAIL_MIN_NODES: usize = 8;

/// Least-squares line through `(x, log|u|)` on window nodes above the floor.
pub fn fit_tail(u: &Field, window: (f64, f64), side: TailSide) -> Result<TailFit> {
    assert!(window.0 < window.1, "tail window must satisfy x_lo < x_hi");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &x) in u.grid().nodes().iter().enumerate() {
        if x >= window.0 && x <= window.1 {
            let v = u.values()[i].abs();
            if v > TAIL_FLOOR {
                xs.push(x);
                ys.push(v.ln());
            }
        }
    }
    if xs.len() < TAIL_MIN_NODES {
        return Err(Error::InsufficientData {
            needed: TAIL_MIN_NODES,
            found: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let theta_hat = match side {
        TailSide::Right => -slope,
        TailSide::Left => slope,
    };
    Ok(TailFit {
        window,
        side,
        theta_hat,
        intercept,
        residual: (ss / n).sqrt(),
        nodes_used: xs.len(),
    })
}

/// `int u^2 1{x outside [a, b]} dx` — zero iff `u` vanishes off the
/// interval.
pub fn support_mass(u: &Field, outside: (f64, f64)) -> f64 {
    assert!(outside.0 < outside.1);
    let dx = u.grid().spacing();
    dx * u
        .grid()
        .nodes()
        .iter()
        .zip(u.values())
        .filter(|(&x, _)| x < outside.0 || x > outside.1)
        .map(|(_, &v)| v * v)
        .sum::<f64>()
}

/// Interval comparison kernel
/// `S_{a,b}(y) = 1/2 sgn(a-y) e^{-|a-y|} - 1/2 sgn(b-y) e^{-|b-y|}`,
/// positive for `y` outside `[a, b]`.
pub fn s_kernel(a: f64, b: f64, y: f64) -> f64 {
    assert!(a < b, "s_kernel requires a < b");
    let term = |p: f64| 0.5 * (p - y).signum() * (-(p - y).abs()).exp();
    let sa = if (a - y) == 0.0 { 0.0 } else { term(a) };
    let sb = if (b - y) == 0.0 { 0.0 } else { term(b) };
    sa - sb
}

/// Absolute residual of `F(b) - F(a) = int S_{a,b}(y) f(y) dy`.
///
/// The left side uses the spectral flux with trigonometric interpolation at
/// the interval endpoints; the right side integrates the kernel directly by
/// kink-split quadrature, an FFT-free path.
pub fn kernel_identity_residual(
    u: &Field,
    params: &ModelParams,
    a: f64,
    b: f64,
) -> Result<f64> {
    assert!(a < b, "kernel identity requires a < b");
    let f = dynamics::compute_f(u, params)?;
    let flux = dynamics::compute_flux(&f)?;
    let lhs = spectral::eval_at(&flux, b) - spectral::eval_at(&flux, a);
    let rhs = convolve::green_convolve_at(&f, KernelKind::GreenDx, b)?
        - convolve::green_convolve_at(&f, KernelKind::GreenDx, a)?;
    Ok((lhs - rhs).abs())
}

/// One sampled row of run diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub h1: f64,
    pub h: f64,
    pub sup_norm: f64,
    pub sup_norm_ux: f64,
    /// `(p, ||u||_p)` pairs for the configured exponents.
    pub lp_norms: Vec<(f64, f64)>,
    /// `(N, ||phi_N u||_inf + ||phi_N u_x||_inf)` pairs.
    pub weighted_sup: Vec<(u32, f64)>,
    pub tail_fit: Option<TailFit>,
    pub support_mass: Option<f64>,
}

/// What a [`DiagnosticsRecord`] samples at each output time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsPlan {
    #[serde(default)]
    pub lp_exponents: Vec<f64>,
    #[serde(default)]
    pub weight_ns: Vec<u32>,
    #[serde(default = "default_weight_theta")]
    pub weight_theta: f64,
    #[serde(default)]
    pub tail_window: Option<(f64, f64)>,
    #[serde(default = "default_tail_side")]
    pub tail_side: TailSide,
    #[serde(default)]
    pub support_outside: Option<(f64, f64)>,
}

fn default_weight_theta() -> f64 {
    0.5
}
fn default_tail_side() -> TailSide {
    TailSide::Right
}

impl Default for DiagnosticsPlan {
    fn default() -> Self {
        Self {
            lp_exponents: vec![2.0, 4.0],
            weight_ns: Vec::new(),
            weight_theta: 0.5,
            tail_window: None,
            tail_side: TailSide::Right,
            support_outside: None,
        }
    }
}

impl DiagnosticsRecord {
    pub fn measure(time: f64, u: &Field, plan: &DiagnosticsPlan) -> Result<DiagnosticsRecord> {
        let ux = spectral::spectral_derivative(u)?;
        let mut lp_norms = Vec::new();
        for &p in &plan.lp_exponents {
            lp_norms.push((p, lp_norm(u, p)));
        }
        let mut wsup = Vec::new();
        for &nw in &plan.weight_ns {
            let phi = weight_phi(nw, plan.weight_theta, u.grid())?;
            wsup.push((nw, weighted_sup(u, &phi) + weighted_sup(&ux, &phi)));
        }
        let tail_fit = match plan.tail_window {
            Some(w) => match fit_tail(u, w, plan.tail_side) {
                Ok(f) => Some(f),
                Err(Error::InsufficientData { .. }) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        let support = plan.support_outside.map(|iv| support_mass(u, iv));
        Ok(DiagnosticsRecord {
            time,
            h1: conserved_h1(u),
            h: conserved_h(u)?,
            sup_norm: u.max_abs(),
            sup_norm_ux: ux.max_abs(),
            lp_norms,
            weighted_sup: wsup,
            tail_fit,
            support_mass: support,
        })
    }

    /// Frozen CSV column order:
    /// `time,H1,H,sup_norm,sup_norm_ux,lp_<p>...,wsup_<N>...,tail_theta,tail_residual,support_mass`.
    pub fn csv_header(plan: &DiagnosticsPlan) -> String {
        let mut cols = vec![
            "time".to_string(),
            "H1".to_string(),
            "H".to_string(),
            "sup_norm".to_string(),
            "sup_norm_ux".to_string(),
        ];
        for &p in &plan.lp_exponents {
            cols.push(format!("lp_{p}"));
        }
        for &nw in &plan.weight_ns {
            cols.push(format!("wsup_{nw}"));
        }
        cols.push("tail_theta".to_string());
        cols.push("tail_residual".to_string());
        cols.push("support_mass".to_string());
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            format!("{}", self.time),
            format!("{}", self.h1),
            format!("{}", self.h),
            format!("{}", self.sup_norm),
            format!("{}", self.sup_norm_ux),
        ];
        for &(_, v) in &self.lp_norms {
            cols.push(format!("{v}"));
        }
        for &(_, v) in &self.weighted_sup {
            cols.push(format!("{v}"));
        }
        match &self.tail_fit {
            Some(f) => {
                cols.push(format!("{}", f.theta_hat));
                cols.push(format!("{}", f.residual));
            }
            None => {
                cols.push(String::new());
                cols.push(String::new());
            }
        }
        match self.support_mass {
            Some(m) => cols.push(format!("{m}")),
            None => cols.push(String::new()),
        }
        cols.join(",")
    }
}

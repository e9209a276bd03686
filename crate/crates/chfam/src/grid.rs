use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L, L)` with the spectral wavenumbers attached.
///
/// Nodes are `x_i = -L + i * dx`, `i = 0..N-1`, `dx = 2L / N`. Wavenumbers
/// follow the standard FFT ordering `k_j = pi * j / L` with
/// `j = 0, 1, ..., N/2 - 1, N/2, -N/2 + 1, ..., -1`; the Nyquist index `N/2`
/// is stored with positive sign and is zeroed by odd-order derivative
/// multipliers.
#[derive(Debug, Clone)]
pub struct Grid {
    num_points: usize,
    half_length: f64,
    spacing: f64,
    nodes: Arc<Vec<f64>>,
    wavenumbers: Arc<Vec<f64>>,
}

impl Grid {
    pub fn new(num_points: usize, half_length: f64) -> Result<Self> {
        if num_points < 8 || !num_points.is_multiple_of(2) {
            return Err(Error::GridSize(num_points));
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::GridLength(half_length));
        }
        let spacing = 2.0 * half_length / num_points as f64;
        let nodes = (0..num_points)
            .map(|i| -half_length + i as f64 * spacing)
            .collect();
        let base = PI / half_length;
        let half = num_points / 2;
        let wavenumbers = (0..num_points)
            .map(|j| {
                let signed = if j <= half {
                    j as isize
                } else {
                    j as isize - num_points as isize
                };
                base * signed as f64
            })
            .collect();
        Ok(Self {
            num_points,
            half_length,
            spacing,
            nodes: Arc::new(nodes),
            wavenumbers: Arc::new(wavenumbers),
        })
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    /// Wavenumbers in FFT ordering.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Nyquist index `N/2`.
    pub fn nyquist_index(&self) -> usize {
        self.num_points / 2
    }

    /// Index of the node nearest to `x` (periodic wrap).
    pub fn nearest_node(&self, x: f64) -> usize {
        let rel = (x + self.half_length) / self.spacing;
        let i = rel.round() as i64;
        i.rem_euclid(self.num_points as i64) as usize
    }

    /// Grids compare equal when they describe the same discretization.
    pub fn same_as(&self, other: &Grid) -> bool {
        self.num_points == other.num_points && self.half_length == other.half_length
    }
}

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Real-valued function sampled on a [`Grid`].
#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    /// Wraps sampled values; fails if the length does not match the grid or
    /// any entry is non-finite.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        assert_eq!(
            values.len(),
            grid.num_points(),
            "field length must equal grid.num_points"
        );
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "field construction",
                index: i,
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.num_points();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    /// Samples `f(x)` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_finite(&self, context: &'static str) -> Result<()> {
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context, index: i });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise map into a new field on the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        assert!(self.grid.same_as(other.grid()));
        Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(other.values())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map(|v| s * v)
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a * b)
    }

    /// Maximum absolute difference against another field.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(other.values())
            .fold(0.0, |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// The map `u(x) -> -u(-x)`; node 0 sits at `-L` which is its own image
    /// under the periodic reflection.
    pub fn reflect_negate(&self) -> Field {
        let n = self.values.len();
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = -self.values[(n - i) % n];
        }
        Field {
            grid: self.grid.clone(),
            values: out,
        }
    }
}

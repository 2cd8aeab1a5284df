//! Uniform grids on `[0, T]` and functions sampled on them.

use crate::error::{Error, Result};

/// Uniform grid with nodes `t_j = j * T / (n - 1)`, `j = 0..n-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    t_end: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(t_end: f64, n: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::domain(format!("horizon T must be positive, got {t_end}")));
        }
        if n < 2 {
            return Err(Error::GridTooSmall { needed: 2, got: n });
        }
        Ok(UniformGrid { t_end, n })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing between adjacent nodes.
    pub fn h(&self) -> f64 {
        self.t_end / (self.n - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        debug_assert!(j < self.n);
        if j + 1 == self.n {
            self.t_end
        } else {
            j as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }
}

/// Real-valued function stored by its values on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "value count {} does not match grid node count {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node: j, context: "sampled values".into() });
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        SampledFunction { grid, values: vec![0.0; grid.len()] }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Composite trapezoidal quadrature over the whole grid.
    pub fn trapezoid(&self) -> f64 {
        let h = self.grid.h();
        let n = self.values.len();
        let interior: f64 = self.values[1..n - 1].iter().sum();
        h * (0.5 * (self.values[0] + self.values[n - 1]) + interior)
    }

    /// Evaluate at an arbitrary `x` in `[0, T]` by local cubic (Lagrange)
    /// interpolation, falling back to linear when the grid has < 4 nodes.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let t_end = self.grid.t_end();
        if !(-1e-12..=t_end + 1e-12).contains(&x) {
            return Err(Error::domain(format!("evaluation point {x} outside [0, {t_end}]")));
        }
        let x = x.clamp(0.0, t_end);
        let n = self.grid.len();
        let h = self.grid.h();
        if n < 4 {
            let j = ((x / h) as usize).min(n - 2);
            let w = (x - self.grid.node(j)) / h;
            return Ok(self.values[j] * (1.0 - w) + self.values[j + 1] * w);
        }
        // window of 4 nodes around x, clamped to the grid
        let j = (((x / h) as usize).saturating_sub(1)).min(n - 4);
        let mut out = 0.0;
        for i in 0..4 {
            let ti = self.grid.node(j + i);
            let mut l = self.values[j + i];
            for m in 0..4 {
                if m != i {
                    let tm = self.grid.node(j + m);
                    l *= (x - tm) / (ti - tm);
                }
            }
            out += l;
        }
        Ok(out)
    }

    /// `a*self + b*other`, exact nodewise arithmetic.
    pub fn linear_combination(&self, a: f64, other: &SampledFunction, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::domain("grids differ in linear combination".to_string()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(self.grid, values)
    }
}

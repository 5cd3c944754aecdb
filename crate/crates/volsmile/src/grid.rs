//! Uniform evaluation grids.

use crate::{Error, Result};

/// A uniform grid with `n >= 2` points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidInput(format!(
                "grid bounds must be finite with min < max, got [{min}, {max}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs n >= 2 points, got {n}"
            )));
        }
        Ok(Self { min, max, n })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.n)
    }
}

/// `n` equally spaced points from `a` to `b` inclusive (`n >= 2`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect()
}

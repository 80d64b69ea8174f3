//! Symmetric uniform grid on [-L, L] and discretized profiles.

use crate::error::{Error, Result};
use crate::params::FracHenonParams;
use serde::{Deserialize, Serialize};

/// Uniform symmetric grid κ_i = -L + i·h with an odd node count, so κ = 0 is
/// a node and the grid spans exactly [-L, L].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub half_width: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Grid1D {
    /// Build from a half-width and target spacing; the spacing is snapped so
    /// that L is an integer number of cells.
    pub fn new(half_width: f64, spacing: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(spacing > 0.0) || spacing > half_width {
            return Err(Error::Domain(format!(
                "invalid grid: L = {half_width}, h = {spacing}"
            )));
        }
        let m = (half_width / spacing).round().max(1.0) as usize;
        let h = half_width / m as f64;
        Ok(Grid1D { half_width, spacing: h, len: 2 * m + 1 })
    }

    /// Default production grid: L = 30, h = 0.05 (1201 nodes).
    pub fn default_grid() -> Self {
        Grid1D::new(30.0, 0.05).expect("default grid is valid")
    }

    /// Node positions are (i - center)·h, which makes the grid exactly
    /// symmetric in floating point: node(center+j) = -node(center-j).
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 - self.center() as f64) * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.node(i)).collect()
    }

    /// Index of the center node κ = 0.
    pub fn center(&self) -> usize {
        (self.len - 1) / 2
    }

    /// Nearest node index for a coordinate (clamped).
    pub fn nearest(&self, kappa: f64) -> usize {
        let i = ((kappa + self.half_width) / self.spacing).round();
        (i.max(0.0) as usize).min(self.len - 1)
    }
}

/// A function on the grid: the Emden-Fowler unknown v̄(κ).
///
/// Values may transiently go negative inside Newton iterations; converged
/// solutions are checked for positivity by the solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub params: FracHenonParams,
}

impl Profile {
    pub fn new(grid: Grid1D, values: Vec<f64>, params: FracHenonParams) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::Domain(format!(
                "profile length {} does not match grid ({} nodes)",
                values.len(),
                grid.len
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("profile contains non-finite values".into()));
        }
        Ok(Profile { grid, values, params })
    }

    pub fn from_fn(grid: Grid1D, params: FracHenonParams, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.len).map(|i| f(grid.node(i))).collect();
        Profile::new(grid, values, params)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Even symmetry defect max |v_i - v_{n-1-i}|.
    pub fn evenness_defect(&self) -> f64 {
        let n = self.values.len();
        (0..n / 2)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// Replace values by their even symmetrization.
    pub fn symmetrize(&mut self) {
        let n = self.values.len();
        for i in 0..n / 2 {
            let avg = 0.5 * (self.values[i] + self.values[n - 1 - i]);
            self.values[i] = avg;
            self.values[n - 1 - i] = avg;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_symmetric_and_odd() {
        let g = Grid1D::new(30.0, 0.05).unwrap();
        assert_eq!(g.len, 1201);
        assert_eq!(g.len % 2, 1);
        assert!((g.node(0) + 30.0).abs() < 1e-12);
        assert!((g.node(g.len - 1) - 30.0).abs() < 1e-12);
        assert_eq!(g.node(g.center()), 0.0);
        // nodes exactly symmetric about zero
        for i in 0..g.len {
            assert_eq!(g.node(i), -g.node(g.len - 1 - i));
        }
    }

    #[test]
    fn grid_snaps_spacing() {
        let g = Grid1D::new(10.0, 0.3).unwrap();
        assert!((g.spacing * ((g.len - 1) / 2) as f64 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid1D::new(-1.0, 0.1).is_err());
        assert!(Grid1D::new(10.0, 0.0).is_err());
        assert!(Grid1D::new(1.0, 2.0).is_err());
    }

    #[test]
    fn profile_construction_and_symmetry() {
        let g = Grid1D::new(5.0, 0.5).unwrap();
        let p = FracHenonParams::new(3, 0.5, 0.0).unwrap();
        let mut prof = Profile::from_fn(g, p, |k| (-k * k).exp() + 0.01 * k).unwrap();
        assert!(prof.evenness_defect() > 0.0);
        prof.symmetrize();
        assert_eq!(prof.evenness_defect(), 0.0);
        assert!(Profile::new(g, vec![0.0; 3], p).is_err());
        assert!(Profile::new(g, vec![f64::NAN; g.len], p).is_err());
    }
}

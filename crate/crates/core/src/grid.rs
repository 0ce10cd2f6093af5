use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Uniform lattice on the periodic box `[0, period)^dim`.
///
/// `points` is the per-axis sample count N; the flat sample index runs with
/// the last axis fastest. Lattice frequencies are integer vectors `k` with
/// each component folded into `[-N/2, N/2)`, and the physical wavevector is
/// `xi = (2*pi/period) * k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points: usize,
    period: f64,
}

impl Grid {
    pub fn new(dim: usize, points: usize, period: f64) -> Result<Self> {
        if dim == 0 || dim > 4 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=4")));
        }
        if points < 4 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 4, got {points}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period {period} must be finite and positive")));
        }
        Ok(Grid { dim, points, period })
    }

    /// Standard torus of period 2*pi.
    pub fn square(dim: usize, points: usize) -> Result<Self> {
        Grid::new(dim, points, TAU)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of lattice sites, N^dim.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing h = period / N.
    pub fn spacing(&self) -> f64 {
        self.period / self.points as f64
    }

    /// Quadrature weight per site, h^dim.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// 2*pi/period; multiplies integer modes to give wavevectors.
    pub fn base_frequency(&self) -> f64 {
        TAU / self.period
    }

    /// Folds a transform index in `0..N` to the signed mode in `[-N/2, N/2)`.
    pub fn signed_mode(&self, m: usize) -> i64 {
        let n = self.points as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Decodes a flat index into signed integer modes. `out` holds `dim` slots.
    pub fn mode_at(&self, flat: usize, out: &mut [i64]) {
        debug_assert_eq!(out.len(), self.dim);
        let mut rem = flat;
        for d in (0..self.dim).rev() {
            out[d] = self.signed_mode(rem % self.points);
            rem /= self.points;
        }
        debug_assert_eq!(rem, 0);
    }

    /// Flat index of an integer mode vector, folding each component mod N.
    pub fn index_of(&self, mode: &[i64]) -> usize {
        debug_assert_eq!(mode.len(), self.dim);
        let n = self.points as i64;
        let mut flat = 0usize;
        for &m in mode {
            let wrapped = m.rem_euclid(n) as usize;
            flat = flat * self.points + wrapped;
        }
        flat
    }

    /// Physical coordinates of a lattice site. `out` holds `dim` slots.
    pub fn coords(&self, flat: usize, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        let h = self.spacing();
        let mut rem = flat;
        for d in (0..self.dim).rev() {
            out[d] = (rem % self.points) as f64 * h;
            rem /= self.points;
        }
    }

    /// |xi|^2 at a flat index.
    pub fn omega2(&self, flat: usize) -> f64 {
        let mut mode = [0i64; 4];
        self.mode_at(flat, &mut mode[..self.dim]);
        let xi0 = self.base_frequency();
        mode[..self.dim]
            .iter()
            .map(|&k| {
                let x = k as f64 * xi0;
                x * x
            })
            .sum()
    }

    /// Table of |xi| over all flat indices.
    pub fn omega_table(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.omega2(i).sqrt()).collect()
    }

    /// True when both grids describe the same lattice.
    pub fn same_as(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && (self.period - other.period).abs() <= 1e-12 * self.period.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(0, 8, TAU).is_err());
        assert!(Grid::new(2, 12, TAU).is_err());
        assert!(Grid::new(2, 2, TAU).is_err());
        assert!(Grid::new(2, 8, 0.0).is_err());
        assert!(Grid::new(2, 8, f64::NAN).is_err());
    }

    #[test]
    fn mode_roundtrip_covers_signed_range() {
        let g = Grid::square(2, 8).unwrap();
        let mut out = [0i64; 2];
        for flat in 0..g.len() {
            g.mode_at(flat, &mut out);
            assert!(out.iter().all(|&k| (-4..4).contains(&k)));
            assert_eq!(g.index_of(&out), flat);
        }
    }

    #[test]
    fn omega_matches_hand_value() {
        let g = Grid::square(2, 8).unwrap();
        let idx = g.index_of(&[2, -1]);
        assert!((g.omega2(idx) - 5.0).abs() < 1e-14);

        let stretched = Grid::new(2, 8, 2.0 * TAU).unwrap();
        let idx = stretched.index_of(&[2, -1]);
        assert!((stretched.omega2(idx) - 1.25).abs() < 1e-14);
    }

    #[test]
    fn coords_step_by_spacing() {
        let g = Grid::square(1, 8).unwrap();
        let mut x = [0.0];
        g.coords(3, &mut x);
        assert!((x[0] - 3.0 * TAU / 8.0).abs() < 1e-15);
    }
}

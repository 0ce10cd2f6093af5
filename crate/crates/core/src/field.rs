use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid;

/// Complex-valued function sampled on a [`Grid`]. Stores physical samples;
/// spectral views are produced on demand and the two are FFT roundtrips of
/// each other.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        ScalarField {
            grid,
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_samples(grid: Grid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: data.len(),
            });
        }
        Ok(ScalarField { grid, data })
    }

    /// Samples `f` at the lattice points.
    pub fn from_fn<F>(grid: Grid, mut f: F) -> Self
    where
        F: FnMut(&[f64]) -> Complex64,
    {
        let mut x = [0.0f64; 4];
        let data = (0..grid.len())
            .map(|i| {
                grid.coords(i, &mut x[..grid.dim()]);
                f(&x[..grid.dim()])
            })
            .collect();
        ScalarField { grid, data }
    }

    /// The plane wave exp(i xi_k . x), evaluated pointwise.
    pub fn plane_wave(grid: Grid, mode: &[i64]) -> Result<Self> {
        if mode.len() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                got: mode.len(),
            });
        }
        let xi: Vec<f64> = mode.iter().map(|&k| k as f64 * grid.base_frequency()).collect();
        Ok(ScalarField::from_fn(grid, |x| {
            let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
            (Complex64::i() * phase).exp()
        }))
    }

    /// Synthesizes physical samples from coefficients.
    pub fn from_coeffs(grid: Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        fft::inverse(&grid, &mut coeffs);
        Ok(ScalarField { grid, data: coeffs })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn to_coeffs(&self) -> Vec<Complex64> {
        let mut coeffs = self.data.clone();
        fft::forward(&self.grid, &mut coeffs);
        coeffs
    }

    pub fn mean(&self) -> Complex64 {
        let sum: Complex64 = self.data.iter().sum();
        sum / self.data.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        ScalarField {
            grid: self.grid,
            data: self.data.iter().map(|v| v * a).collect(),
        }
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(ScalarField {
            grid: self.grid,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }
}

/// Vector field with one component per grid dimension. Carries the
/// divergence-free certificate produced by the constructions in `divfree`;
/// a certified field has spectral divergence bounded by
/// `divfree_tol * max component amplitude`.
#[derive(Clone, Debug)]
pub struct VectorField {
    grid: Grid,
    comps: Vec<ScalarField>,
    divfree_tol: f64,
    divfree_certified: bool,
}

pub const DEFAULT_DIVFREE_TOL: f64 = 1e-10;

impl VectorField {
    pub fn new(comps: Vec<ScalarField>) -> Result<Self> {
        let grid = *comps
            .first()
            .ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?
            .grid();
        if comps.len() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                got: comps.len(),
            });
        }
        if comps.iter().any(|c| !c.grid().same_as(&grid)) {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField {
            grid,
            comps,
            divfree_tol: DEFAULT_DIVFREE_TOL,
            divfree_certified: false,
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        let comps = (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect();
        VectorField {
            grid,
            comps,
            divfree_tol: DEFAULT_DIVFREE_TOL,
            divfree_certified: true,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn comp(&self, j: usize) -> &ScalarField {
        &self.comps[j]
    }

    pub fn into_comps(self) -> Vec<ScalarField> {
        self.comps
    }

    pub fn divfree_tol(&self) -> f64 {
        self.divfree_tol
    }

    pub fn with_divfree_tol(mut self, tol: f64) -> Self {
        self.divfree_tol = tol.max(0.0);
        self.divfree_certified = false;
        self
    }

    pub fn is_divfree_certified(&self) -> bool {
        self.divfree_certified
    }

    pub(crate) fn set_certified(&mut self, certified: bool) {
        self.divfree_certified = certified;
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Scaling preserves the certificate: divergence is linear.
    pub fn scaled(&self, a: Complex64) -> Self {
        VectorField {
            grid: self.grid,
            comps: self.comps.iter().map(|c| c.scaled(a)).collect(),
            divfree_tol: self.divfree_tol,
            divfree_certified: self.divfree_certified,
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField {
            grid: self.grid,
            comps,
            divfree_tol: self.divfree_tol.max(other.divfree_tol),
            divfree_certified: self.divfree_certified && other.divfree_certified,
        })
    }
}

//! Fourier multipliers. A multiplier acts diagonally on coefficients:
//! û(k) ↦ m(ξ_k) û(k) with ξ_k the scaled frequency vector. The k = 0 slot
//! is special because many symbols of interest (negative powers, Riesz
//! kernels) are undefined there; the policy below makes the choice explicit
//! at every call site.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// What to do with the k = 0 coefficient, where the symbol may be undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroModePolicy {
    /// Annihilate the mean.
    Zero,
    /// Pass the mean through unchanged.
    Identity,
    /// Reject inputs whose mean is significant, then annihilate it.
    Error,
}

/// Relative tolerance for the `Error` policy: the input mean must satisfy
/// |mean| ≤ tol · max|u|.
pub const ZERO_MODE_REL_TOL: f64 = 1e-10;

/// Applies the multiplier with symbol `m` to `u`. The symbol receives the
/// frequency vector ξ_k = (2π/L) k and is never evaluated at k = 0.
pub fn apply_multiplier<F>(u: &ScalarField, symbol: F, policy: ZeroModePolicy) -> Result<ScalarField>
where
    F: Fn(&[f64]) -> Complex64,
{
    if policy == ZeroModePolicy::Error {
        let residual = u.mean().norm();
        let tol = ZERO_MODE_REL_TOL * u.max_abs();
        if residual > tol {
            return Err(Error::ZeroModeViolation {
                context: "multiplier with symbol undefined at k = 0",
                residual,
                tol,
            });
        }
    }
    let grid = *u.grid();
    let mut coeffs = u.to_coeffs();
    let base = grid.base_frequency();
    let mut mode = [0i64; 4];
    let mut xi = [0.0f64; 4];
    let dim = grid.dim();
    for (i, c) in coeffs.iter_mut().enumerate() {
        grid.mode_at(i, &mut mode[..dim]);
        if mode[..dim].iter().all(|&m| m == 0) {
            match policy {
                ZeroModePolicy::Identity => {}
                ZeroModePolicy::Zero | ZeroModePolicy::Error => *c = Complex64::new(0.0, 0.0),
            }
            continue;
        }
        for (x, &m) in xi[..dim].iter_mut().zip(&mode[..dim]) {
            *x = base * m as f64;
        }
        let v = symbol(&xi[..dim]);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteSymbol {
                mode: mode[..dim].to_vec(),
            });
        }
        *c *= v;
    }
    ScalarField::from_coeffs(grid, coeffs)
}

/// (−Δ)^{γ/2}, the multiplier |ξ|^γ. Positive orders annihilate the mean;
/// negative orders require a mean-zero input; γ = 0 is the exact identity.
pub fn fractional_laplacian(u: &ScalarField, gamma: f64) -> Result<ScalarField> {
    if !gamma.is_finite() {
        return Err(Error::BadExponent(gamma));
    }
    if gamma == 0.0 {
        return Ok(u.clone());
    }
    let policy = if gamma > 0.0 {
        ZeroModePolicy::Zero
    } else {
        ZeroModePolicy::Error
    };
    apply_multiplier(
        u,
        |xi| {
            let w2: f64 = xi.iter().map(|x| x * x).sum();
            Complex64::new(w2.powf(gamma / 2.0), 0.0)
        },
        policy,
    )
}

/// Riesz transform along `axis`: symbol −i ξ_axis / |ξ|, mean annihilated.
pub fn riesz_transform(u: &ScalarField, axis: usize) -> Result<ScalarField> {
    let dim = u.grid().dim();
    if axis >= dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    apply_multiplier(
        u,
        |xi| {
            let w: f64 = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            -Complex64::i() * (xi[axis] / w)
        },
        ZeroModePolicy::Zero,
    )
}

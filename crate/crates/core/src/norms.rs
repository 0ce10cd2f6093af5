//! Discrete norms. Space norms use cell-measure quadrature, so they agree
//! with the Plancherel normalization bit-for-bit where both apply; time
//! norms use composite trapezoid quadrature on the sample times.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;
use crate::multiplier;

fn check_order(r: f64) -> Result<()> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::BadExponent(r));
    }
    Ok(())
}

/// (Σ_x |u(x)|^r h^n)^{1/r}; the max of |u| for r = ∞.
pub fn lebesgue_norm(u: &ScalarField, r: f64) -> Result<f64> {
    check_order(r)?;
    if r.is_infinite() {
        return Ok(u.max_abs());
    }
    let cell = u.grid().cell_volume();
    let sum: f64 = u.samples().iter().map(|v| v.norm().powf(r)).sum();
    Ok((sum * cell).powf(1.0 / r))
}

/// Homogeneous Sobolev norm L^{n/2} (Σ_k |ξ_k|^{2s} |û(k)|²)^{1/2}.
///
/// The k = 0 term carries weight (|ξ|²)^s = 0^s, so s = 0 reproduces the
/// plain L² norm exactly and positive orders annihilate the mean. Negative
/// orders require mean-zero input.
pub fn sobolev_norm(u: &ScalarField, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::BadExponent(s));
    }
    if s < 0.0 {
        let residual = u.mean().norm();
        let tol = multiplier::ZERO_MODE_REL_TOL * u.max_abs();
        if residual > tol {
            return Err(Error::ZeroModeViolation {
                context: "negative-order Sobolev norm",
                residual,
                tol,
            });
        }
    }
    sobolev_weighted_sum(u.grid(), &u.to_coeffs(), s)
}

/// [`sobolev_norm`] on spectral coefficients already in hand, so streaming
/// consumers skip the synthesis round-trip. The mean-zero gauge for
/// negative orders is taken on spectral amplitudes.
pub fn sobolev_norm_coeffs(grid: &Grid, coeffs: &[Complex64], s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::BadExponent(s));
    }
    if coeffs.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    if s < 0.0 {
        let residual = coeffs[0].norm();
        let peak = coeffs.iter().fold(0.0f64, |a, c| a.max(c.norm()));
        let tol = multiplier::ZERO_MODE_REL_TOL * peak;
        if residual > tol {
            return Err(Error::ZeroModeViolation {
                context: "negative-order Sobolev norm",
                residual,
                tol,
            });
        }
    }
    sobolev_weighted_sum(grid, coeffs, s)
}

fn sobolev_weighted_sum(grid: &Grid, coeffs: &[Complex64], s: f64) -> Result<f64> {
    let base = grid.base_frequency();
    let dim = grid.dim();
    let mut mode = [0i64; 4];
    let mut sum = 0.0f64;
    for (i, c) in coeffs.iter().enumerate() {
        grid.mode_at(i, &mut mode[..dim]);
        let w2: f64 = mode[..dim]
            .iter()
            .map(|&m| {
                let x = base * m as f64;
                x * x
            })
            .sum();
        if w2 == 0.0 && s < 0.0 {
            continue;
        }
        sum += w2.powf(s) * c.norm_sqr();
    }
    Ok(grid.period().powf(dim as f64 / 2.0) * sum.sqrt())
}

/// L^p norm of (−Δ)^{s/2} u. The p = ∞ endpoint is not offered.
pub fn sobolev_lp_norm(u: &ScalarField, s: f64, p: f64) -> Result<f64> {
    check_order(p)?;
    if p.is_infinite() {
        return Err(Error::BadExponent(p));
    }
    lebesgue_norm(&multiplier::fractional_laplacian(u, s)?, p)
}

/// L^r norm of the pointwise Euclidean magnitude |F(x)|.
pub fn vector_lebesgue_norm(f: &VectorField, r: f64) -> Result<f64> {
    check_order(r)?;
    let grid = f.grid();
    let mag2 = |i: usize| -> f64 { f.comps().iter().map(|c| c.samples()[i].norm_sqr()).sum() };
    if r.is_infinite() {
        let mut best = 0.0f64;
        for i in 0..grid.len() {
            best = best.max(mag2(i));
        }
        return Ok(best.sqrt());
    }
    let cell = grid.cell_volume();
    let mut sum = 0.0f64;
    for i in 0..grid.len() {
        sum += mag2(i).powf(r / 2.0);
    }
    Ok((sum * cell).powf(1.0 / r))
}

/// Root-sum-square of the component Sobolev norms.
pub fn vector_sobolev_norm(f: &VectorField, s: f64) -> Result<f64> {
    let mut sum = 0.0f64;
    for c in f.comps() {
        let v = sobolev_norm(c, s)?;
        sum += v * v;
    }
    Ok(sum.sqrt())
}

/// (∫ |v(t)|^q dt)^{1/q} by trapezoid quadrature on the given times;
/// the max of |v| for q = ∞. Times must be strictly increasing.
pub fn time_lebesgue_norm(times: &[f64], values: &[f64], q: f64) -> Result<f64> {
    check_order(q)?;
    if times.len() != values.len() {
        return Err(Error::TimeGridMismatch(format!(
            "{} times vs {} values",
            times.len(),
            values.len()
        )));
    }
    if q.is_infinite() {
        return Ok(values.iter().fold(0.0, |a, v| a.max(v.abs())));
    }
    if times.len() < 2 {
        return Err(Error::TimeGridMismatch(
            "quadrature needs at least two samples".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::TimeGridMismatch("times must strictly increase".into()));
    }
    let mut sum = 0.0f64;
    for i in 0..times.len() - 1 {
        let dt = times[i + 1] - times[i];
        sum += 0.5 * dt * (values[i].abs().powf(q) + values[i + 1].abs().powf(q));
    }
    Ok(sum.powf(1.0 / q))
}

//! Divergence-free vector fields: spectral differentiation, the certificate
//! that marks a field divergence-free, stream functions in two dimensions,
//! Leray projection in any dimension, dealiased Jacobian determinants, and
//! the seeded random families the experiments draw from.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;
use crate::norms;

/// Relative tolerance of the divergence certificate.
pub const DIVFREE_TOL: f64 = 1e-10;

fn apply_derivative_coeffs(grid: &Grid, coeffs: &mut [Complex64], axis: usize) {
    let base = grid.base_frequency();
    let dim = grid.dim();
    let mut mode = [0i64; 4];
    for (i, c) in coeffs.iter_mut().enumerate() {
        grid.mode_at(i, &mut mode[..dim]);
        *c *= Complex64::i() * (base * mode[axis] as f64);
    }
}

/// Spectral partial derivative along `axis`. The k = −N/2 column keeps the
/// one-sided convention i ξ û.
pub fn derivative(u: &ScalarField, axis: usize) -> Result<ScalarField> {
    let grid = *u.grid();
    if axis >= grid.dim() {
        return Err(Error::AxisOutOfRange {
            axis,
            dim: grid.dim(),
        });
    }
    let mut coeffs = u.to_coeffs();
    apply_derivative_coeffs(&grid, &mut coeffs, axis);
    ScalarField::from_coeffs(grid, coeffs)
}

/// Σ_j ∂_j F_j by spectral differentiation.
pub fn divergence(f: &VectorField) -> ScalarField {
    let grid = *f.grid();
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (axis, comp) in f.comps().iter().enumerate() {
        let mut coeffs = comp.to_coeffs();
        apply_derivative_coeffs(&grid, &mut coeffs, axis);
        for (a, c) in acc.iter_mut().zip(&coeffs) {
            *a += c;
        }
    }
    ScalarField::from_coeffs(grid, acc).expect("accumulator sized to grid")
}

/// Max-norm of the divergence, the quantity the certificate bounds.
pub fn divergence_residual(f: &VectorField) -> f64 {
    divergence(f).max_abs()
}

/// Checks max|div F| ≤ tol · max|F| and marks the field on success.
/// Rejects rather than projecting, so near-misses surface as errors.
pub fn certify_divergence_free(f: &mut VectorField) -> Result<()> {
    let residual = divergence_residual(f);
    let tol = f.divfree_tol() * f.max_abs();
    if residual > tol {
        f.set_certified(false);
        return Err(Error::NotDivergenceFree { residual, tol });
    }
    f.set_certified(true);
    Ok(())
}

/// (∂₂G, −∂₁G): the divergence-free field with stream function G. Two
/// dimensions only.
pub fn curl_of_stream(g: &ScalarField) -> Result<VectorField> {
    let grid = *g.grid();
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    let f1 = derivative(g, 1)?;
    let f2 = derivative(g, 0)?.scaled(Complex64::new(-1.0, 0.0));
    let mut f = VectorField::new(vec![f1, f2])?;
    certify_divergence_free(&mut f)?;
    Ok(f)
}

/// Recovers the mean-zero stream function G = (−Δ)^{−1}(∂₁F₂ − ∂₂F₁) of a
/// certified divergence-free field, so curl_of_stream(G) reproduces F up to
/// the constant components lost to the zero mode.
pub fn stream_function(f: &VectorField) -> Result<ScalarField> {
    let grid = *f.grid();
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    {
        let mut probe = f.clone();
        certify_divergence_free(&mut probe)?;
    }
    let c1 = f.comp(0).to_coeffs();
    let c2 = f.comp(1).to_coeffs();
    let base = grid.base_frequency();
    let mut mode = [0i64; 2];
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (i, o) in out.iter_mut().enumerate() {
        grid.mode_at(i, &mut mode);
        let xi1 = base * mode[0] as f64;
        let xi2 = base * mode[1] as f64;
        let w2 = xi1 * xi1 + xi2 * xi2;
        if w2 == 0.0 {
            continue;
        }
        let vorticity = Complex64::i() * (xi1 * c2[i] - xi2 * c1[i]);
        *o = vorticity / w2;
    }
    ScalarField::from_coeffs(grid, out)
}

/// ‖G‖_{L²} / ‖ |F| ‖_{L¹} for the stream function G of F.
pub fn stream_ratio(f: &VectorField) -> Result<f64> {
    let g = stream_function(f)?;
    let denom = norms::vector_lebesgue_norm(f, 1.0)?;
    if denom == 0.0 {
        return Err(Error::DivisionByZero("stream ratio of the zero field"));
    }
    Ok(norms::lebesgue_norm(&g, 2.0)? / denom)
}

/// Leray projection F̂(k) ↦ F̂(k) − ξ (ξ·F̂)/|ξ|², zero mode untouched.
/// Output is certified divergence-free.
pub fn leray_project(f: &VectorField) -> Result<VectorField> {
    let grid = *f.grid();
    let dim = grid.dim();
    let mut coeffs: Vec<Vec<Complex64>> = f.comps().iter().map(|c| c.to_coeffs()).collect();
    let base = grid.base_frequency();
    let mut mode = [0i64; 4];
    let mut xi = [0.0f64; 4];
    for i in 0..grid.len() {
        grid.mode_at(i, &mut mode[..dim]);
        let mut w2 = 0.0;
        for (x, &m) in xi[..dim].iter_mut().zip(&mode[..dim]) {
            *x = base * m as f64;
            w2 += *x * *x;
        }
        if w2 == 0.0 {
            continue;
        }
        let dot: Complex64 = (0..dim).map(|j| coeffs[j][i] * xi[j]).sum();
        for (j, x) in xi[..dim].iter().enumerate() {
            let c = coeffs[j][i] - dot * (x / w2);
            coeffs[j][i] = c;
        }
    }
    let comps = coeffs
        .into_iter()
        .map(|c| ScalarField::from_coeffs(grid, c))
        .collect::<Result<Vec<_>>>()?;
    let mut out = VectorField::new(comps)?;
    certify_divergence_free(&mut out)?;
    Ok(out)
}

fn dealiased_product(a: &ScalarField, b: &ScalarField) -> Result<ScalarField> {
    let grid = *a.grid();
    if !grid.same_as(b.grid()) {
        return Err(Error::GridMismatch);
    }
    let n = grid.points();
    let m = 3 * n / 2;
    let shape = vec![m; grid.dim()];
    let mut wa = fft::resize_spectrum(grid.dim(), n, &a.to_coeffs(), m);
    let mut wb = fft::resize_spectrum(grid.dim(), n, &b.to_coeffs(), m);
    fft::inverse_shaped(&shape, &mut wa);
    fft::inverse_shaped(&shape, &mut wb);
    for (x, y) in wa.iter_mut().zip(&wb) {
        *x *= y;
    }
    fft::forward_shaped(&shape, &mut wa);
    let truncated = fft::resize_spectrum(grid.dim(), m, &wa, n);
    ScalarField::from_coeffs(grid, truncated)
}

/// ∂₁F₁ ∂₂F₂ − ∂₂F₁ ∂₁F₂ with products formed on a 3/2-oversampled grid, so
/// the retained coefficients are free of aliasing. Two dimensions only.
pub fn jacobian_det(f: &VectorField) -> Result<ScalarField> {
    let grid = *f.grid();
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    let d1f1 = derivative(f.comp(0), 0)?;
    let d2f2 = derivative(f.comp(1), 1)?;
    let d2f1 = derivative(f.comp(0), 1)?;
    let d1f2 = derivative(f.comp(1), 0)?;
    dealiased_product(&d1f1, &d2f2)?.sub(&dealiased_product(&d2f1, &d1f2)?)
}

/// Σ_j ‖(−Δ)^{−α/2} F_j‖_{L^{n/(n−α)}} / ‖ |F| ‖_{L¹} for certified
/// divergence-free F with mean-zero components and 0 < α < n.
pub fn vs_ratio(f: &VectorField, alpha: f64) -> Result<f64> {
    let dim = f.grid().dim();
    if !(alpha > 0.0 && alpha < dim as f64) {
        return Err(Error::BadAlpha { alpha, dim });
    }
    {
        let mut probe = f.clone();
        certify_divergence_free(&mut probe)?;
    }
    let p = dim as f64 / (dim as f64 - alpha);
    let mut numerator = 0.0;
    for c in f.comps() {
        numerator += norms::sobolev_lp_norm(c, -alpha, p)?;
    }
    let denom = norms::vector_lebesgue_norm(f, 1.0)?;
    if denom == 0.0 {
        return Err(Error::DivisionByZero("smoothing ratio of the zero field"));
    }
    Ok(numerator / denom)
}

/// Mixes a base seed with a tag into a fresh stream seed (splitmix64
/// finalizer). Used to give each trial, component, and role its own
/// deterministic generator.
pub fn mix_seed(base: u64, tag: u64) -> u64 {
    let mut z = base
        .wrapping_add(tag.rotate_left(32).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

fn check_spectrum(grid: &Grid, beta: f64, cutoff: usize) -> Result<()> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::BadExponent(beta));
    }
    if cutoff == 0 || 3 * cutoff > grid.points() {
        return Err(Error::InvalidGrid(format!(
            "frequency cutoff {} outside 1..={} for {} points per axis",
            cutoff,
            grid.points() / 3,
            grid.points()
        )));
    }
    Ok(())
}

/// Random real mean-zero scalar field: independent complex Gaussians on the
/// cutoff box |k|_∞ ≤ K weighted by |k|^{−β}, then Hermitian-symmetrized.
///
/// Draws run over the box in a fixed lexicographic order, so the field is a
/// function of (seed, β, K) alone: refining the grid with the same seed
/// samples the same underlying function.
pub fn random_scalar(grid: Grid, seed: u64, beta: f64, cutoff: usize) -> Result<ScalarField> {
    check_spectrum(&grid, beta, cutoff)?;
    let dim = grid.dim();
    let k = cutoff as i64;
    let side = (2 * cutoff + 1) as usize;
    let sites = side.pow(dim as u32);
    let mut rng = rng_for(seed);
    let mut raw = vec![Complex64::new(0.0, 0.0); sites];
    for slot in raw.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *slot = Complex64::new(re, im);
    }
    let site_of = |mode: &[i64]| -> usize {
        let mut s = 0usize;
        for &m in mode {
            s = s * side + (m + k) as usize;
        }
        s
    };
    let mut mode = [0i64; 4];
    let mut conj_mode = [0i64; 4];
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for s in 0..sites {
        let mut rem = s;
        let mut mag2 = 0i64;
        for d in (0..dim).rev() {
            let m = (rem % side) as i64 - k;
            mode[d] = m;
            mag2 += m * m;
            rem /= side;
        }
        if mag2 == 0 {
            continue;
        }
        for d in 0..dim {
            conj_mode[d] = -mode[d];
        }
        let weight = (mag2 as f64).sqrt().powf(-beta);
        let pair = (raw[s] + raw[site_of(&conj_mode[..dim])].conj()) * 0.5;
        coeffs[grid.index_of(&mode[..dim])] = pair * weight;
    }
    ScalarField::from_coeffs(grid, coeffs)
}

/// How a random divergence-free field is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivFreeKind {
    /// Curl of a random stream function. Two dimensions only.
    CurlOfStream,
    /// Leray projection of independent random components. Any dimension.
    ProjectedRandom,
    /// One random mode pair ±k with amplitude orthogonal to k.
    SingleMode,
    /// The zero field.
    Zero,
}

/// Seeded family of certified divergence-free fields. Identical parameters
/// give identical fields, and the draw order is grid-independent, so a
/// refinement sweep sees the same underlying function at every resolution.
#[derive(Clone, Copy, Debug)]
pub struct DivFreeGenerator {
    pub kind: DivFreeKind,
    pub seed: u64,
    /// Coefficient decay |k|^{−β}, β ≥ 0.
    pub beta: f64,
    /// Frequency cutoff K; draws live in |k|_∞ ≤ K and need 3K ≤ N.
    pub cutoff: usize,
}

impl DivFreeGenerator {
    pub fn new(kind: DivFreeKind, seed: u64, beta: f64, cutoff: usize) -> Self {
        DivFreeGenerator {
            kind,
            seed,
            beta,
            cutoff,
        }
    }

    pub fn generate(&self, grid: Grid) -> Result<VectorField> {
        match self.kind {
            DivFreeKind::Zero => Ok(VectorField::zeros(grid)),
            DivFreeKind::CurlOfStream => {
                if grid.dim() != 2 {
                    return Err(Error::DimensionMismatch {
                        expected: 2,
                        got: grid.dim(),
                    });
                }
                let g = random_scalar(grid, mix_seed(self.seed, 0), self.beta, self.cutoff)?;
                curl_of_stream(&g)
            }
            DivFreeKind::ProjectedRandom => {
                let comps = (0..grid.dim())
                    .map(|j| {
                        random_scalar(grid, mix_seed(self.seed, 1 + j as u64), self.beta, self.cutoff)
                    })
                    .collect::<Result<Vec<_>>>()?;
                leray_project(&VectorField::new(comps)?)
            }
            DivFreeKind::SingleMode => self.single_mode(grid),
        }
    }

    fn single_mode(&self, grid: Grid) -> Result<VectorField> {
        check_spectrum(&grid, self.beta, self.cutoff)?;
        let dim = grid.dim();
        let k = self.cutoff as i64;
        let mut rng = rng_for(mix_seed(self.seed, 99));
        let mut mode = vec![0i64; dim];
        loop {
            for m in mode.iter_mut() {
                *m = rng.random_range(-k..=k);
            }
            if mode.iter().any(|&m| m != 0) {
                break;
            }
        }
        let mut amp: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        let k2: f64 = mode.iter().map(|&m| (m * m) as f64).sum();
        let dot: Complex64 = amp
            .iter()
            .zip(&mode)
            .map(|(a, &m)| a * m as f64)
            .sum();
        for (a, &m) in amp.iter_mut().zip(&mode) {
            *a -= dot * (m as f64 / k2);
        }
        let weight = k2.sqrt().powf(-self.beta);
        let conj_mode: Vec<i64> = mode.iter().map(|&m| -m).collect();
        let comps = amp
            .iter()
            .map(|a| {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
                coeffs[grid.index_of(&mode)] = a * (0.5 * weight);
                coeffs[grid.index_of(&conj_mode)] = a.conj() * (0.5 * weight);
                ScalarField::from_coeffs(grid, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f = VectorField::new(comps)?;
        certify_divergence_free(&mut f)?;
        Ok(f)
    }
}

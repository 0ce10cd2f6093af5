//! End-to-end inequality verification: assemble seeded data families, solve,
//! compute both sides of each estimate, and report ratio statistics across
//! refinement levels and dilation sweeps.
//!
//! An inequality with an unspecified constant is operationalized as a
//! refinement-stable, scaling-stable empirical max ratio over seeded
//! families; that is the only falsifiable reading at desk scale. Trials are
//! independent and run concurrently; report assembly is a deterministic
//! ordered reduction by trial index, so a config digest names one exact
//! report byte-for-byte.

mod config;
mod report;

pub use config::{ExperimentConfig, ExperimentKind, FamilyConfig, FamilyKind, TupleConfig};
pub use report::{
    refinement_stability, LevelSummary, RatioReport, ScalingRow, TrialRow,
    REFINEMENT_GROWTH_LIMIT, SCALING_SPREAD_LIMIT,
};

use num_complex::Complex64;

use crate::divfree::{self, DivFreeGenerator};
use crate::error::{Error, Result};
use crate::evolution::{
    schrodinger_visit, wave_visit, Forcing, FrameView, TimeGrid, WaveData,
};
use crate::exec;
use crate::exponents::{Exponent, ExponentTuple, Rational};
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid;
use crate::multiplier;
use crate::norms;

const ROLE_U0: u64 = 101;
const ROLE_U1: u64 = 102;
const ROLE_FORCING: u64 = 103;
const ROLE_MAP_BASE: u64 = 200;

/// Smooth bump exp(1 − 1/(1 − y²)) on (a, b), zero outside, peak 1 at the
/// midpoint. Compact support inside the window keeps the time quadrature of
/// forced solutions clean past the support.
pub fn bump_value(t: f64, a: f64, b: f64) -> f64 {
    let y = (2.0 * t - (a + b)) / (b - a);
    if y.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - y * y)).exp()
    }
}

/// [`bump_value`] sampled on a time grid.
pub fn bump_samples(times: &TimeGrid, a: f64, b: f64) -> Vec<f64> {
    times.times().iter().map(|&t| bump_value(t, a, b)).collect()
}

fn default_profile(times: &TimeGrid) -> Vec<f64> {
    let t_end = times.t_end();
    bump_samples(times, t_end / 16.0, t_end * 9.0 / 16.0)
}

fn rat_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn dual_exp_f64(e: Exponent) -> Result<f64> {
    Ok(Exponent::from_recip(e.dual_recip())?.to_f64())
}

fn ensure_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.experiment != kind {
        return Err(Error::Config(format!(
            "config names {}, not {}",
            cfg.experiment.name(),
            kind.name()
        )));
    }
    Ok(())
}

fn ensure_finite(lhs: f64, rhs: f64) -> Result<()> {
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::Config(format!(
            "non-finite trial values lhs={lhs} rhs={rhs}"
        )));
    }
    Ok(())
}

fn divfree_field(fam: &FamilyConfig, grid: Grid, seed: u64, role: u64) -> Result<VectorField> {
    let kind = fam
        .kind
        .divfree_kind()
        .ok_or_else(|| Error::Config("family kind is not divergence-free".into()))?;
    DivFreeGenerator::new(kind, divfree::mix_seed(seed, role), fam.beta, fam.cutoff).generate(grid)
}

fn random_map(fam: &FamilyConfig, grid: Grid, seed: u64) -> Result<VectorField> {
    let comps = (0..grid.dim())
        .map(|j| {
            divfree::random_scalar(
                grid,
                divfree::mix_seed(seed, ROLE_MAP_BASE + j as u64),
                fam.beta,
                fam.cutoff,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// Which solution norms a wave run accumulates.
struct WaveMeasure {
    lqlr: Option<(f64, f64)>,
    c0_u: Option<f64>,
    c0_ut: Option<f64>,
}

/// Which data and forcing norms form the right-hand side. A `None` forcing
/// order means the plain |f| is integrated; `Some(k)` applies `|ξ|^k`
/// componentwise first.
struct WaveRhs {
    data_u0: Option<f64>,
    data_u1: Option<f64>,
    forcing_order: Option<f64>,
    forcing_time_q: f64,
}

fn energy_specs() -> (WaveMeasure, WaveRhs) {
    (
        WaveMeasure { lqlr: None, c0_u: Some(0.0), c0_ut: Some(-1.0) },
        WaveRhs {
            data_u0: Some(0.0),
            data_u1: Some(-1.0),
            forcing_order: None,
            forcing_time_q: 1.0,
        },
    )
}

fn strichartz_specs(t: &ExponentTuple) -> Result<(WaveMeasure, WaveRhs)> {
    let s = rat_f64(t.s.unwrap());
    let k = rat_f64(t.k.unwrap());
    Ok((
        WaveMeasure {
            lqlr: Some((t.q.unwrap().to_f64(), t.r.unwrap().to_f64())),
            c0_u: Some(s),
            c0_ut: Some(s - 1.0),
        },
        WaveRhs {
            data_u0: Some(s),
            data_u1: Some(s - 1.0),
            forcing_order: Some(k),
            forcing_time_q: dual_exp_f64(t.qt.unwrap())?,
        },
    ))
}

fn zero_data_specs(t: &ExponentTuple) -> Result<(WaveMeasure, WaveRhs)> {
    Ok((
        WaveMeasure {
            lqlr: Some((t.q.unwrap().to_f64(), t.r.unwrap().to_f64())),
            c0_u: None,
            c0_ut: None,
        },
        WaveRhs {
            data_u0: None,
            data_u1: None,
            forcing_order: Some(rat_f64(t.k.unwrap())),
            forcing_time_q: dual_exp_f64(t.qt.unwrap())?,
        },
    ))
}

/// Root-sum-square of component Sobolev norms straight from frame
/// coefficients.
fn vector_sobolev_coeffs(v: &FrameView, s: f64) -> Result<f64> {
    let mut sum = 0.0f64;
    for c in 0..v.ncomp() {
        let x = norms::sobolev_norm_coeffs(v.grid(), v.coeffs(c), s)?;
        sum += x * x;
    }
    Ok(sum.sqrt())
}

/// Space L^r of a frame; r = 2 goes through Plancherel, anything else
/// synthesizes the frame first.
fn vector_lr(v: &FrameView, r: f64) -> Result<f64> {
    if r == 2.0 {
        vector_sobolev_coeffs(v, 0.0)
    } else {
        norms::vector_lebesgue_norm(&v.synthesize_vector()?, r)
    }
}

/// Mixed L^{q}_t L¹_x norm of a one-term separable forcing, exact in the
/// profile: the space norm is computed once and the time factor rides on
/// the profile samples.
fn separable_forcing_norm(
    field: &VectorField,
    profile: &[f64],
    times: &TimeGrid,
    order: Option<f64>,
    time_q: f64,
) -> Result<f64> {
    let base = match order {
        None => norms::vector_lebesgue_norm(field, 1.0)?,
        Some(k) => {
            let comps = field
                .comps()
                .iter()
                .map(|c| multiplier::fractional_laplacian(c, k))
                .collect::<Result<Vec<_>>>()?;
            norms::vector_lebesgue_norm(&VectorField::new(comps)?, 1.0)?
        }
    };
    let vals: Vec<f64> = profile.iter().map(|p| p.abs() * base).collect();
    norms::time_lebesgue_norm(&times.times(), &vals, time_q)
}

/// Streams one forced wave solve and accumulates the requested solution
/// norms on every `stride`-th frame.
fn wave_lhs(
    data: &WaveData,
    forcing: &Forcing,
    times: &TimeGrid,
    stride: usize,
    measure: &WaveMeasure,
) -> Result<f64> {
    let mut frame_times = Vec::new();
    let mut lr_vals = Vec::new();
    let mut max_u = 0.0f64;
    let mut max_ut = 0.0f64;
    wave_visit(data, forcing, times, |j, t, u, ut| {
        if j % stride != 0 {
            return Ok(());
        }
        if let Some((_, r)) = measure.lqlr {
            lr_vals.push(vector_lr(u, r)?);
            frame_times.push(t);
        }
        if let Some(s) = measure.c0_u {
            max_u = max_u.max(vector_sobolev_coeffs(u, s)?);
        }
        if let Some(s) = measure.c0_ut {
            max_ut = max_ut.max(vector_sobolev_coeffs(ut, s)?);
        }
        Ok(())
    })?;
    let mut lhs = max_u + max_ut;
    if let Some((q, _)) = measure.lqlr {
        lhs += norms::time_lebesgue_norm(&frame_times, &lr_vals, q)?;
    }
    Ok(lhs)
}

/// One wave trial: both sides of the estimate for the given data and
/// one-term separable forcing.
fn wave_trial(
    u0: VectorField,
    u1: VectorField,
    ffield: Option<&VectorField>,
    profile: &[f64],
    times: &TimeGrid,
    stride: usize,
    measure: &WaveMeasure,
    rhs_spec: &WaveRhs,
) -> Result<(f64, f64)> {
    let data = WaveData::new(u0, u1)?;
    let mut rhs = 0.0f64;
    if let Some(s) = rhs_spec.data_u0 {
        rhs += norms::vector_sobolev_norm(&data.u0, s)?;
    }
    if let Some(s) = rhs_spec.data_u1 {
        rhs += norms::vector_sobolev_norm(&data.u1, s)?;
    }
    if let Some(f) = ffield {
        rhs += separable_forcing_norm(
            f,
            profile,
            times,
            rhs_spec.forcing_order,
            rhs_spec.forcing_time_q,
        )?;
    }
    let profiles = [profile.to_vec()];
    let lhs = match ffield {
        Some(f) => {
            let fields = std::slice::from_ref(f);
            wave_lhs(
                &data,
                &Forcing::Separable { fields, profiles: &profiles },
                times,
                stride,
                measure,
            )?
        }
        None => wave_lhs(&data, &Forcing::Zero, times, stride, measure)?,
    };
    Ok((lhs, rhs))
}

/// One Schrödinger trial: C⁰_t Ḣ^s plus L^q_t L^r_x of the solution against
/// the data norm plus the forcing term.
fn schrodinger_trial(
    u0: VectorField,
    ffield: Option<&VectorField>,
    profile: &[f64],
    times: &TimeGrid,
    stride: usize,
    s: f64,
    q: f64,
    r: f64,
    forcing_order: f64,
    forcing_time_q: f64,
) -> Result<(f64, f64)> {
    let mut rhs = norms::vector_sobolev_norm(&u0, s)?;
    if let Some(f) = ffield {
        rhs += separable_forcing_norm(f, profile, times, Some(forcing_order), forcing_time_q)?;
    }
    let profiles = [profile.to_vec()];
    let forcing = match ffield {
        Some(f) => Forcing::Separable { fields: std::slice::from_ref(f), profiles: &profiles },
        None => Forcing::Zero,
    };
    let mut frame_times = Vec::new();
    let mut lr_vals = Vec::new();
    let mut max_u = 0.0f64;
    schrodinger_visit(&u0, &forcing, times, |j, t, v| {
        if j % stride != 0 {
            return Ok(());
        }
        max_u = max_u.max(vector_sobolev_coeffs(v, s)?);
        lr_vals.push(vector_lr(v, r)?);
        frame_times.push(t);
        Ok(())
    })?;
    let lhs = max_u + norms::time_lebesgue_norm(&frame_times, &lr_vals, q)?;
    Ok((lhs, rhs))
}

/// Both sides of the determinant estimate for one map.
fn wente_pair(f: &VectorField) -> Result<(f64, f64)> {
    let det = divfree::jacobian_det(f)?;
    let lhs = norms::sobolev_norm(&det, -1.0)?;
    let rhs = dirichlet_energy(f)?;
    Ok((lhs, rhs))
}

/// Σ_c ‖F_c‖²_{Ḣ¹} = ‖∇F‖²_{L²}.
fn dirichlet_energy(f: &VectorField) -> Result<f64> {
    let mut sum = 0.0f64;
    for c in f.comps() {
        let v = norms::sobolev_norm(c, 1.0)?;
        sum += v * v;
    }
    Ok(sum)
}

/// Both sides of the wave estimate driven by a Jacobian determinant:
/// forcing det(∇F)·w(t) against ∫ w(t) ‖∇F‖²_{L²} dt with zero data. The
/// weight samples are the already-squared time profile.
fn wente_wave_pair(
    f: &VectorField,
    weight: &[f64],
    times: &TimeGrid,
    stride: usize,
) -> Result<(f64, f64)> {
    let grid = *f.grid();
    let det = divfree::jacobian_det(f)?;
    let fvec = VectorField::new(vec![det, ScalarField::zeros(grid)])?;
    let data = WaveData::new(VectorField::zeros(grid), VectorField::zeros(grid))?;
    let (measure, _) = energy_specs();
    let profiles = [weight.to_vec()];
    let lhs = wave_lhs(
        &data,
        &Forcing::Separable { fields: std::slice::from_ref(&fvec), profiles: &profiles },
        times,
        stride,
        &measure,
    )?;
    let energy = dirichlet_energy(f)?;
    let vals: Vec<f64> = weight.iter().map(|w| w * energy).collect();
    let rhs = norms::time_lebesgue_norm(&times.times(), &vals, 1.0)?;
    Ok((lhs, rhs))
}

/// Periodic Gaussian mollifier with unit mean: ĝ(k) = e^{−ε²|ξ|²/2},
/// restricted to the symmetric mode sublattice (Nyquist rows have no
/// mirror, so they are dropped to keep the bump exactly real and even).
fn gaussian_bump(grid: Grid, eps: f64) -> Result<ScalarField> {
    let omega = grid.omega_table();
    let mut k = vec![0i64; grid.dim()];
    let nyquist = -((grid.points() / 2) as i64);
    let coeffs = (0..grid.len())
        .map(|i| {
            grid.mode_at(i, &mut k);
            if k.iter().any(|&m| m == nyquist) {
                Complex64::new(0.0, 0.0)
            } else {
                let w = omega[i];
                Complex64::new((-0.5 * eps * eps * w * w).exp(), 0.0)
            }
        })
        .collect();
    ScalarField::from_coeffs(grid, coeffs)
}

/// Runs the per-trial closure over every refinement level, collecting rows
/// in trial order. The closure may return several (LHS, RHS) pairs per
/// trial (one per inner parameter, e.g. the α grid).
fn run_levels<F>(
    cfg: &ExperimentConfig,
    per_trial: F,
) -> Result<(Vec<TrialRow>, Vec<LevelSummary>, Option<bool>)>
where
    F: Fn(Grid, u64) -> Result<Vec<(f64, f64)>> + Sync + Send,
{
    let mut rows = Vec::new();
    let mut levels = Vec::new();
    for &points in &cfg.grid_points {
        let grid = Grid::new(cfg.n as usize, points, cfg.period)?;
        let results = exec::map_indices(cfg.family.trials, |i| {
            let seed = divfree::mix_seed(cfg.family.seed, i as u64);
            per_trial(grid, seed).map(|pairs| (seed, pairs))
        });
        let mut flagged_count = 0usize;
        let mut max_ratio = 0.0f64;
        for result in results {
            let (seed, pairs) = result?;
            for (lhs, rhs) in pairs {
                ensure_finite(lhs, rhs)?;
                let flagged = rhs == 0.0;
                let ratio = if flagged { 0.0 } else { lhs / rhs };
                if flagged {
                    flagged_count += 1;
                } else {
                    if !ratio.is_finite() {
                        return Err(Error::Config(format!("non-finite ratio {lhs}/{rhs}")));
                    }
                    max_ratio = max_ratio.max(ratio);
                }
                rows.push(TrialRow {
                    seed,
                    grid_points: points,
                    steps: cfg.steps,
                    lhs,
                    rhs,
                    ratio,
                    flagged,
                });
            }
        }
        levels.push(LevelSummary {
            grid_points: points,
            trials: cfg.family.trials,
            flagged: flagged_count,
            max_ratio,
        });
    }
    let stable = refinement_stability(&levels);
    Ok((rows, levels, stable))
}

fn basic_report(
    cfg: &ExperimentConfig,
    rows: Vec<TrialRow>,
    levels: Vec<LevelSummary>,
    stable: Option<bool>,
) -> RatioReport {
    RatioReport {
        experiment: cfg.experiment.name().to_string(),
        config_digest: cfg.digest(),
        rows,
        levels,
        scaling: Vec::new(),
        refinement_stable: stable,
        scaling_spread: None,
        monotone: None,
        pass: stable != Some(false),
    }
}

/// Energy bound for the forced wave system in two dimensions:
/// sup-in-time L² of u plus Ḣ⁻¹ of ∂_t u against data plus L¹_t L¹_x
/// of the divergence-free forcing.
pub fn run_wave_energy(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::WaveEnergy)?;
    cfg.validate()?;
    let times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    let stride = cfg.stride();
    let profile = default_profile(&times);
    let (measure, rhs_spec) = energy_specs();
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let u0 = divfree_field(&cfg.family, grid, seed, ROLE_U0)?;
        let u1 = divfree_field(&cfg.family, grid, seed, ROLE_U1)?;
        let ff = divfree_field(&cfg.family, grid, seed, ROLE_FORCING)?;
        Ok(vec![wave_trial(u0, u1, Some(&ff), &profile, &times, stride, &measure, &rhs_spec)?])
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Full space-time bound for the wave system at a passing exponent tuple.
pub fn run_wave_strichartz(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::WaveStrichartz)?;
    cfg.validate()?;
    let tuple = cfg.tuple()?.expect("validated");
    let (measure, rhs_spec) = strichartz_specs(&tuple)?;
    let times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    let stride = cfg.stride();
    let profile = default_profile(&times);
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let u0 = divfree_field(&cfg.family, grid, seed, ROLE_U0)?;
        let u1 = divfree_field(&cfg.family, grid, seed, ROLE_U1)?;
        let ff = divfree_field(&cfg.family, grid, seed, ROLE_FORCING)?;
        Ok(vec![wave_trial(u0, u1, Some(&ff), &profile, &times, stride, &measure, &rhs_spec)?])
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Zero-data wave bound in three dimensions: L^q_t L^r_x of the solution
/// against the forcing term alone.
pub fn run_wave_zero_data(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::WaveZeroData)?;
    cfg.validate()?;
    let tuple = cfg.tuple()?.expect("validated");
    let (measure, rhs_spec) = zero_data_specs(&tuple)?;
    let times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    let stride = cfg.stride();
    let profile = default_profile(&times);
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let zero = VectorField::zeros(grid);
        let ff = divfree_field(&cfg.family, grid, seed, ROLE_FORCING)?;
        Ok(vec![wave_trial(
            zero.clone(),
            zero,
            Some(&ff),
            &profile,
            &times,
            stride,
            &measure,
            &rhs_spec,
        )?])
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Space-time bound for the forced Schrödinger system at a passing tuple.
pub fn run_schrodinger_strichartz(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::SchrodingerStrichartz)?;
    cfg.validate()?;
    let tuple = cfg.tuple()?.expect("validated");
    let s = rat_f64(tuple.s.unwrap());
    let k = rat_f64(tuple.k.unwrap());
    let q = tuple.q.unwrap().to_f64();
    let r = tuple.r.unwrap().to_f64();
    let time_q = dual_exp_f64(tuple.qt.unwrap())?;
    let times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    let stride = cfg.stride();
    let profile = default_profile(&times);
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let u0 = divfree_field(&cfg.family, grid, seed, ROLE_U0)?;
        let ff = divfree_field(&cfg.family, grid, seed, ROLE_FORCING)?;
        Ok(vec![schrodinger_trial(
            u0,
            Some(&ff),
            &profile,
            &times,
            stride,
            s,
            q,
            r,
            k,
            time_q,
        )?])
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Negative-order Sobolev control of divergence-free fields by their L¹
/// norm, swept over the α grid. One row per (trial, α).
pub fn run_divfree_embedding(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::DivfreeEmbedding)?;
    cfg.validate()?;
    let alphas = cfg.parsed_alphas()?;
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let f = divfree_field(&cfg.family, grid, seed, ROLE_U0)?;
        if f.max_abs() == 0.0 {
            return Ok(vec![(0.0, 0.0); alphas.len()]);
        }
        let rhs = norms::vector_lebesgue_norm(&f, 1.0)?;
        alphas
            .iter()
            .map(|&a| Ok((divfree::vs_ratio(&f, a)? * rhs, rhs)))
            .collect()
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Determinant bound: Ḣ⁻¹-type norm of det(∇F) against the squared
/// Dirichlet energy of the map.
pub fn run_wente(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::Wente)?;
    cfg.validate()?;
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let f = random_map(&cfg.family, grid, seed)?;
        Ok(vec![wente_pair(&f)?])
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Wave equation forced by a Jacobian determinant with a bump-squared time
/// weight, against the time-integrated Dirichlet energy.
pub fn run_wente_wave(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::WenteWave)?;
    cfg.validate()?;
    let times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    let stride = cfg.stride();
    let weight: Vec<f64> = default_profile(&times).iter().map(|p| p * p).collect();
    let (rows, levels, stable) = run_levels(cfg, |grid, seed| {
        let f = random_map(&cfg.family, grid, seed)?;
        Ok(vec![wente_wave_pair(&f, &weight, &times, stride)?])
    })?;
    Ok(basic_report(cfg, rows, levels, stable))
}

/// Dilation sweep x ↦ λx, t ↦ λt with the λ² forcing weight: the base
/// estimate's ratio must be invariant, so the spread across λ is the
/// scale-invariance check.
pub fn run_scaling_sweep(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::ScalingSweep)?;
    cfg.validate()?;
    let points = cfg.grid_points[0];
    let stride = cfg.stride();
    let base_times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    // The profile samples are shared verbatim: on the compressed window the
    // nodes t_j/λ satisfy φ(λ·t_j/λ) = φ(t_j).
    let profile = default_profile(&base_times);
    let (measure, rhs_spec) = match cfg.base {
        Some(ExperimentKind::WaveEnergy) => energy_specs(),
        Some(ExperimentKind::WaveStrichartz) => {
            strichartz_specs(&cfg.tuple()?.expect("validated"))?
        }
        _ => unreachable!("validated"),
    };
    let mut rows = Vec::new();
    let mut scaling = Vec::new();
    let mut per_trial_ratios: Vec<Vec<f64>> = vec![Vec::new(); cfg.family.trials];
    for &lambda in &cfg.lambdas {
        let lam = lambda as f64;
        let grid = Grid::new(cfg.n as usize, points, cfg.period / lam)?;
        let times = TimeGrid::new(cfg.t_end / lam, cfg.steps)?;
        let results = exec::map_indices(cfg.family.trials, |i| -> Result<(u64, f64, f64)> {
            let seed = divfree::mix_seed(cfg.family.seed, i as u64);
            let u0 = divfree_field(&cfg.family, grid, seed, ROLE_U0)?;
            let u1 = divfree_field(&cfg.family, grid, seed, ROLE_U1)?
                .scaled(Complex64::new(lam, 0.0));
            let ff = divfree_field(&cfg.family, grid, seed, ROLE_FORCING)?
                .scaled(Complex64::new(lam * lam, 0.0));
            let (lhs, rhs) =
                wave_trial(u0, u1, Some(&ff), &profile, &times, stride, &measure, &rhs_spec)?;
            Ok((seed, lhs, rhs))
        });
        for (i, result) in results.into_iter().enumerate() {
            let (seed, lhs, rhs) = result?;
            ensure_finite(lhs, rhs)?;
            let flagged = rhs == 0.0;
            let ratio = if flagged { 0.0 } else { lhs / rhs };
            rows.push(TrialRow {
                seed,
                grid_points: points,
                steps: cfg.steps,
                lhs,
                rhs,
                ratio,
                flagged,
            });
            scaling.push(ScalingRow { lambda, seed, lhs, rhs, ratio });
            if !flagged {
                per_trial_ratios[i].push(ratio);
            }
        }
    }
    let mut spread: Option<f64> = None;
    for ratios in per_trial_ratios.iter().filter(|v| v.len() == cfg.lambdas.len()) {
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        let s = (hi - lo) / lo;
        spread = Some(spread.map_or(s, |a: f64| a.max(s)));
    }
    let pass = spread.map_or(true, |s| s <= SCALING_SPREAD_LIMIT);
    Ok(RatioReport {
        experiment: cfg.experiment.name().to_string(),
        config_digest: cfg.digest(),
        rows,
        levels: Vec::new(),
        scaling,
        refinement_stable: None,
        scaling_spread: spread,
        monotone: None,
        pass,
    })
}

/// L¹ growth of the first Riesz transform along a shrinking mollifier
/// family: the ratios must strictly increase as the width drops, the
/// numerical signature of L¹-unboundedness.
pub fn run_riesz_demo(cfg: &ExperimentConfig) -> Result<RatioReport> {
    ensure_kind(cfg, ExperimentKind::RieszDemo)?;
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut levels = Vec::new();
    let mut monotone = true;
    for &points in &cfg.grid_points {
        let grid = Grid::new(cfg.n as usize, points, cfg.period)?;
        let mut level_ratios = Vec::new();
        for (wi, &eps) in cfg.widths.iter().enumerate() {
            let g = gaussian_bump(grid, eps)?;
            let rg = multiplier::riesz_transform(&g, 0)?;
            let lhs = norms::lebesgue_norm(&rg, 1.0)?;
            let rhs = norms::lebesgue_norm(&g, 1.0)?;
            ensure_finite(lhs, rhs)?;
            let ratio = lhs / rhs;
            rows.push(TrialRow {
                seed: wi as u64,
                grid_points: points,
                steps: cfg.steps,
                lhs,
                rhs,
                ratio,
                flagged: false,
            });
            level_ratios.push(ratio);
        }
        monotone &= level_ratios.windows(2).all(|w| w[1] > w[0]);
        levels.push(LevelSummary {
            grid_points: points,
            trials: cfg.widths.len(),
            flagged: 0,
            max_ratio: level_ratios.iter().cloned().fold(0.0, f64::max),
        });
    }
    let stable = refinement_stability(&levels);
    Ok(RatioReport {
        experiment: cfg.experiment.name().to_string(),
        config_digest: cfg.digest(),
        rows,
        levels,
        scaling: Vec::new(),
        refinement_stable: stable,
        scaling_spread: None,
        monotone: Some(monotone),
        pass: monotone && stable != Some(false),
    })
}

/// Dispatches a config to its runner.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RatioReport> {
    match cfg.experiment {
        ExperimentKind::WaveEnergy => run_wave_energy(cfg),
        ExperimentKind::WaveStrichartz => run_wave_strichartz(cfg),
        ExperimentKind::WaveZeroData => run_wave_zero_data(cfg),
        ExperimentKind::SchrodingerStrichartz => run_schrodinger_strichartz(cfg),
        ExperimentKind::DivfreeEmbedding => run_divfree_embedding(cfg),
        ExperimentKind::Wente => run_wente(cfg),
        ExperimentKind::WenteWave => run_wente_wave(cfg),
        ExperimentKind::ScalingSweep => run_scaling_sweep(cfg),
        ExperimentKind::RieszDemo => run_riesz_demo(cfg),
    }
}

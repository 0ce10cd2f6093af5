//! Solver-vs-oracle checks: the production propagators (exact mode
//! rotations with trapezoid Duhamel accumulators) against fine-step RK4
//! integration of the same per-mode ODEs, and against closed forms.

mod common;

use common::{field_coeffs, frame_dist, frame_rss, rk4_schrodinger, rk4_wave, Frames};
use num_complex::Complex64;
use std::f64::consts::TAU;

use stricheck_core::divfree::{DivFreeGenerator, DivFreeKind};
use stricheck_core::evolution::{schrodinger_visit, wave_visit, Forcing, TimeGrid, WaveData};
use stricheck_core::experiments::bump_samples;
use stricheck_core::experiments::bump_value;
use stricheck_core::field::VectorField;
use stricheck_core::grid::Grid;

const SUPPORT: (f64, f64) = (TAU / 16.0, TAU * 9.0 / 16.0);

fn phi(t: f64) -> f64 {
    bump_value(t, SUPPORT.0, SUPPORT.1)
}

fn test_setup(seed: u64) -> (Grid, VectorField, VectorField, VectorField) {
    let grid = Grid::square(2, 16).unwrap();
    let gen = |role: u64, kind: DivFreeKind| {
        DivFreeGenerator::new(kind, seed + role, 1.0, 3)
            .generate(grid)
            .unwrap()
    };
    (
        grid,
        gen(1, DivFreeKind::CurlOfStream),
        gen(2, DivFreeKind::ProjectedRandom),
        gen(3, DivFreeKind::CurlOfStream),
    )
}

fn collect_wave(
    data: &WaveData,
    forcing: &Forcing,
    times: &TimeGrid,
) -> (Frames, Frames) {
    let mut u = Vec::new();
    let mut ut = Vec::new();
    wave_visit(data, forcing, times, |_, _, fu, fut| {
        u.push((0..fu.ncomp()).map(|c| fu.coeffs(c).to_vec()).collect());
        ut.push((0..fut.ncomp()).map(|c| fut.coeffs(c).to_vec()).collect());
        Ok(())
    })
    .unwrap();
    (u, ut)
}

fn collect_schrodinger(u0: &VectorField, forcing: &Forcing, times: &TimeGrid) -> Frames {
    let mut u = Vec::new();
    schrodinger_visit(u0, forcing, times, |_, _, f| {
        u.push((0..f.ncomp()).map(|c| f.coeffs(c).to_vec()).collect());
        Ok(())
    })
    .unwrap();
    u
}

fn rel_errors(sol: &Frames, oracle: &Frames, pick: impl Fn(usize) -> bool) -> f64 {
    let scale = oracle.iter().map(|f| frame_rss(f)).fold(0.0, f64::max);
    assert!(scale > 0.0);
    let mut worst = 0.0f64;
    for (j, (a, b)) in sol.iter().zip(oracle).enumerate() {
        if pick(j) {
            worst = worst.max(frame_dist(a, b) / scale);
        }
    }
    worst
}

#[test]
fn forced_wave_matches_fine_rk4() {
    let (grid, u0, u1, ff) = test_setup(40);
    let times = TimeGrid::new(TAU, 256).unwrap();
    let profile = bump_samples(&times, SUPPORT.0, SUPPORT.1);
    let data = WaveData::new(u0, u1).unwrap();

    let fields = [ff.clone()];
    let profiles = [profile];
    let forcing = Forcing::Separable { fields: &fields, profiles: &profiles };
    let (sol_u, sol_ut) = collect_wave(&data, &forcing, &times);

    let (ref_u, ref_ut) = rk4_wave(
        &grid,
        &field_coeffs(&data.u0),
        &field_coeffs(&data.u1),
        &field_coeffs(&ff),
        &phi,
        &times,
        16,
    );

    // Inside the forcing window the trapezoid quadrature is second order.
    let full_u = rel_errors(&sol_u, &ref_u, |_| true);
    let full_ut = rel_errors(&sol_ut, &ref_ut, |_| true);
    assert!(full_u < 1e-2, "full-window u error {full_u}");
    assert!(full_ut < 1e-2, "full-window ut error {full_ut}");

    // Past the window the quadrature error vanishes to all orders: the
    // integrand is smooth with compact support strictly inside the range.
    let past = |j: usize| times.time(j) >= 0.6 * TAU;
    let tail_u = rel_errors(&sol_u, &ref_u, past);
    let tail_ut = rel_errors(&sol_ut, &ref_ut, past);
    assert!(tail_u < 1e-7, "post-support u error {tail_u}");
    assert!(tail_ut < 1e-7, "post-support ut error {tail_ut}");
}

#[test]
fn forced_wave_converges_at_second_order() {
    let (grid, u0, u1, ff) = test_setup(41);
    let data = WaveData::new(u0, u1).unwrap();
    let fine = TimeGrid::new(TAU, 256).unwrap();
    let (ref_u, _) = rk4_wave(
        &grid,
        &field_coeffs(&data.u0),
        &field_coeffs(&data.u1),
        &field_coeffs(&ff),
        &phi,
        &fine,
        32,
    );
    let scale = ref_u.iter().map(|f| frame_rss(f)).fold(0.0, f64::max);

    let mut errors = Vec::new();
    for steps in [64usize, 128, 256] {
        let times = TimeGrid::new(TAU, steps).unwrap();
        let profile = bump_samples(&times, SUPPORT.0, SUPPORT.1);
        let fields = [ff.clone()];
        let profiles = [profile];
        let forcing = Forcing::Separable { fields: &fields, profiles: &profiles };
        let (sol_u, _) = collect_wave(&data, &forcing, &times);
        let stride = 256 / steps;
        let mut worst = 0.0f64;
        for (j, frame) in sol_u.iter().enumerate() {
            worst = worst.max(frame_dist(frame, &ref_u[j * stride]) / scale);
        }
        errors.push(worst);
    }
    assert!(
        errors[0] / errors[1] >= 3.5,
        "halving 64->128 gained only {:.2}x",
        errors[0] / errors[1]
    );
    assert!(
        errors[1] / errors[2] >= 3.5,
        "halving 128->256 gained only {:.2}x",
        errors[1] / errors[2]
    );
}

#[test]
fn free_schrodinger_matches_the_closed_form() {
    let (grid, u0, _, _) = test_setup(42);
    let times = TimeGrid::new(TAU, 128).unwrap();
    let sol = collect_schrodinger(&u0, &Forcing::Zero, &times);
    let coeffs = field_coeffs(&u0);
    let omega = grid.omega_table();

    let mut worst = 0.0f64;
    let scale = frame_rss(&coeffs);
    for (j, frame) in sol.iter().enumerate() {
        let t = times.time(j);
        let oracle: Vec<Vec<Complex64>> = coeffs
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&omega)
                    .map(|(v, w)| v * Complex64::from_polar(1.0, -t * w * w))
                    .collect()
            })
            .collect();
        worst = worst.max(frame_dist(frame, &oracle) / scale);
    }
    assert!(worst < 1e-11, "free propagator drifted {worst}");
}

#[test]
fn forced_schrodinger_matches_fine_rk4() {
    let (grid, u0, _, ff) = test_setup(43);
    let times = TimeGrid::new(TAU, 256).unwrap();
    let profile = bump_samples(&times, SUPPORT.0, SUPPORT.1);
    let fields = [ff.clone()];
    let profiles = [profile];
    let forcing = Forcing::Separable { fields: &fields, profiles: &profiles };
    let sol = collect_schrodinger(&u0, &forcing, &times);

    // Schrödinger modes rotate at ω² (not ω), so the oracle needs a finer
    // step than the wave case for its own error to sit well below the
    // post-support threshold.
    let oracle = rk4_schrodinger(
        &grid,
        &field_coeffs(&u0),
        &field_coeffs(&ff),
        &phi,
        &times,
        64,
    );

    let full = rel_errors(&sol, &oracle, |_| true);
    assert!(full < 1e-2, "full-window error {full}");
    let past = |j: usize| times.time(j) >= 0.6 * TAU;
    let tail = rel_errors(&sol, &oracle, past);
    assert!(tail < 1e-7, "post-support error {tail}");
}

//! Shared oracles for the integration and acceptance suites. Everything
//! here recomputes expected values through a different route than the
//! library: fine-step Runge-Kutta instead of exact mode propagators with
//! trapezoid Duhamel terms, and banded float arithmetic instead of exact
//! rationals for the exponent systems.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use stricheck_core::evolution::TimeGrid;
use stricheck_core::exponents::{Exponent, ExponentTuple, Rational, TheoremTag};
use stricheck_core::field::VectorField;
use stricheck_core::grid::Grid;

/// Frame sequence in coefficient form: [frame][component][mode].
pub type Frames = Vec<Vec<Vec<Complex64>>>;

pub fn field_coeffs(f: &VectorField) -> Vec<Vec<Complex64>> {
    f.comps().iter().map(|c| c.to_coeffs()).collect()
}

pub fn frame_rss(a: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flat_map(|c| c.iter())
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn frame_dist(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let mut sum = 0.0;
    for (ac, bc) in a.iter().zip(b) {
        for (x, y) in ac.iter().zip(bc) {
            sum += (x - y).norm_sqr();
        }
    }
    sum.sqrt()
}

/// Fine-step RK4 for û'' + ω²û = φ(t)·F̂, every mode independently,
/// recording (û, û') at the coarse nodes.
pub fn rk4_wave(
    grid: &Grid,
    u0: &[Vec<Complex64>],
    u1: &[Vec<Complex64>],
    forcing: &[Vec<Complex64>],
    phi: &dyn Fn(f64) -> f64,
    times: &TimeGrid,
    substeps: usize,
) -> (Frames, Frames) {
    let omega = grid.omega_table();
    let ncomp = u0.len();
    let len = grid.len();
    let mut y = u0.to_vec();
    let mut v = u1.to_vec();
    let mut frames_u = vec![y.clone()];
    let mut frames_ut = vec![v.clone()];
    let h = times.dt() / substeps as f64;
    for j in 0..times.steps() {
        let t0 = times.time(j);
        for m in 0..substeps {
            let t = t0 + m as f64 * h;
            let (p0, ph, p1) = (phi(t), phi(t + 0.5 * h), phi(t + h));
            for c in 0..ncomp {
                for i in 0..len {
                    let w2 = omega[i] * omega[i];
                    let fc = forcing[c][i];
                    let (y0, v0) = (y[c][i], v[c][i]);
                    let k1y = v0;
                    let k1v = p0 * fc - w2 * y0;
                    let k2y = v0 + 0.5 * h * k1v;
                    let k2v = ph * fc - w2 * (y0 + 0.5 * h * k1y);
                    let k3y = v0 + 0.5 * h * k2v;
                    let k3v = ph * fc - w2 * (y0 + 0.5 * h * k2y);
                    let k4y = v0 + h * k3v;
                    let k4v = p1 * fc - w2 * (y0 + h * k3y);
                    y[c][i] = y0 + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
                    v[c][i] = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
                }
            }
        }
        frames_u.push(y.clone());
        frames_ut.push(v.clone());
    }
    (frames_u, frames_ut)
}

/// Fine-step RK4 for û' = −i(ω²û + φ(t)·F̂), recording û at the coarse
/// nodes.
pub fn rk4_schrodinger(
    grid: &Grid,
    u0: &[Vec<Complex64>],
    forcing: &[Vec<Complex64>],
    phi: &dyn Fn(f64) -> f64,
    times: &TimeGrid,
    substeps: usize,
) -> Frames {
    let omega = grid.omega_table();
    let ncomp = u0.len();
    let len = grid.len();
    let mut y = u0.to_vec();
    let mut frames = vec![y.clone()];
    let h = times.dt() / substeps as f64;
    let mi = -Complex64::i();
    for j in 0..times.steps() {
        let t0 = times.time(j);
        for m in 0..substeps {
            let t = t0 + m as f64 * h;
            let (p0, ph, p1) = (phi(t), phi(t + 0.5 * h), phi(t + h));
            for c in 0..ncomp {
                for i in 0..len {
                    let w2 = omega[i] * omega[i];
                    let fc = forcing[c][i];
                    let y0 = y[c][i];
                    let k1 = mi * (w2 * y0 + p0 * fc);
                    let k2 = mi * (w2 * (y0 + 0.5 * h * k1) + ph * fc);
                    let k3 = mi * (w2 * (y0 + 0.5 * h * k2) + ph * fc);
                    let k4 = mi * (w2 * (y0 + h * k3) + p1 * fc);
                    y[c][i] = y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
            }
        }
        frames.push(y.clone());
    }
    frames
}

/// Band for the float re-evaluation: random rational tuples have true
/// slacks that are either exactly zero or at least ~1e-4, so a 1e-9 band
/// separates them under f64 rounding.
pub const ORACLE_TOL: f64 = 1e-9;

fn fle(a: f64, b: f64) -> bool {
    a <= b + ORACLE_TOL
}

fn flt(a: f64, b: f64) -> bool {
    a < b - ORACLE_TOL
}

fn feq(a: f64, b: f64) -> bool {
    (a - b).abs() <= ORACLE_TOL
}

pub fn ratf(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn recipf(e: Option<Exponent>) -> f64 {
    ratf(e.unwrap().recip())
}

fn is_inf(e: Option<Exponent>) -> bool {
    e.unwrap().is_infinite()
}

fn facceptable(xa: f64, a_inf: bool, xb: f64) -> bool {
    flt(xa + 2.0 * xb, 1.0) || (a_inf && feq(xb, 0.5))
}

/// Float re-evaluation of the condition system named by the tuple's tag.
/// Returns the pass verdict.
pub fn float_check(t: &ExponentTuple) -> bool {
    let n = t.n as f64;
    match t.theorem {
        TheoremTag::WaveSystem => {
            let (xq, xr, xqt) = (recipf(t.q), recipf(t.r), recipf(t.qt));
            let (s, k) = (ratf(t.s.unwrap()), ratf(t.k.unwrap()));
            let mut ok = fle(2.0, n);
            ok &= fle(xq, 0.5);
            ok &= fle(xqt, 0.5);
            ok &= fle(xr, 0.5) && flt(0.0, xr);
            if t.n == 2 || t.n == 3 {
                ok &= flt(xqt, (n - 1.0) / 4.0);
            }
            ok &= fle(xq + (n - 1.0) / 2.0 * xr, (n - 1.0) / 4.0);
            ok &= feq(xq + n * xr, n / 2.0 - s);
            ok &= feq(n / 2.0 - s, 1.0 - xqt + (n - 2.0) - k);
            ok
        }
        TheoremTag::WaveScalar => {
            let (xq, xr) = (recipf(t.q), recipf(t.r));
            let (xqt, xrt) = (recipf(t.qt), recipf(t.rt));
            let (s, g) = (ratf(t.s.unwrap()), ratf(t.gamma.unwrap()));
            let mut ok = fle(2.0, n);
            ok &= fle(xq, 0.5) && fle(xqt, 0.5);
            ok &= fle(xr, 0.5) && flt(0.0, xr);
            ok &= fle(xrt, 0.5) && flt(0.0, xrt);
            ok &= fle(xq + (n - 1.0) / 2.0 * xr, (n - 1.0) / 4.0);
            ok &= fle(xqt + (n - 1.0) / 2.0 * xrt, (n - 1.0) / 4.0);
            ok &= feq(xq + n * xr, n / 2.0 - s);
            ok &= feq(n / 2.0 - s, 1.0 - xqt + n * (1.0 - xrt) - 2.0 - g);
            ok
        }
        TheoremTag::InhomoWave3d => {
            let (xq, xr, xqt) = (recipf(t.q), recipf(t.r), recipf(t.qt));
            let k = ratf(t.k.unwrap());
            let mut ok = flt(xq, 1.0) && flt(xqt, 1.0);
            ok &= fle(xr, 0.5) && flt(0.0, xr);
            ok &= flt(xq + xqt, 1.0f64.min((k + 1.0) / 2.0));
            ok &= facceptable(xq, is_inf(t.q), xr);
            ok &= feq(xq + 3.0 * xr, 2.0 - k - xqt);
            ok
        }
        TheoremTag::Taggart => {
            let (xq, xr) = (recipf(t.q), recipf(t.r));
            let (xqt, xrt) = (recipf(t.qt), recipf(t.rt));
            let g = ratf(t.gamma.unwrap());
            let mut ok = flt(xq, 1.0) && flt(xqt, 1.0);
            ok &= fle(xr, 0.5) && flt(0.0, xr);
            ok &= fle(xrt, 0.5) && flt(0.0, xrt);
            ok &= flt(xq + xqt, 1.0);
            ok &= fle(xq + xqt, (g + 1.0) / 2.0);
            ok &= facceptable(xq, is_inf(t.q), xr);
            ok &= facceptable(xqt, is_inf(t.qt), xrt);
            ok &= feq(xq + 3.0 * xr, 2.0 - g - xqt - 3.0 * xrt);
            ok
        }
        TheoremTag::Schrodinger => {
            let (xq, xr, xqt) = (recipf(t.q), recipf(t.r), recipf(t.qt));
            let (s, k) = (ratf(t.s.unwrap()), ratf(t.k.unwrap()));
            let mut ok = fle(2.0, n);
            ok &= fle(xq, 0.5) && fle(xqt, 0.5);
            ok &= fle(xr, 0.5) && flt(0.0, xr);
            ok &= fle(0.0, s);
            ok &= flt(s, k);
            ok &= feq(2.0 * xq + n * xr, n / 2.0 - s);
            ok &= feq(2.0 * xqt, n / 2.0 - k + s);
            ok
        }
        TheoremTag::SchrodingerScalar => {
            let (xq, xr) = (recipf(t.q), recipf(t.r));
            let (xqt, xrt) = (recipf(t.qt), recipf(t.rt));
            let (s, g) = (ratf(t.s.unwrap()), ratf(t.gamma.unwrap()));
            let mut ok = fle(2.0, n);
            ok &= fle(xq, 0.5) && fle(xqt, 0.5);
            ok &= fle(xr, 0.5) && flt(0.0, xr);
            ok &= fle(xrt, 0.5) && flt(0.0, xrt);
            ok &= fle(0.0, s);
            ok &= flt(s, g);
            ok &= feq(2.0 * xq + n * xr, n / 2.0 - s);
            ok &= feq(2.0 * xqt + n * xrt, n / 2.0 - g + s);
            ok
        }
    }
}

fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Reciprocal draw in [0, hi] with denominator ≤ 16·(1/hi is 2 or 1).
fn draw_recip(rng: &mut ChaCha12Rng, half: bool) -> Rational {
    let den = rng.random_range(1..=16i64);
    if half {
        let num = rng.random_range(0..=den);
        rat(num, 2 * den)
    } else {
        let num = rng.random_range(0..den);
        rat(num, den)
    }
}

fn maybe_perturb(rng: &mut ChaCha12Rng, x: Rational) -> Rational {
    match rng.random_range(0..4u8) {
        0 => x + rat(1, 8192),
        1 => x - rat(1, 8192),
        _ => x,
    }
}

fn exp_of(x: Rational) -> Exponent {
    Exponent::from_recip(x).expect("draws stay in [0, 1]")
}

/// Seeded random tuples with the correct field layout for `tag`. Free
/// reciprocals are rational grid draws; the regularity indices are either
/// derived exactly from the scale identities or perturbed off them by
/// ±1/8192, so equality conditions are exercised in both directions.
pub fn random_tuples(tag: TheoremTag, n: u32, count: usize, seed: u64) -> Vec<ExponentTuple> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let nr = Rational::from_integer(n as i64);
    let half_n = nr / rat(2, 1);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let t = match tag {
            TheoremTag::WaveSystem => {
                let (xq, xqt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let xr = draw_recip(&mut rng, true);
                let s = half_n - xq - nr * xr;
                let k = rat(1, 1) - xqt + nr - rat(2, 1) - (half_n - s);
                ExponentTuple::wave_system(
                    n,
                    exp_of(xq),
                    exp_of(xr),
                    exp_of(xqt),
                    maybe_perturb(&mut rng, s),
                    maybe_perturb(&mut rng, k),
                )
            }
            TheoremTag::WaveScalar => {
                let (xq, xqt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let (xr, xrt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let s = half_n - xq - nr * xr;
                let g = rat(1, 1) - xqt + nr * (rat(1, 1) - xrt) - rat(2, 1) - (half_n - s);
                ExponentTuple::wave_scalar(
                    n,
                    exp_of(xq),
                    exp_of(xr),
                    exp_of(xqt),
                    exp_of(xrt),
                    maybe_perturb(&mut rng, s),
                    maybe_perturb(&mut rng, g),
                )
            }
            TheoremTag::InhomoWave3d => {
                let (xq, xqt) = (draw_recip(&mut rng, false), draw_recip(&mut rng, false));
                let xr = draw_recip(&mut rng, true);
                let k = rat(2, 1) - xqt - xq - rat(3, 1) * xr;
                ExponentTuple::inhomo_wave3d(
                    exp_of(xq),
                    exp_of(xr),
                    exp_of(xqt),
                    maybe_perturb(&mut rng, k),
                )
            }
            TheoremTag::Taggart => {
                let (xq, xqt) = (draw_recip(&mut rng, false), draw_recip(&mut rng, false));
                let (xr, xrt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let g = rat(2, 1) - xq - rat(3, 1) * xr - xqt - rat(3, 1) * xrt;
                ExponentTuple::taggart(
                    exp_of(xq),
                    exp_of(xr),
                    exp_of(xqt),
                    exp_of(xrt),
                    maybe_perturb(&mut rng, g),
                )
            }
            TheoremTag::Schrodinger => {
                let (xq, xqt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let xr = draw_recip(&mut rng, true);
                let s = half_n - rat(2, 1) * xq - nr * xr;
                let k = half_n - rat(2, 1) * xqt + s;
                ExponentTuple::schrodinger(
                    n,
                    exp_of(xq),
                    exp_of(xr),
                    exp_of(xqt),
                    maybe_perturb(&mut rng, s),
                    maybe_perturb(&mut rng, k),
                )
            }
            TheoremTag::SchrodingerScalar => {
                let (xq, xqt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let (xr, xrt) = (draw_recip(&mut rng, true), draw_recip(&mut rng, true));
                let s = half_n - rat(2, 1) * xq - nr * xr;
                let g = half_n - rat(2, 1) * xqt - nr * xrt + s;
                ExponentTuple::schrodinger_scalar(
                    n,
                    exp_of(xq),
                    exp_of(xr),
                    exp_of(xqt),
                    exp_of(xrt),
                    maybe_perturb(&mut rng, s),
                    maybe_perturb(&mut rng, g),
                )
            }
        };
        out.push(t);
    }
    out
}

/// Constraint set for the split x = 1/r₁, y = σ − x of a scalar zero-data
/// tuple, restated here independently: r₁ ≤ r, r̃₁ ≤ r̃, both in [2, ∞),
/// and both acceptability alternatives against (q, q̃).
pub fn taggart_split_ok(t: &ExponentTuple, x: Rational) -> bool {
    let (q, qt) = (t.q.unwrap(), t.qt.unwrap());
    let sigma = rat(1, 1) - q.recip() - qt.recip();
    let y = sigma - x;
    let half = rat(1, 2);
    let zero = rat(0, 1);
    let one = rat(1, 1);
    if x < t.r.unwrap().recip() || y < t.rt.unwrap().recip() {
        return false;
    }
    if x > half || y > half || x <= zero || y <= zero {
        return false;
    }
    let acc_q = q.recip() + rat(2, 1) * x < one || (q.is_infinite() && x == half);
    let acc_qt = qt.recip() + rat(2, 1) * y < one || (qt.is_infinite() && y == half);
    acc_q && acc_qt
}

/// Complete decision of split feasibility by dense rational search: every
/// constraint endpoint for tuples with denominators ≤ 8 lies on the
/// 1/5040 grid, so scanning it finds a feasible point iff one exists.
pub fn taggart_split_exists(t: &ExponentTuple) -> bool {
    const K: i64 = 5040;
    (1..=K / 2).any(|m| taggart_split_ok(t, rat(m, K)))
}

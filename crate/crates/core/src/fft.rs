//! Separable multidimensional FFT over `rustfft`, plus the spectral
//! zero-pad/truncate used for dealiased products.
//!
//! Conventions: `forward` produces synthesis coefficients, i.e.
//! `u(x_j) = sum_k uhat(k) exp(i xi_k . x_j)`, so the forward transform
//! carries the 1/N^dim factor and the inverse is the plain unnormalized
//! synthesis sum. Transform indices fold to signed modes as in [`Grid`].

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

use crate::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(len)
        } else {
            p.plan_fft_inverse(len)
        }
    })
}

fn transform_axis(shape: &[usize], data: &mut [Complex64], axis: usize, forward: bool) {
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let block = n * stride;
    let fft = plan(n, forward);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    if stride == 1 {
        for chunk in data.chunks_exact_mut(n) {
            fft.process_with_scratch(chunk, &mut scratch);
        }
    } else {
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            let base = o * block;
            for i in 0..stride {
                let start = base + i;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, value) in line.iter().enumerate() {
                    data[start + j * stride] = *value;
                }
            }
        }
    }
}

/// Analysis transform on an arbitrary rectangular shape (row-major, last
/// axis contiguous). Scales by 1/len so the output are synthesis
/// coefficients.
pub fn forward_shaped(shape: &[usize], data: &mut [Complex64]) {
    for axis in 0..shape.len() {
        transform_axis(shape, data, axis, true);
    }
    let scale = 1.0 / shape.iter().product::<usize>() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Synthesis transform on an arbitrary rectangular shape.
pub fn inverse_shaped(shape: &[usize], data: &mut [Complex64]) {
    for axis in 0..shape.len() {
        transform_axis(shape, data, axis, false);
    }
}

/// Physical samples -> synthesis coefficients on a grid.
pub fn forward(grid: &Grid, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    let shape = vec![grid.points(); grid.dim()];
    forward_shaped(&shape, data);
}

/// Synthesis coefficients -> physical samples on a grid.
pub fn inverse(grid: &Grid, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    let shape = vec![grid.points(); grid.dim()];
    inverse_shaped(&shape, data);
}

fn fold_signed(m: usize, n: usize) -> i64 {
    let m = m as i64;
    let n = n as i64;
    if m < (n + 1) / 2 {
        m
    } else {
        m - n
    }
}

/// Re-slots coefficients from a cubic spectrum with `src_n` points per axis
/// into one with `dst_n` points per axis. Modes that the destination cannot
/// represent are dropped; new modes are zero. Exact for band-limited data.
pub fn resize_spectrum(dim: usize, src_n: usize, src: &[Complex64], dst_n: usize) -> Vec<Complex64> {
    debug_assert_eq!(src.len(), src_n.pow(dim as u32));
    let mut dst = vec![Complex64::new(0.0, 0.0); dst_n.pow(dim as u32)];
    let lo = -(dst_n as i64) / 2;
    let hi = (dst_n as i64 + 1) / 2; // exclusive
    let mut mode = [0i64; 4];
    for (flat, &value) in src.iter().enumerate() {
        if value == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut rem = flat;
        for d in (0..dim).rev() {
            mode[d] = fold_signed(rem % src_n, src_n);
            rem /= src_n;
        }
        if mode[..dim].iter().any(|&k| k < lo || k >= hi) {
            continue;
        }
        let mut out = 0usize;
        for &k in &mode[..dim] {
            out = out * dst_n + k.rem_euclid(dst_n as i64) as usize;
        }
        dst[out] = value;
    }
    dst
}

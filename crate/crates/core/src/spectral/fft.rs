use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn run_1d(buf: &mut [Complex64], len: usize, direction: FftDirection) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction));
    plan.process(buf);
}

/// In-place transform of a row-major `size^n` array along every axis.
fn run(buf: &mut [Complex64], n: usize, size: usize, direction: FftDirection) {
    match n {
        1 => run_1d(buf, size, direction),
        2 => transform_2d(buf, size, direction == FftDirection::Inverse),
        _ => unreachable!("grid dimension is validated on construction"),
    }
}

/// Forward transform normalized so that `f_k = sum_m F_m e^{2 pi i m.k/N}`.
pub fn forward(samples: &[f64], n: usize, size: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    run(&mut buf, n, size, FftDirection::Forward);
    let scale = 1.0 / buf.len() as f64;
    for z in &mut buf {
        *z *= scale;
    }
    buf
}

/// Unnormalized inverse of [`forward`].
pub fn inverse(spectrum: &[Complex64], n: usize, size: usize) -> Vec<Complex64> {
    let mut buf = spectrum.to_vec();
    run(&mut buf, n, size, FftDirection::Inverse);
    buf
}

/// Plain complex transform of a 1D buffer with a caller-chosen direction.
pub fn transform_1d(buf: &mut [Complex64], inverse: bool) {
    let dir = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
    run_1d(buf, buf.len(), dir);
}

/// Complex 2D transform of a row-major square buffer.
pub fn transform_2d(buf: &mut [Complex64], size: usize, inverse: bool) {
    let dir = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
    // rows are contiguous; process them one at a time
    for row in buf.chunks_mut(size) {
        run_1d(row, size, dir);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); size];
    for c in 0..size {
        for r in 0..size {
            col[r] = buf[r * size + c];
        }
        run_1d(&mut col, size, dir);
        for r in 0..size {
            buf[r * size + c] = col[r];
        }
    }
}

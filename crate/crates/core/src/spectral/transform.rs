//! Continuous Fourier transforms of the compactly supported radial bumps.
//!
//! `h^(x) = int h(xi) e^{2 pi i xi.x} dxi` is tabulated on a fine grid by a
//! zero-padded FFT and read back by four-point Lagrange interpolation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::bump;
use super::fft;
use crate::error::{Error, Result};

/// Tabulated transform of an even function of one variable supported in
/// `[-2, 2]`.
#[derive(Debug, Clone)]
pub struct TransformTable {
    step: f64,
    values: Vec<f64>,
}

impl TransformTable {
    /// `oversample` fixes the table spacing `1/oversample`; `len` points cover
    /// `|x| < len / (2 oversample)`.
    pub fn build(h: impl Fn(f64) -> f64, oversample: f64, len: usize) -> Result<Self> {
        if !len.is_power_of_two() || len < 64 || oversample < 8.0 {
            return Err(Error::Resolution(format!(
                "transform table needs a power-of-two length >= 64 and oversampling >= 8, got {len} and {oversample}"
            )));
        }
        let dxi = oversample / len as f64;
        let mut buf: Vec<Complex64> = (0..len)
            .map(|k| {
                let xi = fft_coord(k, len) as f64 * dxi;
                Complex64::new(h(xi) * dxi, 0.0)
            })
            .collect();
        fft::transform_1d(&mut buf, true);
        // reorder so that index 0 is the most negative x
        let half = len / 2;
        let values = (0..len).map(|i| buf[(i + half) % len].re).collect();
        Ok(Self { step: 1.0 / oversample, values })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Largest `|x|` covered by the table.
    pub fn reach(&self) -> f64 {
        self.step * (self.values.len() / 2 - 2) as f64
    }

    /// Interpolated value; zero beyond the table.
    pub fn eval(&self, x: f64) -> f64 {
        let half = (self.values.len() / 2) as f64;
        let u = x / self.step + half;
        let i = u.floor();
        if i < 1.0 || i + 2.0 >= self.values.len() as f64 {
            return 0.0;
        }
        let t = u - i;
        let i = i as usize;
        let (a, b, c, d) = (self.values[i - 1], self.values[i], self.values[i + 1], self.values[i + 2]);
        let wa = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let wb = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let wc = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let wd = (t + 1.0) * t * (t - 1.0) / 6.0;
        wa * a + wb * b + wc * c + wd * d
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Riemann sum of `|h^|` over the table.
    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.step
    }
}

fn fft_coord(k: usize, len: usize) -> i64 {
    if k < len / 2 {
        k as i64
    } else {
        k as i64 - len as i64
    }
}

/// Table of the transform of `Psi_{(-r)}`.
pub fn psi_weighted_table(r: f64) -> Result<TransformTable> {
    TransformTable::build(|xi| bump::psi_weighted(xi.abs(), r), 256.0, 1 << 17)
}

/// Table of the transform of `Phi`.
pub fn phi_table() -> Result<TransformTable> {
    TransformTable::build(|xi| bump::phi(xi.abs()), 256.0, 1 << 17)
}

/// `||Psi^||_{L^1(R^n)}` for `n` in {1, 2}, computed once per dimension.
pub fn psi_hat_l1(n: usize) -> f64 {
    static ONE: OnceLock<f64> = OnceLock::new();
    static TWO: OnceLock<f64> = OnceLock::new();
    match n {
        1 => *ONE.get_or_init(|| {
            TransformTable::build(|xi| bump::psi(xi.abs()), 1024.0, 1 << 19)
                .expect("fixed table size is valid")
                .l1()
        }),
        2 => *TWO.get_or_init(psi_hat_l1_radial_2d),
        _ => panic!("dimension {n} is not supported"),
    }
}

/// Hankel transform route: `Psi^(R) = 2 pi int Psi(rho) J0(2 pi rho R) rho drho`
/// and `||Psi^||_1 = int |Psi^(R)| 2 pi R dR`.
fn psi_hat_l1_radial_2d() -> f64 {
    let (a, b, nq) = (0.5, 2.0, 1600usize);
    let hq = (b - a) / nq as f64;
    let nodes: Vec<(f64, f64)> = (0..=nq)
        .map(|i| {
            let rho = a + i as f64 * hq;
            let w = if i == 0 || i == nq { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            (rho, w * hq / 3.0 * bump::psi(rho) * rho)
        })
        .filter(|&(_, w)| w != 0.0)
        .collect();
    let (rmax, hr) = (80.0, 0.001);
    let count = (rmax / hr) as usize;
    use rayon::prelude::*;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let big_r = (i as f64 + 0.5) * hr;
            let v: f64 = nodes.iter().map(|&(rho, w)| w * libm::j0(2.0 * PI * rho * big_r)).sum();
            (2.0 * PI * v).abs() * 2.0 * PI * big_r * hr
        })
        .sum()
}

//! Fourier coefficients `c_{s,m}` of `Phi_{(s)}(t) = |t|^s Phi~(t)` on the
//! period box `[-8, 8)^n`, and their decay fit.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::bump;
use crate::spectral::fft;

const PERIOD: f64 = 16.0;
const DOUBLING_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct FourierCoefficients {
    pub n: usize,
    pub s: f64,
    pub m_max: usize,
    pub quad_n: usize,
    values: Vec<Complex64>,
}

impl FourierCoefficients {
    /// Trapezoidal (FFT) quadrature at `quad_n` points per axis with the
    /// aliased images of the `|t|^s` singularity subtracted in closed form.
    /// The result is cross-checked against `2 quad_n` points.
    pub fn compute(n: usize, s: f64, m_max: usize, quad_n: usize) -> Result<Self> {
        if !(n == 1 || n == 2) {
            return Err(Error::InvalidParameter(format!("dimension {n} is not supported")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("coefficients require s > 0, got {s}")));
        }
        if !quad_n.is_power_of_two() || quad_n < 8 * m_max.max(1) {
            return Err(Error::Resolution(format!(
                "quad_N must be a power of two >= 8 m_max = {}, got {quad_n}",
                8 * m_max.max(1)
            )));
        }
        let coarse = Self::quadrature(n, s, m_max, quad_n);
        let fine = Self::quadrature(n, s, m_max, 2 * quad_n);
        let drift = coarse.iter().zip(&fine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if drift > DOUBLING_TOL {
            return Err(Error::Resolution(format!(
                "coefficients move by {drift:.3e} under quadrature doubling (quad_N = {quad_n})"
            )));
        }
        Ok(Self { n, s, m_max, quad_n, values: coarse })
    }

    fn quadrature(n: usize, s: f64, m_max: usize, q: usize) -> Vec<Complex64> {
        let h = PERIOD / q as f64;
        let coord = |k: usize| -PERIOD / 2.0 + k as f64 * h;
        let len = q.pow(n as u32);
        let samples: Vec<f64> = (0..len)
            .map(|idx| {
                let t = match n {
                    1 => coord(idx).abs(),
                    _ => coord(idx / q).hypot(coord(idx % q)),
                };
                bump::power(t, s) * bump::phi_tilde(t)
            })
            .collect();
        let spec = fft::forward(&samples, n, q);
        let side = 2 * m_max + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); side.pow(n as u32)];
        let amp = singular_amplitude(n, s);
        for (slot, value) in out.iter_mut().enumerate() {
            let m = unflatten(slot, n, m_max);
            let bin = |mi: i64| mi.rem_euclid(q as i64) as usize;
            let flat = match n {
                1 => bin(m[0]),
                _ => bin(m[0]) * q + bin(m[1]),
            };
            // the box starts at -8, a shift of half a period
            let parity = if (m[0] + m[1]).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let alias = if amp == 0.0 { 0.0 } else { amp * image_sum(n, s, m, q) };
            *value = spec[flat] * parity - alias;
        }
        out
    }

    fn slot(&self, m: &[i64]) -> Option<usize> {
        let mm = self.m_max as i64;
        let side = 2 * mm + 1;
        if m.iter().take(self.n).any(|v| v.abs() > mm) {
            return None;
        }
        Some(match self.n {
            1 => (m[0] + mm) as usize,
            _ => ((m[0] + mm) * side + m[1] + mm) as usize,
        })
    }

    /// `c_{s,m}`, or zero beyond the truncation.
    pub fn get(&self, m: &[i64]) -> Complex64 {
        self.slot(m).map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = ([i64; 2], Complex64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &c)| (unflatten(i, self.n, self.m_max), c))
    }

    /// Copy restricted to `|m|_inf <= m_max`.
    pub fn truncated(&self, m_max: usize) -> Self {
        let m_max = m_max.min(self.m_max);
        let side = 2 * m_max + 1;
        let values = (0..side.pow(self.n as u32)).map(|i| self.get(&unflatten(i, self.n, m_max))).collect();
        Self { n: self.n, s: self.s, m_max, quad_n: self.quad_n, values }
    }

    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).sum()
    }

    /// `sum_m |c_{s,m}| |m|^k`.
    pub fn weighted_abs_sum(&self, k: f64) -> f64 {
        self.iter()
            .map(|(m, c)| {
                let r = (m[0] as f64).hypot(m[1] as f64);
                c.norm() * bump::power(r, k)
            })
            .sum()
    }

    /// Truncated series `sum_m c_{s,m} e^{2 pi i m.t / 16}`.
    pub fn eval(&self, t: &[f64]) -> Complex64 {
        let mm = self.m_max;
        match self.n {
            1 => {
                let theta = 2.0 * PI * t[0] / PERIOD;
                let step = Complex64::from_polar(1.0, theta);
                let mut z = Complex64::new(1.0, 0.0);
                let mut acc = self.values[mm];
                for m in 1..=mm {
                    z *= step;
                    acc += self.values[mm + m] * z + self.values[mm - m] * z.conj();
                }
                acc
            }
            _ => {
                let phases = |ti: f64| -> Vec<Complex64> {
                    (0..=2 * mm)
                        .map(|i| Complex64::from_polar(1.0, 2.0 * PI * (i as f64 - mm as f64) * ti / PERIOD))
                        .collect()
                };
                let (e0, e1) = (phases(t[0]), phases(t[1]));
                let side = 2 * mm + 1;
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, za) in e0.iter().enumerate() {
                    let row = &self.values[a * side..(a + 1) * side];
                    let inner: Complex64 = row.iter().zip(&e1).map(|(c, zb)| c * zb).sum();
                    acc += za * inner;
                }
                acc
            }
        }
    }

    /// CSV with columns `m0[,m1],real,imag,abs`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let header = if self.n == 1 { "m0,real,imag,abs" } else { "m0,m1,real,imag,abs" };
        writeln!(w, "{header}")?;
        for (m, c) in self.iter() {
            let idx = if self.n == 1 { format!("{}", m[0]) } else { format!("{},{}", m[0], m[1]) };
            writeln!(w, "{idx},{:.17e},{:.17e},{:.17e}", c.re, c.im, c.norm())?;
        }
        Ok(())
    }
}

fn unflatten(i: usize, n: usize, m_max: usize) -> [i64; 2] {
    let side = 2 * m_max + 1;
    let mm = m_max as i64;
    match n {
        1 => [i as i64 - mm, 0],
        _ => [(i / side) as i64 - mm, (i % side) as i64 - mm],
    }
}

/// Amplitude `a` with `c_{s,m} ~ a |m|^{-n-s}` coming from the origin,
/// from the transform of `|t|^s` on `R^n`. Zero when `|t|^s` is smooth.
fn singular_amplitude(n: usize, s: f64) -> f64 {
    let half = s / 2.0;
    if (half - half.round()).abs() < 1e-12 {
        return 0.0;
    }
    let nf = n as f64;
    let transform = PI.powf(-s - nf / 2.0) * libm::tgamma((s + nf) / 2.0) / libm::tgamma(-half);
    // c_m = 16^{-n} * transform * |m/16|^{-s-n}
    transform * PERIOD.powf(s)
}

/// `sum_{p != 0} |m + p q|^{-n-s}`.
fn image_sum(n: usize, s: f64, m: [i64; 2], q: usize) -> f64 {
    let a = n as f64 + s;
    let qf = q as f64;
    match n {
        1 => {
            let mf = m[0] as f64;
            let terms = 2048;
            let mut acc = 0.0;
            for p in 1..=terms {
                let pq = p as f64 * qf;
                acc += (pq + mf).powf(-a) + (pq - mf).powf(-a);
            }
            let edge = (terms as f64 + 0.5) * qf;
            acc + ((edge + mf).powf(1.0 - a) + (edge - mf).powf(1.0 - a)) / ((a - 1.0) * qf)
        }
        _ => {
            let reach = 16i64;
            let mut acc = 0.0;
            for p0 in -reach..=reach {
                for p1 in -reach..=reach {
                    if p0 == 0 && p1 == 0 {
                        continue;
                    }
                    let x = m[0] as f64 + p0 as f64 * qf;
                    let y = m[1] as f64 + p1 as f64 * qf;
                    acc += x.hypot(y).powf(-a);
                }
            }
            // remaining images, replaced by the integral outside a disk of equal area
            let radius = (2 * reach + 1) as f64 / PI.sqrt();
            acc + 2.0 * PI * radius.powf(2.0 - a) * qf.powf(-a) / (a - 2.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares line through `(log rho, log rms |c|)` over integer shells
/// `8 <= rho <= m_max`.
pub fn coeff_decay_fit(c: &FourierCoefficients) -> Result<DecayFit> {
    if c.m_max < 64 {
        return Err(Error::InvalidParameter(format!("decay fit needs m_max >= 64, got {}", c.m_max)));
    }
    let shells = c.m_max + 1;
    let mut sum_sq = vec![0.0; shells];
    let mut count = vec![0usize; shells];
    for (m, v) in c.iter() {
        let rho = (m[0] as f64).hypot(m[1] as f64).floor() as usize;
        if (8..shells).contains(&rho) {
            sum_sq[rho] += v.norm_sqr();
            count[rho] += 1;
        }
    }
    let pts: Vec<(f64, f64)> = (8..shells)
        .filter(|&r| count[r] > 0 && sum_sq[r] > 0.0)
        .map(|r| ((r as f64).ln(), (sum_sq[r] / count[r] as f64).sqrt().ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate("coefficient tail is identically zero".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(DecayFit { slope, intercept: my - slope * mx })
}

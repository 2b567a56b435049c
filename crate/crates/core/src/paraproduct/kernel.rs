//! The bilinear kernel of `Pi_1` in one dimension:
//! `K_1(y, z) = sum_{j<=0} sum_m c_{s,m} 2^{j(s-r)} 2^{2j} Psi_{(-r)}^(m/16 + 2^j y) Phi^(m/16 + 2^j z)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::coeffs::FourierCoefficients;
use crate::error::{Error, Result};
use crate::spectral::transform::{self, TransformTable};
use crate::spectral::SpectralField;

pub struct KernelK1 {
    pub s: f64,
    pub r: f64,
    pub j_depth: u32,
    pub m_max: usize,
    coeffs: Arc<FourierCoefficients>,
    psi_hat: TransformTable,
    phi_hat: TransformTable,
}

impl KernelK1 {
    pub fn new(coeffs: Arc<FourierCoefficients>, r: f64, j_depth: u32, m_max: usize) -> Result<Self> {
        if coeffs.n != 1 {
            return Err(Error::InvalidParameter("the K1 kernel is implemented for n = 1 only".into()));
        }
        let s = coeffs.s;
        if !(r >= 0.0 && s > r) {
            return Err(Error::ParameterWindow(format!("requires s > r >= 0, got r={r}, s={s}")));
        }
        if m_max > coeffs.m_max {
            return Err(Error::InvalidParameter(format!(
                "kernel truncation m_max = {m_max} exceeds the {} precomputed coefficients",
                coeffs.m_max
            )));
        }
        Ok(Self {
            s,
            r,
            j_depth,
            m_max,
            coeffs,
            psi_hat: transform::psi_weighted_table(r)?,
            phi_hat: transform::phi_table()?,
        })
    }

    fn level_weight(&self, j: i32) -> f64 {
        2f64.powf(j as f64 * (self.s - self.r)) * 2f64.powi(2 * j)
    }

    fn levels(&self) -> impl Iterator<Item = i32> {
        -(self.j_depth as i32)..=0
    }

    fn ensure_reach(&self, extent: f64) -> Result<()> {
        let need = self.m_max as f64 / 16.0 + extent;
        let have = self.psi_hat.reach().min(self.phi_hat.reach());
        if need > have {
            return Err(Error::Resolution(format!(
                "kernel arguments reach {need:.1} but the transform tables cover {have:.1}"
            )));
        }
        Ok(())
    }

    /// Truncated kernel value.
    pub fn eval(&self, y: f64, z: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in self.levels() {
            let scale = 2f64.powi(j);
            let w = self.level_weight(j);
            for m in -(self.m_max as i64)..=(self.m_max as i64) {
                let shift = m as f64 / 16.0;
                let a = self.psi_hat.eval(shift + scale * y);
                let b = self.phi_hat.eval(shift + scale * z);
                acc += self.coeffs.get(&[m]) * (w * a * b);
            }
        }
        acc
    }

    /// `sum_{j<=0} 2^{j(s-r)} sum_m |c_{s,m}| ||Psi_{(-r)}^||_inf ||Phi^||_inf`.
    pub fn sup_bound(&self) -> f64 {
        let q = 2f64.powf(-(self.s - self.r));
        self.series_factor() / (1.0 - q)
    }

    /// Bound on the levels `j < -j_depth` dropped by the truncation.
    pub fn tail_bound(&self) -> f64 {
        let q = 2f64.powf(-(self.s - self.r));
        q.powi(self.j_depth as i32) / (1.0 - q) * self.series_factor()
    }

    fn series_factor(&self) -> f64 {
        self.coeffs.truncated(self.m_max).abs_sum() * self.psi_hat.sup() * self.phi_hat.sup()
    }

    /// `Pi_1(f, g)(x) = int int K_1(x - y, x - z) f(y) g(z) dy dz` by the
    /// rectangle rule on the grid, with `f` and `g` taken as zero outside the box.
    pub fn apply(&self, f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
        let grid = *f.grid();
        if grid != *g.grid() {
            return Err(Error::GridMismatch);
        }
        if grid.n != 1 {
            return Err(Error::InvalidParameter("kernel application is implemented for n = 1 only".into()));
        }
        self.ensure_reach(grid.length)?;
        let size = grid.size;
        let h = grid.spacing();
        let pairs: Vec<(i32, i64)> = self
            .levels()
            .flat_map(|j| (-(self.m_max as i64)..=(self.m_max as i64)).map(move |m| (j, m)))
            .collect();
        let (fs, gs) = (f.samples(), g.samples());
        let partials: Vec<Vec<Complex64>> = pairs
            .par_iter()
            .map(|&(j, m)| {
                let scale = 2f64.powi(j);
                let shift = m as f64 / 16.0;
                // offsets d = a - b run over -(N-1)..=(N-1)
                let kp: Vec<f64> =
                    (0..2 * size - 1).map(|i| self.psi_hat.eval(shift + scale * (i as f64 - (size - 1) as f64) * h)).collect();
                let kf: Vec<f64> =
                    (0..2 * size - 1).map(|i| self.phi_hat.eval(shift + scale * (i as f64 - (size - 1) as f64) * h)).collect();
                let c = self.coeffs.get(&[m]) * (self.level_weight(j) * h * h);
                (0..size)
                    .map(|a| {
                        let base = a + size - 1;
                        let mut u = 0.0;
                        let mut v = 0.0;
                        for b in 0..size {
                            u += kp[base - b] * fs[b];
                            v += kf[base - b] * gs[b];
                        }
                        c * (u * v)
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        for p in &partials {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        SpectralField::from_samples(grid, out.into_iter().map(|z| z.re).collect())
    }
}

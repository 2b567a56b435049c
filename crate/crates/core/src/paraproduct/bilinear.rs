//! Direct action of bilinear symbols on lattice fields and the operator
//! identities built on top of it.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coeffs::FourierCoefficients;
use super::symbols::{self, SymbolSpec};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// `sum_{xi + eta = zeta} sigma(xi, eta) f^(xi) g^(eta)` for every lattice
/// output `zeta`; outputs beyond the lattice are dropped.
pub fn apply_bilinear_symbol(sigma: &SymbolSpec, f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let grid = *f.grid();
    if grid != *g.grid() {
        return Err(Error::GridMismatch);
    }
    let (fs, gs) = (f.spectrum(), g.spectrum());
    let n = grid.n;
    let support = |spec: &[Complex64]| -> Vec<(usize, [i64; 2], [f64; 2])> {
        spec.iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(k, _)| (k, grid.multi_index(k), grid.wavevector(k)))
            .collect()
    };
    let f_support = support(fs);
    let g_nonzero = gs.iter().any(|c| c.re != 0.0 || c.im != 0.0);
    let out: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|k_out| {
            if !g_nonzero {
                return Complex64::new(0.0, 0.0);
            }
            let zeta = grid.multi_index(k_out);
            let mut acc = Complex64::new(0.0, 0.0);
            for &(kf, mf, xi) in &f_support {
                let Some(kg) = grid.flat_of([zeta[0] - mf[0], zeta[1] - mf[1]]) else { continue };
                let gc = gs[kg];
                if gc.re == 0.0 && gc.im == 0.0 {
                    continue;
                }
                let eta = grid.wavevector(kg);
                acc += sigma.eval(&xi[..n], &eta[..n]) * fs[kf] * gc;
            }
            acc
        })
        .collect();
    SpectralField::from_spectrum(grid, out)
}

/// Rejects pairs whose product would lose frequencies past Nyquist.
pub fn check_half_band(f: &SpectralField, g: &SpectralField) -> Result<()> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    for (name, h) in [("f", f), ("g", g)] {
        if !h.is_half_band() {
            return Err(Error::Aliasing(format!(
                "{name} has spectral content at |m_i| >= N/4 (relative {:.2e}); band-limit the inputs first",
                h.out_of_band(h.grid().half_band_index())
            )));
        }
    }
    Ok(())
}

/// Relative sup distance `||a - b|| / ||b||` (absolute when `b = 0`).
pub fn rel_sup(a: &SpectralField, b: &SpectralField) -> f64 {
    let d = a.sub(b).expect("same grid").max_abs();
    let scale = b.max_abs();
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

/// Direct `D^s(fg)` through the pointwise product.
pub fn ds_of_product(f: &SpectralField, g: &SpectralField, s: f64) -> Result<SpectralField> {
    f.mul(g)?.fractional_derivative(s)
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub t1: SpectralField,
    pub t2: SpectralField,
    pub t3: SpectralField,
    pub direct: SpectralField,
    pub residual: SpectralField,
    /// Third term recomputed with the complement symbol.
    pub t3_complement: SpectralField,
    pub complement_residual: SpectralField,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub s: f64,
    pub m_max: usize,
    pub relative_residual: f64,
    pub complement_relative_residual: f64,
    pub t3_vs_complement: f64,
}

impl Decomposition {
    pub fn relative_residual(&self) -> f64 {
        self.residual.max_abs() / self.direct.max_abs().max(f64::MIN_POSITIVE)
    }

    pub fn summary(&self, s: f64, m_max: usize) -> DecompositionSummary {
        let scale = self.direct.max_abs().max(f64::MIN_POSITIVE);
        DecompositionSummary {
            s,
            m_max,
            relative_residual: self.relative_residual(),
            complement_relative_residual: self.complement_residual.max_abs() / scale,
            t3_vs_complement: self.t3.sub(&self.t3_complement).expect("same grid").max_abs() / scale,
        }
    }
}

/// `D^s(fg) = T_1(D^s f, g) + T_2(f, D^s g) + T_3(f, D^s g) + residual`.
pub fn decompose_ds(f: &SpectralField, g: &SpectralField, coeffs: Arc<FourierCoefficients>) -> Result<Decomposition> {
    check_half_band(f, g)?;
    let s = coeffs.s;
    let (dsf, dsg) = (f.fractional_derivative(s)?, g.fractional_derivative(s)?);
    let t1 = apply_bilinear_symbol(&symbols::sigma1(s), &dsf, g)?;
    let t2 = apply_bilinear_symbol(&symbols::sigma2(s), f, &dsg)?;
    let t3 = apply_bilinear_symbol(&symbols::sigma3_series(coeffs), f, &dsg)?;
    let t3_complement = apply_bilinear_symbol(&symbols::sigma3_complement(s), f, &dsg)?;
    let direct = ds_of_product(f, g, s)?;
    let head = t1.add(&t2)?;
    let residual = direct.sub(&head.add(&t3)?)?;
    let complement_residual = direct.sub(&head.add(&t3_complement)?)?;
    Ok(Decomposition { t1, t2, t3, direct, residual, t3_complement, complement_residual })
}

/// `(Pi(f, g), Pi~(f, g))`.
pub fn pi_split(f: &SpectralField, g: &SpectralField, s: f64) -> Result<(SpectralField, SpectralField)> {
    check_half_band(f, g)?;
    Ok((
        apply_bilinear_symbol(&symbols::pi_symbol(s), f, g)?,
        apply_bilinear_symbol(&symbols::pi_tilde_symbol(s), f, g)?,
    ))
}

/// `(Pi_1(D^r f, g), Pi_2(D^t f, g))` from the supplied derivatives.
pub fn pi1_pi2(
    d_r_f: &SpectralField,
    d_t_f: &SpectralField,
    g: &SpectralField,
    r: f64,
    s: f64,
    t: f64,
) -> Result<(SpectralField, SpectralField)> {
    if !(0.0 <= r && r < s && s < t) {
        return Err(Error::ParameterWindow(format!("requires 0 <= r < s < t, got r={r}, s={s}, t={t}")));
    }
    check_half_band(d_r_f, g)?;
    check_half_band(d_t_f, g)?;
    Ok((
        apply_bilinear_symbol(&symbols::pi1_symbol(s, r), d_r_f, g)?,
        apply_bilinear_symbol(&symbols::pi2_symbol(s, t), d_t_f, g)?,
    ))
}

/// Relative sup residual of `D^eps T_{1,s}(D^s f, g) = T_{1,s+eps}(D^{s+eps} f, g)`.
pub fn t1_shift_identity_check(f: &SpectralField, g: &SpectralField, s: f64, eps: f64) -> Result<f64> {
    if !(s > 0.0 && eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("requires s > 0 and eps >= 0, got s={s}, eps={eps}")));
    }
    check_half_band(f, g)?;
    let lhs = apply_bilinear_symbol(&symbols::sigma1(s), &f.fractional_derivative(s)?, g)?.fractional_derivative(eps)?;
    let rhs = apply_bilinear_symbol(&symbols::sigma1(s + eps), &f.fractional_derivative(s + eps)?, g)?;
    Ok(rel_sup(&lhs, &rhs))
}

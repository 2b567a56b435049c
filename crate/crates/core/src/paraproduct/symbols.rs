//! Bilinear frequency symbols `sigma(xi, eta)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coeffs::FourierCoefficients;
use crate::spectral::bump::{self, dyadic, live_scales, norm, phi, psi, psi_weighted};

pub type SymbolFn = dyn Fn(&[f64], &[f64]) -> Complex64 + Send + Sync;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m_max: Option<usize>,
}

/// A pointwise-evaluable bilinear symbol with a label and its parameters.
#[derive(Clone)]
pub struct SymbolSpec {
    label: String,
    params: SymbolParams,
    eval: Arc<SymbolFn>,
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolSpec").field("label", &self.label).field("params", &self.params).finish()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sum_vec(a: &[f64], b: &[f64]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (i, o) in out.iter_mut().enumerate().take(a.len()) {
        *o = a[i] + b[i];
    }
    out
}

impl SymbolSpec {
    pub fn new(
        label: impl Into<String>,
        params: SymbolParams,
        eval: impl Fn(&[f64], &[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), params, eval: Arc::new(eval) }
    }

    pub fn eval(&self, xi: &[f64], eta: &[f64]) -> Complex64 {
        (self.eval)(xi, eta)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &SymbolParams {
        &self.params
    }

    /// `(xi, eta) -> sigma(eta, xi)`.
    pub fn swapped(&self, label: impl Into<String>) -> Self {
        let inner = self.eval.clone();
        Self::new(label, self.params.clone(), move |xi, eta| inner(eta, xi))
    }

    /// Pointwise difference of two symbols.
    pub fn minus(&self, other: &Self, label: impl Into<String>) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self::new(label, self.params.clone(), move |xi, eta| a(xi, eta) - b(xi, eta))
    }
}

/// `sigma = 1`: the pointwise product.
pub fn one() -> SymbolSpec {
    SymbolSpec::new("one", SymbolParams::default(), |_, _| real(1.0))
}

/// `|xi + eta|^s`: the symbol of `D^s(fg)`.
pub fn ds_product(s: f64) -> SymbolSpec {
    SymbolSpec::new("ds_product", SymbolParams { s: Some(s), ..Default::default() }, move |xi, eta| {
        real(bump::power(norm(&sum_vec(xi, eta)), s))
    })
}

/// `sum_j Psi(2^-j xi) Phi(2^{3-j} eta)`; at most two live `j`.
fn low_high_cutoff(rx: f64, ry: f64) -> f64 {
    live_scales(rx).map(|j| psi(rx / dyadic(j)) * phi(ry * dyadic(3 - j))).sum()
}

/// `sigma_{1,s}(xi, eta) = sum_j Psi(2^-j xi) Phi(2^{-j+3} eta) |xi+eta|^s / |xi|^s`.
pub fn sigma1(s: f64) -> SymbolSpec {
    SymbolSpec::new("sigma1", SymbolParams { s: Some(s), ..Default::default() }, move |xi, eta| {
        let rx = norm(xi);
        if rx == 0.0 {
            return real(0.0);
        }
        let cut = low_high_cutoff(rx, norm(eta));
        if cut == 0.0 {
            return real(0.0);
        }
        real(cut * (norm(&sum_vec(xi, eta)) / rx).powf(s))
    })
}

/// `sigma_{2,s}(xi, eta) = sigma_{1,s}(eta, xi)`.
pub fn sigma2(s: f64) -> SymbolSpec {
    sigma1(s).swapped("sigma2")
}

/// Diagonal product `sum_k Psi(2^-k xi) Psi(2^-k eta)`.
fn diagonal(rx: f64, ry: f64) -> f64 {
    live_scales(rx).map(|k| psi(rx / dyadic(k)) * psi(ry / dyadic(k))).sum()
}

/// `sigma_{3,s}` through the truncated Fourier series of `Phi_{(s)}`:
/// `sum_k sum_m c_{s,m} e^{2 pi i 2^-k (xi+eta).m / 16} Psi(2^-k xi) Psi_{(-s)}(2^-k eta)`.
pub fn sigma3_series(coeffs: Arc<FourierCoefficients>) -> SymbolSpec {
    let s = coeffs.s;
    let params = SymbolParams { s: Some(s), m_max: Some(coeffs.m_max), ..Default::default() };
    SymbolSpec::new("sigma3_series", params, move |xi, eta| {
        let (rx, ry) = (norm(xi), norm(eta));
        if rx == 0.0 || ry == 0.0 {
            return real(0.0);
        }
        let zeta = sum_vec(xi, eta);
        let mut acc = real(0.0);
        for k in live_scales(rx) {
            let scale = dyadic(k);
            let w = psi(rx / scale) * psi_weighted(ry / scale, s);
            if w != 0.0 {
                acc += coeffs.eval(&[zeta[0] / scale, zeta[1] / scale]) * w;
            }
        }
        acc
    })
}

/// Closed form of the series: `|xi+eta|^s / |eta|^s sum_k Psi(2^-k xi) Psi(2^-k eta)`.
pub fn sigma3_closed(s: f64) -> SymbolSpec {
    SymbolSpec::new("sigma3_closed", SymbolParams { s: Some(s), ..Default::default() }, move |xi, eta| {
        let (rx, ry) = (norm(xi), norm(eta));
        if rx == 0.0 || ry == 0.0 {
            return real(0.0);
        }
        let d = diagonal(rx, ry);
        if d == 0.0 {
            return real(0.0);
        }
        real(d * (norm(&sum_vec(xi, eta)) / ry).powf(s))
    })
}

/// What the third term must be for the three symbols to rebuild `|xi+eta|^s`:
/// `(|xi+eta|^s - sigma_1 |xi|^s - sigma_2 |eta|^s) / |eta|^s`.
pub fn sigma3_complement(s: f64) -> SymbolSpec {
    let (s1, s2) = (sigma1(s), sigma2(s));
    SymbolSpec::new("sigma3_complement", SymbolParams { s: Some(s), ..Default::default() }, move |xi, eta| {
        let ry = norm(eta);
        if ry == 0.0 {
            return real(0.0);
        }
        let total = bump::power(norm(&sum_vec(xi, eta)), s);
        let rest = total - s1.eval(xi, eta).re * bump::power(norm(xi), s) - s2.eval(xi, eta).re * ry.powf(s);
        real(rest / ry.powf(s))
    })
}

/// `sum_j |xi+eta|^s Psi(2^-j xi) Phi(2^-j eta)`.
pub fn pi_symbol(s: f64) -> SymbolSpec {
    SymbolSpec::new("pi", SymbolParams { s: Some(s), ..Default::default() }, move |xi, eta| {
        let (rx, ry) = (norm(xi), norm(eta));
        let cut: f64 = live_scales(rx).map(|j| psi(rx / dyadic(j)) * phi(ry / dyadic(j))).sum();
        real(cut * bump::power(norm(&sum_vec(xi, eta)), s))
    })
}

/// `sum_k |xi+eta|^s Psi(2^-k eta) Phi(2^{1-k} xi)`; the `xi = 0` mode of the
/// first factor lands here.
pub fn pi_tilde_symbol(s: f64) -> SymbolSpec {
    SymbolSpec::new("pi_tilde", SymbolParams { s: Some(s), ..Default::default() }, move |xi, eta| {
        let (rx, ry) = (norm(xi), norm(eta));
        let cut: f64 = live_scales(ry).map(|k| psi(ry / dyadic(k)) * phi(rx / dyadic(k - 1))).sum();
        real(cut * bump::power(norm(&sum_vec(xi, eta)), s))
    })
}

/// Shared body of the two reweighted halves of `Pi`.
fn pi_part(s: f64, weight: f64, low: bool) -> impl Fn(&[f64], &[f64]) -> Complex64 {
    move |xi, eta| {
        let (rx, ry) = (norm(xi), norm(eta));
        if rx == 0.0 {
            return real(0.0);
        }
        let cut: f64 = live_scales(rx)
            .filter(|&j| (j <= 0) == low)
            .map(|j| psi(rx / dyadic(j)) * phi(ry / dyadic(j)))
            .sum();
        if cut == 0.0 {
            return real(0.0);
        }
        real(cut * bump::power(norm(&sum_vec(xi, eta)), s) / rx.powf(weight))
    }
}

/// `Pi_1`: `j <= 0` with weight `|xi+eta|^s / |xi|^r`.
pub fn pi1_symbol(s: f64, r: f64) -> SymbolSpec {
    SymbolSpec::new("pi1", SymbolParams { s: Some(s), r: Some(r), ..Default::default() }, pi_part(s, r, true))
}

/// `Pi_2`: `j > 0` with weight `|xi+eta|^s / |xi|^t`.
pub fn pi2_symbol(s: f64, t: f64) -> SymbolSpec {
    SymbolSpec::new("pi2", SymbolParams { s: Some(s), t: Some(t), ..Default::default() }, pi_part(s, t, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn point() -> impl Strategy<Value = (f64, f64)> {
        (-40.0f64..40.0, -40.0f64..40.0)
    }

    #[test]
    fn sigma1_examples() {
        for s in [0.5, 1.0, 3.5] {
            let s1 = sigma1(s);
            for xi in [0.01, 0.3, 1.0, 7.7, -123.0] {
                assert!((s1.eval(&[xi], &[0.0]).re - 1.0).abs() < 1e-14);
            }
            assert_eq!(s1.eval(&[1.0], &[4.0]).re, 0.0);
            assert_eq!(s1.eval(&[0.0], &[0.1]).re, 0.0);
        }
    }

    #[test]
    fn sigma3_support() {
        let c = sigma3_closed(2.0);
        assert_eq!(c.eval(&[5.0], &[1.0]).re, 0.0);
        assert_eq!(c.eval(&[1.0], &[4.5]).re, 0.0);
        assert!(c.eval(&[1.0], &[1.0]).re > 0.0);
    }

    #[test]
    fn complement_vanishes_off_band() {
        // far-apart frequencies are covered by sigma_1 or sigma_2 alone
        let c = sigma3_complement(1.5);
        assert!(c.eval(&[10.0], &[0.3]).norm() < 1e-12);
        assert!(c.eval(&[0.3], &[10.0]).norm() < 1e-12);
    }

    #[test]
    fn two_dimensional_symbols_are_radial_in_each_slot() {
        let s1 = sigma1(1.0);
        let a = s1.eval(&[3.0, 4.0], &[0.1, 0.0]).re;
        let b = s1.eval(&[5.0, 0.0], &[0.1, 0.0]).re;
        assert!(a > 0.0 && b > 0.0);
        assert!((s1.eval(&[3.0, 4.0], &[0.0, 0.0]).re - 1.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn sigma2_is_swap((x, y) in point()) {
            let (a, b) = (sigma2(1.3), sigma1(1.3));
            prop_assert_eq!(a.eval(&[x], &[y]), b.eval(&[y], &[x]));
        }

        #[test]
        fn pi_split_partitions_the_product((x, y) in point(), s in 0.1f64..4.0) {
            let total = pi_symbol(s).eval(&[x], &[y]) + pi_tilde_symbol(s).eval(&[x], &[y]);
            let exact = bump::power((x + y).abs(), s);
            prop_assert!((total.re - exact).abs() <= 1e-12 * exact.max(1.0));
        }

        #[test]
        fn pi_minus_swapped_tilde_is_diagonal((x, y) in point(), s in 0.1f64..4.0) {
            let lhs = pi_symbol(s).eval(&[x], &[y]) - pi_tilde_symbol(s).eval(&[y], &[x]);
            let diag = diagonal(x.abs(), y.abs()) * bump::power((x + y).abs(), s);
            let scale = bump::power((x + y).abs(), s).max(1.0);
            prop_assert!((lhs.re - diag).abs() <= 1e-12 * scale);
        }

        #[test]
        fn pi_reweighting((x, y) in point(), r in 0.0f64..1.0, ds in 0.1f64..2.0, dt in 0.1f64..2.0) {
            let (s, t) = (r + ds, r + ds + dt);
            let rx = x.abs();
            let lhs = pi1_symbol(s, r).eval(&[x], &[y]).re * bump::power(rx, r)
                + pi2_symbol(s, t).eval(&[x], &[y]).re * bump::power(rx, t);
            let rhs = pi_symbol(s).eval(&[x], &[y]).re;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }

        #[test]
        fn shift_identity_of_sigma1((x, y) in point(), s in 0.1f64..4.0, e in 0.0f64..1.0) {
            let lhs = bump::power((x + y).abs(), e) * sigma1(s).eval(&[x], &[y]).re * bump::power(x.abs(), s);
            let rhs = sigma1(s + e).eval(&[x], &[y]).re * bump::power(x.abs(), s + e);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }
}

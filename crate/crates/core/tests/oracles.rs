//! Library results against independent reference computations, with the
//! reference values frozen so that a regression in either side shows up.

mod common;

use std::f64::consts::PI;

use kpforge_core::lab::lambda_minimize;
use kpforge_core::paraproduct::FourierCoefficients;
use kpforge_core::spectral::transform::psi_hat_l1;
use kpforge_core::{GridSpec, SpectralField};

/// `(s, m, c_{s,m})` from `common::coeff_1d`.
const COEFFS_1D: [(f64, i64, f64); 20] = [
    (0.5, 0, 1.230248616272106e0),
    (0.5, 1, 1.209953573529873e-1),
    (0.5, 5, -6.506951268961150e-2),
    (0.5, 17, -3.897946944366945e-3),
    (0.5, 64, -6.217361262387597e-4),
    (1.0, 0, 2.276918710171081e0),
    (1.0, 1, -9.592630146841669e-2),
    (1.0, 5, -1.069206709041572e-1),
    (1.0, 17, -1.298248855736955e-3),
    (1.0, 64, -1.980733199911681e-4),
    (2.0, 0, 9.323024522052993e0),
    (2.0, 1, -2.183727345768309e0),
    (2.0, 5, -2.408341455814083e-1),
    (2.0, 17, 8.529090347879464e-3),
    (2.0, 64, -2.164598274433278e-6),
    (3.5, 0, 9.655693296643435e1),
    (3.5, 1, -3.943645929786152e1),
    (3.5, 5, 1.766329168699814e0),
    (3.5, 17, 1.216041216609529e-1),
    (3.5, 64, -5.744477498908010e-5),
];

/// `(m, c_{1,m})` in two dimensions from `common::coeff_2d`.
const COEFFS_2D: [([i64; 2], f64); 4] = [
    ([0, 0], 1.830571584232448e0),
    ([1, 0], 5.818243254196348e-1),
    ([3, 4], -4.249370977757637e-2),
    ([10, 2], 2.957800267891750e-3),
];

const PSI_HAT_L1_1D: f64 = 1.563301650808;
const PSI_HAT_L1_2D: f64 = 3.556616117838;

#[test]
fn frozen_coefficients_match_the_quadrature_oracle() {
    for &(s, m, c) in COEFFS_1D.iter().step_by(3) {
        assert!((common::coeff_1d(s, m) - c).abs() < 1e-12 * (1.0 + c.abs()), "s={s} m={m}");
    }
    let (m, c) = COEFFS_2D[2];
    assert!((common::coeff_2d(1.0, m) - c).abs() < 1e-12);
}

#[test]
fn one_dimensional_coefficients() {
    for s in [0.5, 1.0, 2.0, 3.5] {
        let lib = FourierCoefficients::compute(1, s, 64, 1024).unwrap();
        for &(_, m, c) in COEFFS_1D.iter().filter(|e| e.0 == s) {
            let z = lib.get(&[m]);
            assert!((z.re - c).abs() < 1e-9 * (1.0 + c.abs()), "s={s} m={m}: {} vs {c}", z.re);
            assert!(z.im.abs() < 1e-12 * (1.0 + c.abs()));
        }
    }
}

#[test]
fn two_dimensional_coefficients() {
    let lib = FourierCoefficients::compute(2, 1.0, 16, 512).unwrap();
    for (m, c) in COEFFS_2D {
        let z = lib.get(&m);
        assert!((z.re - c).abs() < 1e-8, "m={m:?}: {} vs {c}", z.re);
        assert!(z.im.abs() < 1e-12);
    }
}

#[test]
fn besov_embedding_constant() {
    assert!((common::psi_hat_l1_1d() - PSI_HAT_L1_1D).abs() < 1e-10);
    assert!((psi_hat_l1(1) - PSI_HAT_L1_1D).abs() < 1e-6, "{}", psi_hat_l1(1));
    assert!((common::psi_hat_l1_2d() - PSI_HAT_L1_2D).abs() < 1e-7 * PSI_HAT_L1_2D);
    assert!((psi_hat_l1(2) - PSI_HAT_L1_2D).abs() < 1e-5 * PSI_HAT_L1_2D, "{}", psi_hat_l1(2));
}

#[test]
fn fractional_derivative_of_a_periodized_gaussian() {
    let grid = GridSpec::new(1, 256, 16.0).unwrap();
    let w = 1.3;
    let f = SpectralField::from_fn(grid, |x| (-5..=5).map(|p| (-(x[0] + 16.0 * p as f64).powi(2) / (2.0 * w * w)).exp()).sum());
    for s in [0.0, 0.5, 1.0, 2.0, 2.7] {
        let d = f.fractional_derivative(s).unwrap();
        let scale = d.max_abs();
        for (k, v) in d.samples().iter().enumerate() {
            let x = grid.point(k)[0];
            let expect = common::periodized_gaussian_derivative(x, w, 16.0, s);
            assert!((v - expect).abs() < 1e-11 * scale, "s={s} x={x}: {v} vs {expect}");
        }
    }
}

#[test]
fn spectrum_matches_direct_dft() {
    let grid = GridSpec::new(1, 64, 3.0).unwrap();
    let f = SpectralField::from_fn(grid, |x| (x[0] * 1.7).sin() + (x[0] * x[0]).cos() * 0.3 + x[0]);
    let direct = common::direct_dft(f.samples());
    for (z, (re, im)) in f.spectrum().iter().zip(direct) {
        assert!((z.re - re).abs() < 1e-13 && (z.im - im).abs() < 1e-13);
    }
}

#[test]
fn sine_square_derivative_identity() {
    // D^s sin^2(2 pi x) = -(2^s / 2) cos(4 pi x)
    let grid = GridSpec::new(1, 128, 1.0).unwrap();
    let f = SpectralField::from_fn(grid, |x| (2.0 * PI * x[0]).sin());
    let sq = f.mul(&f).unwrap();
    for s in [0.5, 1.0, 2.0, 3.0, 3.5] {
        let d = sq.fractional_derivative(s).unwrap();
        // roundoff in the highest retained modes is amplified by |m|^s
        let tol = 10.0 * f64::EPSILON * 64f64.powf(s);
        for (k, v) in d.samples().iter().enumerate() {
            let x = grid.point(k)[0];
            let expect = -(2f64.powf(s) / 2.0) * (4.0 * PI * x).cos();
            assert!((v - expect).abs() < tol, "s={s}: {v} vs {expect}");
        }
    }
}

#[test]
fn lambda_minimum_matches_golden_section() {
    for (a, b, r, s, t) in [(1.0, 1.0, 0.0, 1.0, 2.0), (4.0, 1.0, 0.0, 1.0, 2.0), (0.3, 7.0, 0.5, 1.2, 3.0), (12.0, 0.01, 1.0, 2.5, 2.7)] {
        let (lambda, value) = lambda_minimize(a, b, r, s, t).unwrap();
        let g = |u: f64| {
            let l: f64 = u.exp();
            l.powf(r - s) * a + l.powf(t - s) * b
        };
        let (u, v) = common::golden_min(g, -30.0, 30.0);
        assert!((lambda.ln() - u).abs() < 1e-6, "{lambda} vs {}", u.exp());
        assert!((value - v).abs() < 1e-12 * v);
    }
}

//! Reference computations that share no code with the library: their own
//! bump profile, Gauss-Legendre quadrature, direct DFT sums and closed-form
//! Fourier series.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn bump_phi(rho: f64) -> f64 {
    let chi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    if rho <= 1.0 {
        1.0
    } else if rho >= 2.0 {
        0.0
    } else {
        chi(2.0 - rho) / (chi(2.0 - rho) + chi(rho - 1.0))
    }
}

pub fn bump_psi(rho: f64) -> f64 {
    bump_phi(rho) - bump_phi(2.0 * rho)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order as f64;
    (0..order)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite Gauss-Legendre rule with `panels` equal panels of order 10.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(10);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in &rule {
            acc += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * acc
}

/// `c_{s,m}` for `n = 1` by quadrature of
/// `(1/8) int_0^8 t^s Phi(t/4) cos(2 pi m t / 16) dt`, substituting
/// `t = 4 u^4` on `[0, 4]` to smooth the endpoint behaviour of `t^s`.
pub fn coeff_1d(s: f64, m: i64) -> f64 {
    let k = 2.0 * PI * m as f64 / 16.0;
    let inner = integrate(|u| 4f64.powf(s + 1.0) * 4.0 * u.powf(4.0 * s + 3.0) * (k * 4.0 * u.powi(4)).cos(), 0.0, 1.0, 400);
    let outer = integrate(|t| t.powf(s) * bump_phi(t / 4.0) * (k * t).cos(), 4.0, 8.0, 400);
    (inner + outer) / 8.0
}

/// `c_{s,m}` for `n = 2` through the Hankel form
/// `(2 pi / 256) int_0^8 rho^{s+1} Phi(rho/4) J0(2 pi |m| rho / 16) d rho`.
pub fn coeff_2d(s: f64, m: [i64; 2]) -> f64 {
    let k = 2.0 * PI * (m[0] as f64).hypot(m[1] as f64) / 16.0;
    let f = |rho: f64| rho.powf(s + 1.0) * bump_phi(rho / 4.0) * libm::j0(k * rho);
    2.0 * PI / 256.0 * (integrate(f, 0.0, 4.0, 400) + integrate(f, 4.0, 8.0, 400))
}

/// `||Psi^||_{L^1(R)}` with `Psi^(x) = 2 int_{1/2}^2 Psi(xi) cos(2 pi x xi) d xi`.
pub fn psi_hat_l1_1d() -> f64 {
    let hat = |x: f64| 2.0 * integrate(|xi| bump_psi(xi) * (2.0 * PI * x * xi).cos(), 0.5, 2.0, 40);
    // trapezoid in x resolves the kinks of |Psi^|; the transform is below
    // 1e-12 beyond |x| = 30
    let (h, top) = (1e-3, 30.0);
    let steps = (top / h) as usize;
    let mut acc = 0.5 * hat(0.0).abs();
    for i in 1..=steps {
        acc += hat(i as f64 * h).abs();
    }
    2.0 * h * acc
}

/// Sampled `D^s` of the periodized Gaussian `sum_p exp(-(x + pL)^2 / (2 w^2))`
/// from its Fourier series `(w sqrt(2 pi) / L) exp(-2 pi^2 w^2 m^2 / L^2)`.
pub fn periodized_gaussian_derivative(x: f64, w: f64, l: f64, s: f64) -> f64 {
    let amp = w * (2.0 * PI).sqrt() / l;
    let mut acc = if s == 0.0 { amp } else { 0.0 };
    for m in 1..=4096 {
        let xi = m as f64 / l;
        let c = amp * (-2.0 * PI * PI * w * w * xi * xi).exp();
        if c < 1e-300 {
            break;
        }
        acc += 2.0 * c * xi.powf(s) * (2.0 * PI * xi * x).cos();
    }
    acc
}

/// Direct `O(N^2)` DFT with the forward `1/N` normalization.
pub fn direct_dft(samples: &[f64]) -> Vec<(f64, f64)> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                let a = -2.0 * PI * (k * j % n) as f64 / n as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            (re / n as f64, im / n as f64)
        })
        .collect()
}

/// Golden-section minimum of a unimodal function on `[a, b]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `||Psi^||_{L^1(R^2)}` through the Hankel transform
/// `Psi^(R) = 2 pi int Psi(rho) J0(2 pi R rho) rho d rho`.
pub fn psi_hat_l1_2d() -> f64 {
    psi_hat_l1_2d_with(1e-3, 60.0, 80)
}

pub fn psi_hat_l1_2d_with(h: f64, top: f64, panels: usize) -> f64 {
    let hat = |r: f64| 2.0 * PI * integrate(|rho| bump_psi(rho) * libm::j0(2.0 * PI * r * rho) * rho, 0.5, 2.0, panels);
    let steps = (top / h) as usize;
    let mut acc = 0.0;
    for i in 1..=steps {
        let r = i as f64 * h;
        let w = if i == steps { 0.5 } else { 1.0 };
        acc += w * hat(r).abs() * r;
    }
    2.0 * PI * h * acc
}

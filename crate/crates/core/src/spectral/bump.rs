//! The radial bump pair `Phi`/`Psi` and its weighted variants.
//!
//! `Phi` is 1 on the unit ball and 0 outside the ball of radius 2, with the
//! transition `chi(2-rho) / (chi(2-rho) + chi(rho-1))`, `chi(x) = exp(-1/x)`.
//! Every function here is radial and takes the radius `rho = |xi|`.

/// `exp(-1/x)` for `x > 0`, else 0.
fn chi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Radial profile of `Phi`.
pub fn phi(rho: f64) -> f64 {
    if rho <= 1.0 {
        1.0
    } else if rho >= 2.0 {
        0.0
    } else {
        let a = chi(2.0 - rho);
        a / (a + chi(rho - 1.0))
    }
}

/// `Psi(xi) = Phi(xi) - Phi(2 xi)`, supported in `1/2 <= |xi| <= 2`.
pub fn psi(rho: f64) -> f64 {
    phi(rho) - phi(2.0 * rho)
}

/// `Phi~(xi) = Phi(xi / 4)`.
pub fn phi_tilde(rho: f64) -> f64 {
    phi(rho / 4.0)
}

/// `Psi_{(-r)}(xi) = |xi|^{-r} Psi(xi)`, taken as 0 where `Psi` vanishes.
pub fn psi_weighted(rho: f64, r: f64) -> f64 {
    let p = psi(rho);
    if p == 0.0 {
        0.0
    } else {
        p * rho.powf(-r)
    }
}

/// `Phi_{(s)}(t) = |t|^s Phi~(t)`.
pub fn phi_weighted(rho: f64, s: f64) -> f64 {
    let p = phi_tilde(rho);
    if p == 0.0 {
        0.0
    } else {
        power(rho, s) * p
    }
}

/// `|xi|^s` with `|0|^s = 0` for `s > 0` and `|0|^0 = 1`.
pub fn power(rho: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if rho == 0.0 {
        0.0
    } else {
        rho.powf(s)
    }
}

/// Exact dyadic scale `2^j`.
pub fn dyadic(j: i32) -> f64 {
    2f64.powi(j)
}

/// Littlewood-Paley indices `j` with `Psi(2^{-j} rho) != 0`; at most two are
/// live, a third candidate is returned to stay clear of rounding in `log2`.
pub fn live_scales(rho: f64) -> std::ops::RangeInclusive<i32> {
    if rho <= 0.0 {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    let c = rho.log2().floor() as i32;
    (c - 1)..=(c + 1)
}

/// Euclidean norm of a wave vector.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Facade over the bump pair with dimension-free (vector) arguments.
#[derive(Debug, Clone, Copy, Default)]
pub struct BumpFamily;

impl BumpFamily {
    pub fn phi(&self, xi: &[f64]) -> f64 {
        phi(norm(xi))
    }

    pub fn psi(&self, xi: &[f64]) -> f64 {
        psi(norm(xi))
    }

    pub fn phi_tilde(&self, xi: &[f64]) -> f64 {
        phi_tilde(norm(xi))
    }

    pub fn psi_weighted(&self, xi: &[f64], r: f64) -> f64 {
        psi_weighted(norm(xi), r)
    }

    pub fn phi_weighted(&self, xi: &[f64], s: f64) -> f64 {
        phi_weighted(norm(xi), s)
    }
}

//! Empirical Coifman-Meyer constants
//! `sup |d^alpha_xi d^beta_eta sigma| (|xi| + |eta|)^{|alpha|+|beta|}` by
//! central finite differences.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::symbols::SymbolSpec;
use crate::error::{Error, Result};

const REL_STEP: f64 = 2.5e-3;
const ACCURACY: usize = 6;
const UNSTABLE: f64 = 0.1;
/// Step-halving drift below this fraction of `sup |sigma|` is rounding.
const ROUNDOFF_FLOOR: f64 = 1e-4;

/// Sample layout: `radii` log-spaced radii `|xi| + |eta|` in `[r_min, r_max)`
/// times `angles` directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub radii: usize,
    pub angles: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for SampleSpec {
    /// One dyadic octave; the paraproduct symbols are invariant under
    /// `(xi, eta) -> 2 (xi, eta)`.
    fn default() -> Self {
        Self { radii: 16, angles: 256, r_min: 1.0, r_max: 2.0 }
    }
}

impl SampleSpec {
    pub fn doubled(&self) -> Self {
        Self { radii: 2 * self.radii, angles: 2 * self.angles, ..*self }
    }

    fn radius(&self, i: usize) -> f64 {
        self.r_min * (self.r_max / self.r_min).powf(i as f64 / self.radii as f64)
    }

    /// Points `(xi, eta)` flattened as `2n` coordinates.
    fn points(&self, n: usize) -> Vec<[f64; 4]> {
        let mut out = Vec::new();
        for i in 0..self.radii {
            let rho = self.radius(i);
            match n {
                1 => {
                    for a in 0..self.angles {
                        let th = 2.0 * PI * (a as f64 + 0.5) / self.angles as f64;
                        let (c, s) = (th.cos(), th.sin());
                        let l1 = c.abs() + s.abs();
                        out.push([rho * c / l1, 0.0, rho * s / l1, 0.0]);
                    }
                }
                _ => {
                    // rotating both slots together leaves these symbols unchanged,
                    // so xi stays on the first axis
                    let split = (self.angles / 8).max(2);
                    for a in 0..split {
                        let th = 0.5 * PI * (a as f64 + 0.5) / split as f64;
                        let (u, v) = (rho * th.cos() / (th.cos() + th.sin()), rho * th.sin() / (th.cos() + th.sin()));
                        for b in 0..8 {
                            let phi = PI * (b as f64 + 0.5) / 8.0;
                            for sign in [1.0, -1.0] {
                                out.push([sign * u, 0.0, v * phi.cos(), v * phi.sin()]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmEntry {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub constant: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CmReport {
    pub entries: Vec<CmEntry>,
}

impl CmReport {
    pub fn get(&self, alpha: &[usize], beta: &[usize]) -> Option<&CmEntry> {
        self.entries.iter().find(|e| e.alpha == alpha && e.beta == beta)
    }

    /// Largest constant among entries of total order `k`.
    pub fn max_of_order(&self, k: usize) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.alpha.iter().sum::<usize>() + e.beta.iter().sum::<usize>() == k)
            .map(|e| e.constant)
            .fold(0.0, f64::max)
    }

    pub fn all_stable(&self) -> bool {
        self.entries.iter().all(|e| e.stable)
    }
}

/// Fornberg weights for the `d`-th derivative at 0 on the nodes `-p..=p`.
pub fn fd_weights(d: usize, p: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (-(p as i64)..=p as i64).map(|k| k as f64).collect();
    let n = nodes.len();
    let mut c = vec![vec![0.0; d + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(d);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[d]).collect()
}

/// Half-width of the central stencil of order-`ACCURACY` accuracy for `d`.
fn half_width(d: usize) -> usize {
    if d == 0 {
        0
    } else {
        (2 * d.div_ceil(2) - 1 + ACCURACY) / 2
    }
}

fn multi_indices(dims: usize, max_order: usize) -> Vec<Vec<usize>> {
    fn rec(dims: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == dims {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget {
            prefix.push(k);
            rec(dims, budget - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dims, max_order, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().sum::<usize>(), m.iter().rev().copied().collect::<Vec<_>>()));
    out
}

/// Memoized symbol values on the lattice `x + h * offsets`.
struct Stencil<'a> {
    sigma: &'a SymbolSpec,
    n: usize,
    centre: [f64; 4],
    h: f64,
    cache: HashMap<[i8; 4], Complex64>,
}

impl Stencil<'_> {
    fn value(&mut self, off: [i8; 4]) -> Complex64 {
        if let Some(v) = self.cache.get(&off) {
            return *v;
        }
        let mut p = self.centre;
        for (c, o) in p.iter_mut().zip(off) {
            *c += self.h * o as f64;
        }
        let v = self.sigma.eval(&p[..self.n], &p[2..2 + self.n]);
        self.cache.insert(off, v);
        v
    }

    /// Mixed derivative with per-coordinate orders `orders` (length `2n`).
    fn derivative(&mut self, orders: &[usize]) -> Complex64 {
        let weights: Vec<Vec<f64>> = orders.iter().map(|&d| fd_weights(d, half_width(d))).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; orders.len()];
        loop {
            let mut w = 1.0;
            let mut off = [0i8; 4];
            for (c, (&i, ws)) in idx.iter().zip(&weights).enumerate() {
                w *= ws[i];
                let slot = if c < self.n { c } else { 2 + c - self.n };
                off[slot] = i as i8 - (ws.len() / 2) as i8;
            }
            if w != 0.0 {
                acc += self.value(off) * w;
            }
            // odometer over the stencil tensor
            let mut c = 0;
            loop {
                if c == idx.len() {
                    let total: usize = orders.iter().sum();
                    return acc / self.h.powi(total as i32);
                }
                idx[c] += 1;
                if idx[c] < weights[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
        }
    }
}

/// Audits `sigma` in dimension `n` for all `|alpha| + |beta| <= max_order`.
pub fn cm_check(sigma: &SymbolSpec, n: usize, max_order: usize, samples: &SampleSpec) -> Result<CmReport> {
    if !(n == 1 || n == 2) {
        return Err(Error::InvalidParameter(format!("dimension {n} is not supported")));
    }
    if max_order > 2 * n + 1 {
        return Err(Error::InvalidParameter(format!("max_order {max_order} exceeds 2n+1 = {}", 2 * n + 1)));
    }
    if samples.radii == 0 || samples.angles == 0 || !(samples.r_min > 0.0 && samples.r_max > samples.r_min) {
        return Err(Error::InvalidParameter("sample spec needs radii, angles and 0 < r_min < r_max".into()));
    }
    let indices = multi_indices(2 * n, max_order);
    let points = samples.points(n);
    // per point: |sigma| at the centre, then scaled values at steps h and
    // h/2 for each multi-index
    let per_point: Vec<(f64, Vec<(f64, f64)>)> = points
        .par_iter()
        .map(|&x| {
            let radius: f64 = x[..n].iter().map(|v| v * v).sum::<f64>().sqrt()
                + x[2..2 + n].iter().map(|v| v * v).sum::<f64>().sqrt();
            let h = REL_STEP * radius;
            let mut coarse = Stencil { sigma, n, centre: x, h, cache: HashMap::new() };
            let mut fine = Stencil { sigma, n, centre: x, h: h / 2.0, cache: HashMap::new() };
            let centre = coarse.value([0; 4]).norm();
            let values = indices
                .iter()
                .map(|orders| {
                    let k = orders.iter().sum::<usize>() as i32;
                    let a = coarse.derivative(orders).norm() * radius.powi(k);
                    let b = fine.derivative(orders).norm() * radius.powi(k);
                    (a, b)
                })
                .collect();
            (centre, values)
        })
        .collect();
    let floor = ROUNDOFF_FLOOR * per_point.iter().fold(0.0f64, |m, p| m.max(p.0));
    let entries = indices
        .iter()
        .enumerate()
        .map(|(i, orders)| {
            let constant = per_point.iter().map(|p| p.1[i].0).fold(0.0, f64::max);
            let drift = per_point.iter().map(|p| (p.1[i].0 - p.1[i].1).abs()).fold(0.0, f64::max);
            let stable = constant.is_finite() && drift <= UNSTABLE * constant + floor;
            CmEntry { alpha: orders[..n].to_vec(), beta: orders[n..].to_vec(), constant, stable }
        })
        .collect();
    Ok(CmReport { entries })
}

//! Norm and quasi-norm estimators on grid fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Lp,
    Sup,
    Besov,
    Bmo,
    WeakL1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub grid: GridSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j_range: Option<(i32, i32)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub kind: NormKind,
    pub value: f64,
    pub params: NormParams,
}

impl NormValue {
    fn new(kind: NormKind, value: f64, grid: GridSpec) -> Self {
        Self { kind, value, params: NormParams { grid, p: None, j_range: None, max_depth: None } }
    }
}

/// Grid maximum of `|f|`.
pub fn sup_norm(f: &SpectralField) -> NormValue {
    NormValue::new(NormKind::Sup, f.max_abs(), *f.grid())
}

/// Riemann-sum `L^p` norm.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<NormValue> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("L^p norm requires 1 <= p < inf, got {p}")));
    }
    let g = f.grid();
    let scale = f.max_abs();
    let value = if scale == 0.0 {
        0.0
    } else {
        // factor out the maximum so large p does not overflow
        let sum: f64 = f.samples().iter().map(|x| (x.abs() / scale).powf(p)).sum();
        scale * (g.cell_volume() * sum).powf(1.0 / p)
    };
    let mut out = NormValue::new(NormKind::Lp, value, *g);
    out.params.p = Some(p);
    Ok(out)
}

/// `sup_j ||Delta_j f||_inf` over the resolvable range.
pub fn besov_norm(f: &SpectralField) -> NormValue {
    let g = *f.grid();
    let value = g.j_range().map(|j| f.lp_block(j).max_abs()).fold(0.0, f64::max);
    let mut out = NormValue::new(NormKind::Besov, value, g);
    out.params.j_range = Some((g.j_min(), g.j_max()));
    out
}

/// Dyadic mean oscillation over grid-aligned cubes of side `L / 2^k`,
/// `k = 0..=max_depth`. A lower bound for the BMO seminorm.
pub fn bmo_norm(f: &SpectralField, max_depth: usize) -> Result<NormValue> {
    let g = *f.grid();
    if max_depth >= usize::BITS as usize || (1usize << max_depth) > g.size {
        return Err(Error::InvalidParameter(format!(
            "bmo depth {max_depth} exceeds the grid resolution N = {}",
            g.size
        )));
    }
    let x = f.samples();
    let mut best = 0.0f64;
    for k in 0..=max_depth {
        let cubes = 1usize << k;
        let side = g.size / cubes;
        let cells: Vec<usize> = match g.n {
            1 => (0..cubes).map(|c| c * side).collect(),
            _ => (0..cubes * cubes).map(|c| (c / cubes) * side * g.size + (c % cubes) * side).collect(),
        };
        for origin in cells {
            let idx = cube_indices(&g, origin, side);
            let count = idx.len() as f64;
            let mean = idx.iter().map(|&i| x[i]).sum::<f64>() / count;
            let osc = idx.iter().map(|&i| (x[i] - mean).abs()).sum::<f64>() / count;
            best = best.max(osc);
        }
    }
    let mut out = NormValue::new(NormKind::Bmo, best, g);
    out.params.max_depth = Some(max_depth);
    Ok(out)
}

fn cube_indices(g: &GridSpec, origin: usize, side: usize) -> Vec<usize> {
    match g.n {
        1 => (origin..origin + side).collect(),
        _ => (0..side).flat_map(|r| (0..side).map(move |c| origin + r * g.size + c)).collect(),
    }
}

/// `max_lambda lambda |{|f| > lambda}|` with `lambda` ranging over the
/// distinct sample magnitudes.
pub fn weak_l1(f: &SpectralField) -> NormValue {
    let g = *f.grid();
    let mut mags: Vec<f64> = f.samples().iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut best = 0.0f64;
    let mut i = 0;
    while i < mags.len() {
        let lambda = mags[i];
        // `i` samples are strictly larger than this level
        best = best.max(lambda * i as f64 * g.cell_volume());
        while i < mags.len() && mags[i] == lambda {
            i += 1;
        }
    }
    NormValue::new(NormKind::WeakL1, best, g)
}

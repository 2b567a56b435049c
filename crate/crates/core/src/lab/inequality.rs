//! Two-sided evaluators for the Leibniz-type inequalities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{besov_norm, bmo_norm, lp_norm, sup_norm, weak_l1};
use crate::paraproduct::check_half_band;
use crate::spectral::{GridSpec, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "kpinfty")]
    KpEndpoint,
    #[serde(rename = "bgn-besov")]
    BgnBesov,
    #[serde(rename = "bgn-linf")]
    BgnLinf,
    #[serde(rename = "linear-gn")]
    LinearGn,
    #[serde(rename = "thm13")]
    Thm13,
    #[serde(rename = "bmo")]
    Bmo,
    #[serde(rename = "weak-l1")]
    WeakL1,
}

impl InequalityId {
    pub const ALL: [InequalityId; 7] = [
        InequalityId::KpEndpoint,
        InequalityId::BgnBesov,
        InequalityId::BgnLinf,
        InequalityId::LinearGn,
        InequalityId::Thm13,
        InequalityId::Bmo,
        InequalityId::WeakL1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityId::KpEndpoint => "kpinfty",
            InequalityId::BgnBesov => "bgn-besov",
            InequalityId::BgnLinf => "bgn-linf",
            InequalityId::LinearGn => "linear-gn",
            InequalityId::Thm13 => "thm13",
            InequalityId::Bmo => "bmo",
            InequalityId::WeakL1 => "weak-l1",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown inequality '{s}'")))
    }
}

/// Parameters shared by all evaluators; each reads the ones it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityParams {
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_depth: Option<usize>,
}

impl InequalityParams {
    pub fn new(s: f64) -> Self {
        Self { s, r: None, t: None, eps: None, p1: None, p2: None, max_depth: None }
    }

    pub fn with_rt(s: f64, r: f64, t: f64) -> Self {
        Self { r: Some(r), t: Some(t), ..Self::new(s) }
    }

    pub fn with_thm13(s: f64, eps: f64, p1: f64, p2: f64) -> Self {
        Self { eps: Some(eps), p1: Some(p1), p2: Some(p2), ..Self::new(s) }
    }

    /// Keeps only the parameters `id` reads.
    pub fn restricted(&self, id: InequalityId) -> Self {
        let mut out = Self::new(self.s);
        match id {
            InequalityId::BgnBesov | InequalityId::BgnLinf | InequalityId::LinearGn => {
                out.r = self.r;
                out.t = self.t;
            }
            InequalityId::Thm13 => {
                out.eps = self.eps;
                out.p1 = self.p1;
                out.p2 = self.p2;
            }
            InequalityId::Bmo => out.max_depth = self.max_depth,
            InequalityId::KpEndpoint | InequalityId::WeakL1 => {}
        }
        out
    }

    fn rst(&self) -> Result<(f64, f64, f64)> {
        let r = self.r.ok_or_else(|| Error::InvalidParameter("missing r".into()))?;
        let t = self.t.ok_or_else(|| Error::InvalidParameter("missing t".into()))?;
        check_rst(r, self.s, t)?;
        Ok((r, self.s, t))
    }

    /// Checks every window `id` states, for dimension `n`.
    pub fn validate(&self, id: InequalityId, n: usize) -> Result<()> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::ParameterWindow(format!("requires s > 0, got s={}", self.s)));
        }
        match id {
            InequalityId::KpEndpoint => Ok(()),
            InequalityId::BgnBesov | InequalityId::BgnLinf | InequalityId::LinearGn => self.rst().map(|_| ()),
            InequalityId::Thm13 => self.thm13_exponent(n).map(|_| ()),
            InequalityId::Bmo | InequalityId::WeakL1 => check_cz_window(self.s, n),
        }
    }

    /// `n / (p eps)` with `1/p = 1/p1 + 1/p2`, after checking the window.
    pub fn thm13_exponent(&self, n: usize) -> Result<f64> {
        check_cz_window(self.s, n)?;
        let missing = |w: &str| Error::InvalidParameter(format!("missing {w}"));
        let eps = self.eps.ok_or_else(|| missing("eps"))?;
        let p1 = self.p1.ok_or_else(|| missing("p1"))?;
        let p2 = self.p2.ok_or_else(|| missing("p2"))?;
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p > 1.0 && p.is_finite()) {
                return Err(Error::ParameterWindow(format!("requires 1 < {name} < inf, got {name}={p}")));
            }
        }
        let n_over_p = n as f64 * (1.0 / p1 + 1.0 / p2);
        if !(n_over_p < eps && eps < 1.0) {
            return Err(Error::ParameterWindow(format!("requires n/p < eps < 1, got n/p={n_over_p}, eps={eps}")));
        }
        Ok(n_over_p / eps)
    }
}

pub fn check_rst(r: f64, s: f64, t: f64) -> Result<()> {
    if !(0.0 <= r && r < s && s < t && t.is_finite()) {
        return Err(Error::ParameterWindow(format!("requires r < s < t with r >= 0, got r={r}, s={s}, t={t}")));
    }
    Ok(())
}

fn check_cz_window(s: f64, n: usize) -> Result<()> {
    if !(s > 2.0 * n as f64 + 1.0) {
        return Err(Error::ParameterWindow(format!("requires s > 2n+1 = {}, got s={s}", 2 * n + 1)));
    }
    Ok(())
}

/// Interpolation exponents `alpha = (t-s)/(t-r)` and `beta = (s-r)/(t-r)`.
pub fn gn_exponents(r: f64, s: f64, t: f64) -> (f64, f64) {
    ((t - s) / (t - r), (s - r) / (t - r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub ineq: InequalityId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair_id: Option<String>,
    pub params: InequalityParams,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, absent when `rhs = 0`.
    pub ratio: Option<f64>,
    pub flagged: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exponents: Option<[f64; 2]>,
    pub grid: GridSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub refinement_ratio_change: Option<f64>,
    pub input_hashes: Vec<String>,
}

impl InequalityReport {
    fn new(ineq: InequalityId, params: InequalityParams, grid: GridSpec, lhs: f64, rhs: f64) -> Self {
        let ratio = (rhs > 0.0).then(|| lhs / rhs);
        Self {
            ineq,
            pair_id: None,
            params: params.restricted(ineq),
            lhs,
            rhs,
            ratio,
            flagged: ratio.is_none(),
            exponents: None,
            grid,
            refinement_ratio_change: None,
            input_hashes: Vec::new(),
        }
    }

    fn with_exponents(mut self, a: f64, b: f64) -> Self {
        self.exponents = Some([a, b]);
        self
    }
}

fn sup(f: &SpectralField) -> f64 {
    sup_norm(f).value
}

fn besov(f: &SpectralField) -> f64 {
    besov_norm(f).value
}

fn d(f: &SpectralField, s: f64) -> Result<SpectralField> {
    f.fractional_derivative(s)
}

fn lhs_sup(f: &SpectralField, g: &SpectralField, s: f64) -> Result<f64> {
    check_half_band(f, g)?;
    Ok(sup(&d(&f.mul(g)?, s)?))
}

/// `sup(D^s f) sup(g) + sup(f) sup(D^s g)`.
fn leibniz_rhs(f: &SpectralField, g: &SpectralField, s: f64) -> Result<f64> {
    Ok(sup(&d(f, s)?) * sup(g) + sup(f) * sup(&d(g, s)?))
}

/// `||D^s(fg)||_inf` against `||D^s f||_inf ||g||_inf + ||f||_inf ||D^s g||_inf`.
pub fn eval_kp_endpoint(f: &SpectralField, g: &SpectralField, s: f64) -> Result<InequalityReport> {
    let params = InequalityParams::new(s);
    params.validate(InequalityId::KpEndpoint, f.grid().n)?;
    let lhs = lhs_sup(f, g, s)?;
    let rhs = leibniz_rhs(f, g, s)?;
    Ok(InequalityReport::new(InequalityId::KpEndpoint, params, *f.grid(), lhs, rhs))
}

fn bgn(
    id: InequalityId,
    f: &SpectralField,
    g: &SpectralField,
    r: f64,
    s: f64,
    t: f64,
    norm: fn(&SpectralField) -> f64,
) -> Result<InequalityReport> {
    let params = InequalityParams::with_rt(s, r, t);
    params.validate(id, f.grid().n)?;
    let (alpha, beta) = gn_exponents(r, s, t);
    let lhs = lhs_sup(f, g, s)?;
    let term = |h: &SpectralField| -> Result<f64> { Ok(norm(&d(h, r)?).powf(alpha) * norm(&d(h, t)?).powf(beta)) };
    let rhs = term(f)? * sup(g) + sup(f) * term(g)?;
    Ok(InequalityReport::new(id, params, *f.grid(), lhs, rhs).with_exponents(alpha, beta))
}

/// Besov form of the bilinear Gagliardo-Nirenberg bound.
pub fn eval_bgn_besov(f: &SpectralField, g: &SpectralField, r: f64, s: f64, t: f64) -> Result<InequalityReport> {
    bgn(InequalityId::BgnBesov, f, g, r, s, t, besov)
}

/// Sup-norm form of the bilinear Gagliardo-Nirenberg bound.
pub fn eval_bgn_linf(f: &SpectralField, g: &SpectralField, r: f64, s: f64, t: f64) -> Result<InequalityReport> {
    bgn(InequalityId::BgnLinf, f, g, r, s, t, sup)
}

/// `||D^s f||_inf` against `||D^r f||_inf^alpha ||D^t f||_inf^beta`.
pub fn eval_linear_gn(f: &SpectralField, r: f64, s: f64, t: f64) -> Result<InequalityReport> {
    let params = InequalityParams::with_rt(s, r, t);
    params.validate(InequalityId::LinearGn, f.grid().n)?;
    let (alpha, beta) = gn_exponents(r, s, t);
    let lhs = sup(&d(f, s)?);
    let rhs = sup(&d(f, r)?).powf(alpha) * sup(&d(f, t)?).powf(beta);
    Ok(InequalityReport::new(InequalityId::LinearGn, params, *f.grid(), lhs, rhs).with_exponents(alpha, beta))
}

/// The `L^{p1} x L^{p2}` bound valid for `s > 2n + 1`.
pub fn eval_thm13(f: &SpectralField, g: &SpectralField, s: f64, eps: f64, p1: f64, p2: f64) -> Result<InequalityReport> {
    let params = InequalityParams::with_thm13(s, eps, p1, p2);
    let theta = params.thm13_exponent(f.grid().n)?;
    let lhs = lhs_sup(f, g, s)?;
    let lp = |h: &SpectralField, p: f64| lp_norm(h, p).map(|v| v.value);
    let (ds_f, ds_g) = (d(f, s)?, d(g, s)?);
    let (dse_f, dse_g) = (d(f, s + eps)?, d(g, s + eps)?);
    let rhs = lp(&ds_f, p1)?.powf(1.0 - theta) * lp(&dse_f, p1)?.powf(theta) * lp(g, p2)?
        + lp(f, p1)? * lp(&ds_g, p2)?.powf(1.0 - theta) * lp(&dse_g, p2)?.powf(theta)
        + sup(&ds_f) * sup(g)
        + sup(f) * sup(&ds_g);
    Ok(InequalityReport::new(InequalityId::Thm13, params, *f.grid(), lhs, rhs).with_exponents(1.0 - theta, theta))
}

/// Default dyadic depth: cubes of side `L / 2^depth` hold at least 16
/// samples per axis.
pub fn default_bmo_depth(grid: &GridSpec) -> usize {
    (grid.size.trailing_zeros() as usize).saturating_sub(4)
}

/// `||D^s(fg)||_BMO` against the sup-norm Leibniz right side.
pub fn eval_bmo_endpoint(f: &SpectralField, g: &SpectralField, s: f64, max_depth: Option<usize>) -> Result<InequalityReport> {
    let depth = max_depth.unwrap_or_else(|| default_bmo_depth(f.grid()));
    let params = InequalityParams { max_depth: Some(depth), ..InequalityParams::new(s) };
    params.validate(InequalityId::Bmo, f.grid().n)?;
    check_half_band(f, g)?;
    let lhs = bmo_norm(&d(&f.mul(g)?, s)?, depth)?.value;
    let rhs = leibniz_rhs(f, g, s)?;
    Ok(InequalityReport::new(InequalityId::Bmo, params, *f.grid(), lhs, rhs))
}

/// `||D^s(fg)||_{L^{1,inf}}` against `||D^s f||_inf ||g||_1 + ||f||_1 ||D^s g||_inf`.
pub fn eval_weak_l1_endpoint(f: &SpectralField, g: &SpectralField, s: f64) -> Result<InequalityReport> {
    let params = InequalityParams::new(s);
    params.validate(InequalityId::WeakL1, f.grid().n)?;
    check_half_band(f, g)?;
    let lhs = weak_l1(&d(&f.mul(g)?, s)?).value;
    let l1 = |h: &SpectralField| lp_norm(h, 1.0).map(|v| v.value);
    let rhs = sup(&d(f, s)?) * l1(g)? + l1(f)? * sup(&d(g, s)?);
    Ok(InequalityReport::new(InequalityId::WeakL1, params, *f.grid(), lhs, rhs))
}

/// Dispatches on `id`; single-function evaluators read only `f`.
pub fn evaluate(id: InequalityId, f: &SpectralField, g: &SpectralField, p: &InequalityParams) -> Result<InequalityReport> {
    let s = p.s;
    match id {
        InequalityId::KpEndpoint => eval_kp_endpoint(f, g, s),
        InequalityId::BgnBesov => {
            let (r, s, t) = p.rst()?;
            eval_bgn_besov(f, g, r, s, t)
        }
        InequalityId::BgnLinf => {
            let (r, s, t) = p.rst()?;
            eval_bgn_linf(f, g, r, s, t)
        }
        InequalityId::LinearGn => {
            let (r, s, t) = p.rst()?;
            eval_linear_gn(f, r, s, t)
        }
        InequalityId::Thm13 => {
            let missing = || Error::InvalidParameter("thm13 needs eps, p1 and p2".into());
            eval_thm13(f, g, s, p.eps.ok_or_else(missing)?, p.p1.ok_or_else(missing)?, p.p2.ok_or_else(missing)?)
        }
        InequalityId::Bmo => eval_bmo_endpoint(f, g, s, p.max_depth),
        InequalityId::WeakL1 => eval_weak_l1_endpoint(f, g, s),
    }
}

/// Minimizes `lambda^{r-s} A + lambda^{t-s} B` over `lambda > 0`.
pub fn lambda_minimize(a: f64, b: f64, r: f64, s: f64, t: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda minimization needs A, B > 0, got A={a}, B={b}")));
    }
    if !(r < s && s < t) {
        return Err(Error::ParameterWindow(format!("requires r < s < t, got r={r}, s={s}, t={t}")));
    }
    let lambda = ((s - r) * a / ((t - s) * b)).powf(1.0 / (t - r));
    Ok((lambda, lambda.powf(r - s) * a + lambda.powf(t - s) * b))
}

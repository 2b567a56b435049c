//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints its PASS/FAIL line even when an earlier one fails; the process exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kpforge_core::lab::{default_corpus, eval_kp_endpoint, run_corpus, InequalityId, InequalityParams};
use kpforge_core::norms::{besov_norm, sup_norm};
use kpforge_core::paraproduct::{
    cm_check, coeff_decay_fit, decompose_ds, ds_of_product, pi1_pi2, pi_split, rel_sup, symbols,
    t1_shift_identity_check, FourierCoefficients, KernelK1, SampleSpec,
};
use kpforge_core::search::{run_search, SearchConfig};
use kpforge_core::spectral::reconstruct;
use kpforge_core::{GridSpec, SpectralField};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn corpus_fields(n: usize, grid: &GridSpec) -> Vec<(String, SpectralField)> {
    default_corpus(n)
        .pairs
        .iter()
        .flat_map(|p| {
            [(format!("{}/f", p.id), p.f.render(grid).unwrap()), (format!("{}/g", p.id), p.g.render(grid).unwrap())]
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let grids = [GridSpec::new(1, 2048, 16.0).unwrap(), GridSpec::new(2, 256, 16.0).unwrap()];
    for grid in &grids {
        for (_, f) in corpus_fields(grid.n, grid) {
            let start = Instant::now();
            let back = reconstruct(&f);
            slowest = slowest.max(start.elapsed());
            worst = worst.max(rel_sup(&back, &f));
        }
    }
    outcome(
        worst < 1e-12 && slowest < Duration::from_secs(1),
        format!("worst relative sup error {worst:.2e} over 96 fields, slowest field {slowest:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let grid = GridSpec::new(1, 1024, 16.0).unwrap();
    let fields = corpus_fields(1, &grid);
    let mut worst = 0.0f64;
    for s in [0.5, 1.0, 2.0] {
        for (_, f) in &fields {
            let base = besov_norm(&f.fractional_derivative(s).unwrap()).value;
            for j0 in -2..=2 {
                let dilated = besov_norm(&f.dilate_rescaled(j0).fractional_derivative(s).unwrap()).value;
                let expect = 2f64.powf(j0 as f64 * s) * base;
                worst = worst.max((dilated - expect).abs() / expect);
            }
        }
    }
    outcome(worst < 1e-10, format!("worst relative deviation {worst:.2e} (j0 in -2..2, s in {{0.5, 1, 2}})"))
}

fn criterion_3() -> Outcome {
    let mut violations = 0;
    let mut tightest = 0.0f64;
    for (grid, constant) in [
        (GridSpec::new(1, 1024, 16.0).unwrap(), common::psi_hat_l1_1d()),
        (GridSpec::new(2, 256, 16.0).unwrap(), common::psi_hat_l1_2d()),
    ] {
        for (_, h) in corpus_fields(grid.n, &grid) {
            let (b, s) = (besov_norm(&h).value, sup_norm(&h).value);
            tightest = tightest.max(b / (constant * s));
            if b > constant * s {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations, largest besov / (C sup) = {tightest:.4}"))
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, s, m_max, quad) in [(1, 1.0, 128, 1024), (1, 2.0, 128, 1024), (2, 1.0, 128, 1024)] {
        let a = coeff_decay_fit(&FourierCoefficients::compute(n, s, m_max, quad).unwrap()).unwrap();
        let b = coeff_decay_fit(&FourierCoefficients::compute(n, s, m_max, 2 * quad).unwrap()).unwrap();
        let target = -(n as f64 + s);
        let ok = (a.slope - target).abs() <= 0.5 && (a.slope - b.slope).abs() < 0.05;
        pass &= ok;
        parts.push(format!(
            "(n={n}, s={s}) slope {:.3} vs {target} shift {:.1e} {}",
            a.slope,
            (a.slope - b.slope).abs(),
            if ok { "ok" } else { "out of band" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let grid = GridSpec::new(1, 512, 16.0).unwrap();
    let (r, s, t) = (0.5, 2.0, 3.0);
    let mut worst_split = 0.0f64;
    let mut worst_reweight = 0.0f64;
    for pair in &default_corpus(1).pairs {
        let (f, g) = (pair.f.render(&grid).unwrap(), pair.g.render(&grid).unwrap());
        let direct = ds_of_product(&f, &g, s).unwrap();
        let (pi, pi_tilde) = pi_split(&f, &g, s).unwrap();
        let scale = direct.max_abs().max(pi.max_abs()).max(pi_tilde.max_abs());
        worst_split = worst_split.max(pi.add(&pi_tilde).unwrap().sub(&direct).unwrap().max_abs() / scale);
        let (p1, p2) =
            pi1_pi2(&f.fractional_derivative(r).unwrap(), &f.fractional_derivative(t).unwrap(), &g, r, s, t).unwrap();
        let scale = pi.max_abs().max(p1.max_abs()).max(p2.max_abs());
        worst_reweight = worst_reweight.max(p1.add(&p2).unwrap().sub(&pi).unwrap().max_abs() / scale);
    }
    outcome(
        worst_split < 1e-10 && worst_reweight < 1e-10,
        format!("split residual {worst_split:.2e}, reweighting residual {worst_reweight:.2e} over 24 pairs"),
    )
}

fn criterion_6() -> Outcome {
    let grid = GridSpec::new(1, 64, 1.0).unwrap();
    let sine = SpectralField::from_fn(grid, |x| (2.0 * PI * x[0]).sin());
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [2.0, 3.5] {
        let all = Arc::new(FourierCoefficients::compute(1, s, 1024, 16384).unwrap());
        let residuals: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&m| decompose_ds(&sine, &sine, Arc::new(all.truncated(m))).unwrap().relative_residual())
            .collect();
        let ok = residuals[0] < 1e-3 && residuals.windows(2).all(|w| w[1] < w[0]);
        pass &= ok;
        parts.push(format!("s={s} residuals {:.3e} > {:.3e} > {:.3e}", residuals[0], residuals[1], residuals[2]));
    }
    let corpus_grid = GridSpec::new(1, 256, 16.0).unwrap();
    let mut shift = 0.0f64;
    for pair in default_corpus(1).pairs.iter().take(6) {
        let (f, g) = (pair.f.render(&corpus_grid).unwrap(), pair.g.render(&corpus_grid).unwrap());
        shift = shift.max(t1_shift_identity_check(&f, &g, 2.0, 0.5).unwrap());
    }
    shift = shift.max(t1_shift_identity_check(&sine, &sine, 2.0, 0.5).unwrap());
    pass &= shift < 1e-10;
    parts.push(format!("shift identity residual {shift:.2e}"));
    // diagnostic only: on general pairs the truncated sigma_3 series does not
    // reproduce the remainder, see the README
    let pair = &default_corpus(1).pairs[0];
    let (f, g) = (pair.f.render(&corpus_grid).unwrap(), pair.g.render(&corpus_grid).unwrap());
    let d = decompose_ds(&f, &g, Arc::new(FourierCoefficients::compute(1, 2.0, 256, 4096).unwrap())).unwrap();
    let summary = d.summary(2.0, 256);
    parts.push(format!(
        "[info {}: series residual {:.2e}, complement residual {:.2e}]",
        pair.id, summary.relative_residual, summary.complement_relative_residual
    ));
    outcome(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let grid = GridSpec::new(1, 256, 16.0).unwrap();
    let packet = |k: f64, w: f64, c: f64| {
        SpectralField::from_fn(grid, move |x| (-(x[0] - c).powi(2) / (2.0 * w * w)).exp() * (2.0 * PI * k * x[0]).cos())
            .band_limit(grid.half_band_index() - 1)
    };
    let (f, g) = (packet(1.0, 2.0, 0.0), packet(0.4, 2.0, 0.5));
    let (r, s, t) = (0.5, 1.5, 2.5);
    let start = Instant::now();
    let coeffs = Arc::new(FourierCoefficients::compute(1, s, 64, 1024).unwrap());
    let kernel = KernelK1::new(coeffs, r, 20, 64).unwrap();
    let d_r = f.fractional_derivative(r).unwrap();
    let via_kernel = kernel.apply(&d_r, &g).unwrap();
    let elapsed = start.elapsed();
    let (via_symbol, _) = pi1_pi2(&d_r, &f.fractional_derivative(t).unwrap(), &g, r, s, t).unwrap();
    let err = rel_sup(&via_kernel, &via_symbol);
    outcome(
        err < 1e-2 && elapsed < Duration::from_secs(300),
        format!("relative sup error {err:.2e}, kernel path {elapsed:.2?}"),
    )
}

fn criterion_8() -> Outcome {
    let spec = SampleSpec::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [0.5, 1.0, 2.0, 3.5] {
        let a = cm_check(&symbols::sigma1(s), 1, 3, &spec).unwrap();
        let b = cm_check(&symbols::sigma1(s), 1, 3, &spec.doubled()).unwrap();
        let finite = a.entries.iter().chain(&b.entries).all(|e| e.constant.is_finite());
        let change = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| (x.constant - y.constant).abs() / y.constant.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        let ok = finite && a.all_stable() && b.all_stable() && change <= 0.1;
        pass &= ok;
        parts.push(format!("sigma1 s={s} change {change:.1e}"));
    }
    let wide = Arc::new(FourierCoefficients::compute(1, 3.5, 512, 8192).unwrap());
    let c256 = cm_check(&symbols::sigma3_series(Arc::new(wide.truncated(256))), 1, 3, &spec).unwrap().max_of_order(3);
    let c512 = cm_check(&symbols::sigma3_series(wide), 1, 3, &spec).unwrap().max_of_order(3);
    let change = (c256 - c512).abs() / c512;
    pass &= c256.is_finite() && change <= 0.1;
    parts.push(format!("sigma3 s=3.5 order-3 constant {c256:.4} -> {c512:.4} ({change:.1e})"));
    outcome(pass, parts.join("; "))
}

fn criterion_9() -> Outcome {
    let grid = GridSpec::new(1, 1024, 16.0).unwrap();
    let params = InequalityParams {
        r: Some(1.0),
        t: Some(4.5),
        eps: Some(0.5),
        p1: Some(8.0),
        p2: Some(8.0),
        ..InequalityParams::new(3.5)
    };
    let ids = [
        InequalityId::BgnBesov,
        InequalityId::BgnLinf,
        InequalityId::LinearGn,
        InequalityId::Thm13,
        InequalityId::Bmo,
        InequalityId::WeakL1,
    ];
    let run = run_corpus(&default_corpus(1), &grid, &ids, &params, true);
    let mut pass = true;
    let mut parts = Vec::new();
    for row in &run.summary {
        let delta = row.refinement_delta.unwrap_or(f64::INFINITY);
        let ok = row.failures == 0 && row.max_ratio.is_finite() && delta < 0.05;
        pass &= ok;
        parts.push(format!("{} max {:.4} change {delta:.1e}", row.ineq, row.max_ratio));
    }
    let unit = GridSpec::new(1, 64, 1.0).unwrap();
    let sine = SpectralField::from_fn(unit, |x| (2.0 * PI * x[0]).sin());
    for (s, expect) in [(2.0, 1.0), (3.0, 2.0)] {
        let ratio = eval_kp_endpoint(&sine, &sine, s).unwrap().ratio.unwrap();
        pass &= (ratio - expect).abs() < 1e-10;
        parts.push(format!("sin/sin s={s} ratio {ratio:.12}"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_10() -> Outcome {
    let config = SearchConfig { seed: 42, s: 3.0, population: 32, iterations: 200, ..SearchConfig::default() };
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let result = pool.install(|| run_search(&config)).unwrap();
        (serde_json::to_string(&result).unwrap(), result)
    };
    let (one, result) = run_with(1);
    let (again, _) = run_with(1);
    let (four, _) = run_with(4);
    let identical = one == again && one == four;
    outcome(
        identical && result.best_ratio >= 1.95 && result.refinement_change <= 0.1 && !result.discretization_artifact,
        format!(
            "best {:.6}, at 2N {:.6} (change {:.1e}), identical across runs and 1/4 threads: {identical}",
            result.best_ratio, result.refined_ratio, result.refinement_change
        ),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!("{} criterion {k}: {} [{:.2?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed());
        if !o.pass {
            failed.push(k);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

//! Seeded population search for large endpoint ratios
//! `||D^s(fg)||_inf / (||D^s f||_inf ||g||_inf + ||f||_inf ||D^s g||_inf)`.
//!
//! A candidate is a flat vector holding `packets` packets for `f` followed by
//! `packets` packets for `g`. Each packet occupies `3 + 2n` slots laid out as
//! `a, c_1..c_n, w, k_1..k_n, phi`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lab::{eval_kp_endpoint, Corpus, CorpusPair, Packet, TestFunctionSpec, MAX_PACKETS};
use crate::rng::SplitMix64;
use crate::spectral::GridSpec;

/// Relative disagreement with the `2N` re-evaluation above which a result
/// is labelled a discretization artifact.
pub const REFINEMENT_TOL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub s: f64,
    pub population: usize,
    pub iterations: usize,
    pub packets: usize,
    pub grid: GridSpec,
    /// Initial noise standard deviation as a fraction of each parameter range.
    pub initial_step: f64,
    /// Per-iteration geometric step factor.
    pub decay: f64,
    pub elite_fraction: f64,
    /// Largest searched `|k|` as a fraction of the admissible `Nyquist / 4`.
    pub k_fraction: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            s: 3.0,
            population: 32,
            iterations: 200,
            packets: 1,
            grid: GridSpec::new(1, 256, 16.0).expect("valid grid"),
            initial_step: 0.2,
            decay: 0.985,
            elite_fraction: 0.25,
            k_fraction: 0.25,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.population < 4 {
            return bad(format!("population must be >= 4, got {}", self.population));
        }
        if self.iterations < 1 {
            return bad("iterations must be >= 1".into());
        }
        if !(1..=MAX_PACKETS).contains(&self.packets) {
            return bad(format!("packets per function must lie in 1..={MAX_PACKETS}"));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::ParameterWindow(format!("requires s > 0, got s={}", self.s)));
        }
        if !(self.initial_step > 0.0 && self.decay > 0.0 && self.decay <= 1.0) {
            return bad("step schedule needs initial_step > 0 and 0 < decay <= 1".into());
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction < 1.0) {
            return bad("elite_fraction must lie in (0, 1)".into());
        }
        if !(self.k_fraction > 0.0 && self.k_fraction <= 1.0) {
            return bad("k_fraction must lie in (0, 1]".into());
        }
        Ok(())
    }

    fn elites(&self) -> usize {
        ((self.elite_fraction * self.population as f64).ceil() as usize).clamp(1, self.population - 1)
    }

    pub fn genome_len(&self) -> usize {
        2 * self.packets * (3 + 2 * self.grid.n)
    }

    /// Per-slot `(lo, hi)` bounds of the encoding.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        let (l, n) = (self.grid.length, self.grid.n);
        let k = self.k_max() / (n as f64).sqrt();
        let mut one = vec![(-1.0, 1.0)];
        one.extend(std::iter::repeat((-l / 2.0, l / 2.0)).take(n));
        one.push((l / 64.0, l / 4.0));
        one.extend(std::iter::repeat((-k, k)).take(n));
        one.push((0.0, 2.0 * PI));
        one.iter().cycle().take(self.genome_len()).copied().collect()
    }

    fn k_max(&self) -> f64 {
        self.k_fraction * self.grid.nyquist() / 4.0
    }
}

/// Clamps `x` into the encoding bounds; the half-open ranges of centres and
/// phases are closed one ulp below their upper ends.
pub fn clamp(config: &SearchConfig, x: &mut [f64]) {
    for (v, (lo, hi)) in x.iter_mut().zip(config.bounds()) {
        let top = if hi == config.grid.length / 2.0 || hi == 2.0 * PI { hi - hi * f64::EPSILON } else { hi };
        *v = if v.is_nan() { lo } else { v.clamp(lo, top) };
    }
}

pub fn decode(config: &SearchConfig, x: &[f64]) -> Result<(TestFunctionSpec, TestFunctionSpec)> {
    if x.len() != config.genome_len() {
        return Err(Error::InvalidParameter(format!("expected {} parameters, got {}", config.genome_len(), x.len())));
    }
    let n = config.grid.n;
    let packets: Vec<Packet> = x
        .chunks(3 + 2 * n)
        .map(|p| Packet { a: p[0], c: p[1..1 + n].to_vec(), w: p[1 + n], k: p[2 + n..2 + 2 * n].to_vec(), phi: p[2 + 2 * n] })
        .collect();
    let (f, g) = packets.split_at(config.packets);
    Ok((TestFunctionSpec::new(f.to_vec()), TestFunctionSpec::new(g.to_vec())))
}

pub fn encode(config: &SearchConfig, f: &TestFunctionSpec, g: &TestFunctionSpec) -> Result<Vec<f64>> {
    if f.packets.len() != config.packets || g.packets.len() != config.packets {
        return Err(Error::InvalidParameter(format!("both functions need {} packets", config.packets)));
    }
    let mut out = Vec::with_capacity(config.genome_len());
    for p in f.packets.iter().chain(&g.packets) {
        out.push(p.a);
        out.extend(&p.c);
        out.push(p.w);
        out.extend(&p.k);
        out.push(p.phi);
    }
    Ok(out)
}

/// Endpoint ratio of a candidate on `grid`; `flagged` when the candidate
/// does not decode or the right side vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub ratio: f64,
    pub flagged: bool,
}

pub fn objective_on(config: &SearchConfig, grid: &GridSpec, x: &[f64]) -> Objective {
    let eval = || -> Result<Option<f64>> {
        let (f, g) = decode(config, x)?;
        Ok(eval_kp_endpoint(&f.render(grid)?, &g.render(grid)?, config.s)?.ratio)
    };
    match eval() {
        Ok(Some(ratio)) if ratio.is_finite() => Objective { ratio, flagged: false },
        _ => Objective { ratio: 0.0, flagged: true },
    }
}

pub fn objective(config: &SearchConfig, x: &[f64]) -> Objective {
    objective_on(config, &config.grid, x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub best_ratio: f64,
    pub mean_ratio: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub seed: u64,
    pub config: SearchConfig,
    pub best_ratio: f64,
    pub best_params: Vec<f64>,
    pub best_f: TestFunctionSpec,
    pub best_g: TestFunctionSpec,
    pub history: Vec<IterationLog>,
    /// Best candidate re-evaluated on the grid with `2N` points per axis.
    pub refined_ratio: f64,
    pub refinement_change: f64,
    /// Set when the `2N` value moves by more than [`REFINEMENT_TOL`]; such a
    /// result says nothing about the continuous inequality.
    pub discretization_artifact: bool,
    pub evaluations: usize,
    pub flagged_evaluations: usize,
}

impl SearchResult {
    pub fn write_log(&self, mut w: impl Write) -> Result<()> {
        for h in &self.history {
            serde_json::to_writer(&mut w, h)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// The best pair as a one-entry corpus.
    pub fn to_corpus(&self) -> Corpus {
        Corpus {
            name: format!("search-seed-{}", self.seed),
            n: self.config.grid.n,
            pairs: vec![CorpusPair {
                id: format!("search-s{}-seed{}", self.config.s, self.seed),
                category: "search".into(),
                f: self.best_f.clone(),
                g: self.best_g.clone(),
            }],
        }
    }
}

#[derive(Clone)]
struct Scored {
    x: Vec<f64>,
    value: Objective,
}

/// Descending ratio; equal ratios keep the lower candidate index first.
fn rank(pool: &[Scored]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&i, &j| match pool[j].value.ratio.total_cmp(&pool[i].value.ratio) {
        Ordering::Equal => i.cmp(&j),
        o => o,
    });
    order
}

fn evaluate_all(config: &SearchConfig, xs: Vec<Vec<f64>>) -> Vec<Scored> {
    let values: Vec<Objective> = xs.par_iter().map(|x| objective(config, x)).collect();
    xs.into_iter().zip(values).map(|(x, value)| Scored { x, value }).collect()
}

/// Elitist random search. All random draws happen on the calling thread
/// in a fixed order, so the result depends on the seed only.
pub fn run_search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let mut rng = SplitMix64::new(config.seed);
    let bounds = config.bounds();
    let n_elite = config.elites();

    let initial: Vec<Vec<f64>> = (0..config.population)
        .map(|_| bounds.iter().map(|&(lo, hi)| rng.uniform_in(lo, hi)).collect())
        .map(|mut x: Vec<f64>| {
            clamp(config, &mut x);
            x
        })
        .collect();
    let mut pool = evaluate_all(config, initial);
    let mut evaluations = pool.len();
    let mut flagged = pool.iter().filter(|c| c.value.flagged).count();
    let mut elites: Vec<Scored> = rank(&pool).into_iter().take(n_elite).map(|i| pool[i].clone()).collect();
    let mut history = Vec::with_capacity(config.iterations);

    let mut step = config.initial_step;
    for iter in 0..config.iterations {
        let children: Vec<Vec<f64>> = (0..config.population - n_elite)
            .map(|i| {
                let parent = &elites[i % n_elite].x;
                let mut x: Vec<f64> = parent.iter().zip(&bounds).map(|(&v, &(lo, hi))| v + step * (hi - lo) * rng.normal()).collect();
                clamp(config, &mut x);
                x
            })
            .collect();
        let scored = evaluate_all(config, children);
        evaluations += scored.len();
        flagged += scored.iter().filter(|c| c.value.flagged).count();
        let mean_ratio = scored.iter().map(|c| c.value.ratio).sum::<f64>() / scored.len() as f64;
        pool = elites.into_iter().chain(scored).collect();
        elites = rank(&pool).into_iter().take(n_elite).map(|i| pool[i].clone()).collect();
        history.push(IterationLog { iter, best_ratio: elites[0].value.ratio, mean_ratio, step });
        step *= config.decay;
    }

    let best = &elites[0];
    let (best_f, best_g) = decode(config, &best.x)?;
    let refined_ratio = objective_on(config, &config.grid.refined(), &best.x).ratio;
    let refinement_change = if best.value.ratio > 0.0 { (refined_ratio - best.value.ratio).abs() / best.value.ratio } else { 0.0 };
    Ok(SearchResult {
        seed: config.seed,
        config: config.clone(),
        best_ratio: best.value.ratio,
        best_params: best.x.clone(),
        best_f,
        best_g,
        history,
        refined_ratio,
        refinement_change,
        discretization_artifact: refinement_change > REFINEMENT_TOL,
        evaluations,
        flagged_evaluations: flagged,
    })
}

/// Orders scanned by [`run_sweep`] by default.
pub const SWEEP_ORDERS: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 4.0];

/// Repeats the search at each order in `orders` with the same seed.
pub fn run_sweep(config: &SearchConfig, orders: &[f64]) -> Result<Vec<SearchResult>> {
    orders.iter().map(|&s| run_search(&SearchConfig { s, ..config.clone() })).collect()
}

//! Corpus sweeps and their report files.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corpus::{Corpus, CorpusPair};
use super::inequality::{evaluate, InequalityId, InequalityParams, InequalityReport};
use crate::error::Result;
use crate::spectral::{GridSpec, SpectralField};

/// Outcome of one (pair, inequality) item; failures do not stop the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ItemOutcome {
    Report(InequalityReport),
    Failed { pair_id: String, ineq: InequalityId, error: String },
}

impl ItemOutcome {
    pub fn report(&self) -> Option<&InequalityReport> {
        match self {
            ItemOutcome::Report(r) => Some(r),
            ItemOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub ineq: InequalityId,
    pub max_ratio: f64,
    pub argmax: String,
    /// Largest ratio over the corpus re-rendered at `2N`.
    pub refined_max_ratio: Option<f64>,
    /// `|refined_max_ratio - max_ratio| / max_ratio`.
    pub refinement_delta: Option<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRun {
    pub items: Vec<ItemOutcome>,
    pub summary: Vec<SummaryRow>,
}

fn render_pair(pair: &CorpusPair, grid: &GridSpec) -> Result<(SpectralField, SpectralField)> {
    Ok((pair.f.render(grid)?, pair.g.render(grid)?))
}

/// Evaluates every inequality on every pair, in corpus order.
fn sweep(corpus: &Corpus, grid: &GridSpec, ids: &[InequalityId], params: &InequalityParams) -> Vec<Vec<ItemOutcome>> {
    corpus
        .pairs
        .par_iter()
        .map(|pair| {
            let fields = render_pair(pair, grid);
            ids.iter()
                .map(|&id| {
                    let result = fields.as_ref().map_err(|e| e.to_string()).and_then(|(f, g)| evaluate(id, f, g, params).map_err(|e| e.to_string()));
                    match result {
                        Ok(mut rep) => {
                            rep.pair_id = Some(pair.id.clone());
                            rep.input_hashes = vec![pair.f.hash(), pair.g.hash()];
                            ItemOutcome::Report(rep)
                        }
                        Err(error) => ItemOutcome::Failed { pair_id: pair.id.clone(), ineq: id, error },
                    }
                })
                .collect()
        })
        .collect()
}

/// Runs `ids` over `corpus` on `grid`; with `refinement`, repeats at `2N`
/// and records the relative ratio change per item and per summary row.
pub fn run_corpus(corpus: &Corpus, grid: &GridSpec, ids: &[InequalityId], params: &InequalityParams, refinement: bool) -> CorpusRun {
    if ids.is_empty() || corpus.pairs.is_empty() {
        return CorpusRun { items: Vec::new(), summary: Vec::new() };
    }
    let mut base = sweep(corpus, grid, ids, params);
    let fine = refinement.then(|| sweep(corpus, &grid.refined(), ids, params));
    if let Some(fine) = &fine {
        for (row, fine_row) in base.iter_mut().zip(fine) {
            for (item, fine_item) in row.iter_mut().zip(fine_row) {
                if let (ItemOutcome::Report(r), Some(fr)) = (item, fine_item.report()) {
                    if let (Some(a), Some(b)) = (r.ratio, fr.ratio) {
                        r.refinement_ratio_change = Some((b - a).abs() / a);
                    }
                }
            }
        }
    }
    let summary = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let column = |rows: &Vec<Vec<ItemOutcome>>| -> Option<(f64, String)> {
                rows.iter()
                    .filter_map(|row| row[i].report())
                    .filter_map(|r| r.ratio.map(|x| (x, r.pair_id.clone().unwrap_or_default())))
                    .fold(None, |best: Option<(f64, String)>, (x, id)| match best {
                        Some((b, _)) if b >= x => best,
                        _ => Some((x, id)),
                    })
            };
            let failures = base.iter().filter(|row| row[i].report().is_none()).count();
            let (max_ratio, argmax) = column(&base).unwrap_or((f64::NAN, String::new()));
            let refined_max_ratio = fine.as_ref().and_then(|rows| column(rows)).map(|(x, _)| x);
            let refinement_delta = refined_max_ratio.map(|x| (x - max_ratio).abs() / max_ratio);
            SummaryRow { ineq: id, max_ratio, argmax, refined_max_ratio, refinement_delta, failures }
        })
        .collect();
    // pair-major order: every inequality for pair 1, then pair 2, ...
    CorpusRun { items: base.into_iter().flatten().collect(), summary }
}

impl CorpusRun {
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<()> {
        for item in &self.items {
            serde_json::to_writer(&mut w, item)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write_summary_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "inequality,max_ratio,argmax_pair,refined_max_ratio,refinement_delta,failures")?;
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        for row in &self.summary {
            writeln!(
                w,
                "{},{:.12e},{},{},{},{}",
                row.ineq,
                row.max_ratio,
                row.argmax,
                opt(row.refined_max_ratio),
                opt(row.refinement_delta),
                row.failures
            )?;
        }
        Ok(())
    }
}

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::json;

use kpforge_core::lab::{run_corpus, Corpus, InequalityId, InequalityParams};
use kpforge_core::paraproduct::{self as pp, symbols, FourierCoefficients, SampleSpec, SymbolSpec};
use kpforge_core::search::{run_search, run_sweep, SearchConfig, SWEEP_ORDERS};
use kpforge_core::spectral::{kpf, GridSpec};
use kpforge_core::{lab, SpectralField};

use crate::config::Options;
use crate::Failure;

type Outcome = Result<(), Failure>;

fn grid(o: &Options, default_size: usize) -> Result<GridSpec, Failure> {
    Ok(GridSpec::new(o.n.unwrap_or(1), o.size.unwrap_or(default_size), o.length.unwrap_or(16.0))?)
}

fn load_corpus(o: &Options, n: usize) -> Result<Corpus, Failure> {
    match o.corpus.as_deref().unwrap_or("default") {
        "default" => Ok(lab::default_corpus(n)),
        path => Ok(Corpus::load(Path::new(path))?),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Other(format!("cannot create {}: {e}", path.display())))
}

fn out_path(o: &Options, default: &str) -> PathBuf {
    o.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Outcome {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Other(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn default_quad(m_max: usize) -> usize {
    (8 * m_max).next_power_of_two().max(1024)
}

fn inequality_params(o: &Options) -> InequalityParams {
    InequalityParams { r: o.r, t: o.t, eps: o.eps, p1: o.p1, p2: o.p2, max_depth: o.max_depth, ..InequalityParams::new(o.s.unwrap_or(1.0)) }
}

pub fn verify(o: &Options) -> Outcome {
    let id: InequalityId = o.ineq.as_deref().ok_or_else(|| Failure::Other("verify needs --ineq".into()))?.parse()?;
    let params = inequality_params(o);
    let grid = grid(o, 1024)?;
    params.validate(id, grid.n)?;
    let corpus = load_corpus(o, grid.n)?;
    corpus.validate(&grid)?;
    let run = run_corpus(&corpus, &grid, &[id], &params, o.refine);

    let out = out_path(o, "report.jsonl");
    let mut w = create(&out)?;
    run.write_jsonl(&mut w)?;
    w.flush()?;
    let summary_path = out.with_extension("summary.csv");
    let mut w = create(&summary_path)?;
    writeln!(
        w,
        "# ineq={id} n={} N={} L={} params={} corpus={} pairs={} refine={}",
        grid.n,
        grid.size,
        grid.length,
        serde_json::to_string(&params.restricted(id)).expect("plain data"),
        corpus.name,
        corpus.pairs.len(),
        o.refine
    )?;
    run.write_summary_csv(&mut w)?;
    w.flush()?;
    for row in &run.summary {
        println!(
            "{}: max ratio {:.6} at {} ({} failures){}",
            row.ineq,
            row.max_ratio,
            row.argmax,
            row.failures,
            row.refinement_delta.map(|d| format!(", refinement change {d:.3e}")).unwrap_or_default()
        );
    }
    println!("wrote {} and {}", out.display(), summary_path.display());
    Ok(())
}

pub fn coeffs(o: &Options) -> Outcome {
    let (n, s, m_max) = (o.n.unwrap_or(1), o.s.unwrap_or(1.0), o.mmax.unwrap_or(128));
    let quad = o.quad.unwrap_or_else(|| default_quad(m_max));
    let c = FourierCoefficients::compute(n, s, m_max, quad)?;
    let out = out_path(o, "coeffs.csv");
    let mut w = create(&out)?;
    c.write_csv(&mut w)?;
    w.flush()?;
    let mut meta = json!({ "n": n, "s": s, "m_max": m_max, "quad_n": quad, "csv": out.display().to_string() });
    if m_max >= 64 {
        let fit = pp::coeff_decay_fit(&c)?;
        println!("decay fit: slope {:.4} (expected -(n+s) = {:.4}), intercept {:.4}", fit.slope, -(n as f64 + s), fit.intercept);
        meta["slope"] = json!(fit.slope);
        meta["intercept"] = json!(fit.intercept);
    } else {
        println!("decay fit skipped: needs mmax >= 64");
    }
    write_json(&out.with_extension("fit.json"), &meta)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn symbol(o: &Options, n: usize) -> Result<SymbolSpec, Failure> {
    let s = o.s.unwrap_or(1.0);
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Failure::Other(format!("this symbol needs --{name}")));
    Ok(match o.symbol.as_deref().unwrap_or("sigma1") {
        "sigma1" => symbols::sigma1(s),
        "sigma2" => symbols::sigma2(s),
        "sigma3" => {
            let m_max = o.mmax.unwrap_or(256);
            let quad = o.quad.unwrap_or_else(|| default_quad(m_max));
            symbols::sigma3_series(Arc::new(FourierCoefficients::compute(n, s, m_max, quad)?))
        }
        "sigma3-closed" => symbols::sigma3_closed(s),
        "sigma3-complement" => symbols::sigma3_complement(s),
        "pi" => symbols::pi_symbol(s),
        "pi-tilde" => symbols::pi_tilde_symbol(s),
        "pi1" => {
            let r = need(o.r, "r")?;
            kpforge_core::lab::inequality::check_rst(r, s, s + 1.0)?;
            symbols::pi1_symbol(s, r)
        }
        "pi2" => {
            let t = need(o.t, "t")?;
            kpforge_core::lab::inequality::check_rst(0.0, s, t)?;
            symbols::pi2_symbol(s, t)
        }
        other => return Err(Failure::Other(format!("unknown symbol '{other}'"))),
    })
}

pub fn cm_check(o: &Options) -> Outcome {
    let n = o.n.unwrap_or(1);
    let max_order = o.max_order.unwrap_or(2 * n + 1);
    let sigma = symbol(o, n)?;
    let samples = SampleSpec::default();
    let report = pp::cm_check(&sigma, n, max_order, &samples)?;
    for e in &report.entries {
        println!("alpha {:?} beta {:?}: {:.6e}{}", e.alpha, e.beta, e.constant, if e.stable { "" } else { "  (unstable)" });
    }
    let out = out_path(o, "cm.json");
    write_json(
        &out,
        &json!({
            "symbol": sigma.label(),
            "params": sigma.params(),
            "n": n,
            "max_order": max_order,
            "samples": samples,
            "all_stable": report.all_stable(),
            "entries": report,
        }),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

fn pick_pair<'a>(corpus: &'a Corpus, id: Option<&str>) -> Result<&'a lab::CorpusPair, Failure> {
    match id {
        None => corpus.pairs.first().ok_or_else(|| Failure::Other("corpus is empty".into())),
        Some(id) => corpus.pairs.iter().find(|p| p.id == id).ok_or_else(|| Failure::Other(format!("no pair '{id}' in corpus"))),
    }
}

pub fn decompose(o: &Options) -> Outcome {
    let grid = grid(o, 256)?;
    let (s, m_max, eps) = (o.s.unwrap_or(2.0), o.mmax.unwrap_or(256), o.eps.unwrap_or(0.5));
    let corpus = load_corpus(o, grid.n)?;
    let pair = pick_pair(&corpus, o.pair.as_deref())?;
    let (f, g) = (pair.f.render(&grid)?, pair.g.render(&grid)?);
    let quad = o.quad.unwrap_or_else(|| default_quad(m_max));
    let coeffs = Arc::new(FourierCoefficients::compute(grid.n, s, m_max, quad)?);
    let summary = pp::decompose_ds(&f, &g, coeffs)?.summary(s, m_max);
    let direct = pp::ds_of_product(&f, &g, s)?;
    let (pi, pi_tilde) = pp::pi_split(&f, &g, s)?;
    let split_residual = pp::rel_sup(&pi.add(&pi_tilde)?, &direct);
    let shift = pp::t1_shift_identity_check(&f, &g, s, eps)?;
    println!("three-term residual {:.3e} (complement symbol {:.3e})", summary.relative_residual, summary.complement_relative_residual);
    println!("Pi + Pi~ residual {split_residual:.3e}, shift identity residual {shift:.3e}");
    let out = out_path(o, "decompose.json");
    write_json(
        &out,
        &json!({
            "pair": pair.id,
            "grid": grid,
            "s": s,
            "eps": eps,
            "quad_n": quad,
            "decomposition": summary,
            "pi_split_residual": split_residual,
            "shift_identity_residual": shift,
        }),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn search(o: &Options) -> Outcome {
    let base = SearchConfig::default();
    let config = SearchConfig {
        seed: o.seed.unwrap_or(base.seed),
        s: o.s.unwrap_or(base.s),
        population: o.pop.unwrap_or(base.population),
        iterations: o.iters.unwrap_or(base.iterations),
        packets: o.packets.unwrap_or(base.packets),
        grid: grid(o, base.grid.size)?,
        ..base
    };
    let out = out_path(o, "search.json");
    let results = if o.sweep { run_sweep(&config, &SWEEP_ORDERS)? } else { vec![run_search(&config)?] };
    let mut log = create(&out.with_extension("log.jsonl"))?;
    for r in &results {
        r.write_log(&mut log)?;
        println!(
            "s={}: best ratio {:.6}, at 2N {:.6} (change {:.2e}){}",
            r.config.s,
            r.best_ratio,
            r.refined_ratio,
            r.refinement_change,
            if r.discretization_artifact { "  [discretization artifact]" } else { "" }
        );
    }
    log.flush()?;
    let value = if o.sweep { json!(results) } else { json!(results[0]) };
    write_json(&out, &value)?;
    if let Some(path) = &o.export {
        let mut corpus = results[0].to_corpus();
        for r in &results[1..] {
            corpus.pairs.extend(r.to_corpus().pairs);
        }
        corpus.save(path)?;
        println!("exported best pairs to {}", path.display());
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn field_from_spec(o: &Options, text: &str) -> Result<SpectralField, Failure> {
    let parts: Vec<&str> = text.rsplitn(3, ':').collect();
    let [which, id, source] = parts[..] else {
        return Err(Failure::Other(format!("--spec expects <corpus>:<pair-id>:<f|g>, got '{text}'")));
    };
    let grid = grid(o, 256)?;
    let corpus = if source == "default" { lab::default_corpus(grid.n) } else { Corpus::load(Path::new(source))? };
    let pair = pick_pair(&corpus, Some(id))?;
    let spec = match which {
        "f" => &pair.f,
        "g" => &pair.g,
        _ => return Err(Failure::Other(format!("--spec must end in :f or :g, got '{which}'"))),
    };
    Ok(spec.render(&grid)?)
}

pub fn field(o: &Options) -> Outcome {
    match (&o.load, &o.dump) {
        (Some(load), dump) => {
            let bytes = std::fs::read(load).map_err(|e| Failure::Other(format!("cannot read {}: {e}", load.display())))?;
            let field = kpf::decode(&bytes)?;
            let g = field.grid();
            println!("{}: n={} N={} L={} sup={:.12e}", load.display(), g.n, g.size, g.length, field.max_abs());
            let again = kpf::encode(&field);
            if again != bytes {
                return Err(Failure::Other("re-encoding differs from the file contents".into()));
            }
            println!("round trip: byte-identical");
            if let Some(path) = dump {
                std::fs::write(path, &again).map_err(|e| Failure::Other(format!("cannot write {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        (None, Some(dump)) => {
            let spec = o.spec.as_deref().ok_or_else(|| Failure::Other("field --dump needs --spec".into()))?;
            let field = field_from_spec(o, spec)?;
            let mut w = create(dump)?;
            kpf::write(&field, &mut w)?;
            w.flush()?;
            println!("wrote {}", dump.display());
            Ok(())
        }
        (None, None) => Err(Failure::Other("field needs --dump and/or --load".into())),
    }
}

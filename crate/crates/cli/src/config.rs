//! Run configuration: defaults, then a `key=value` file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;

/// Options shared by every subcommand. All are optional so that a config
/// file can fill the gaps the command line leaves.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Spatial dimension (1 or 2).
    #[arg(long = "n", global = true)]
    pub n: Option<usize>,
    /// Samples per axis (power of two, at least 16).
    #[arg(long = "N", global = true)]
    pub size: Option<usize>,
    /// Box side length.
    #[arg(long = "L", global = true)]
    pub length: Option<f64>,
    /// Inequality id: kpinfty, bgn-besov, bgn-linf, linear-gn, thm13, bmo, weak-l1.
    #[arg(long, global = true)]
    pub ineq: Option<String>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true)]
    pub s: Option<f64>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub p1: Option<f64>,
    #[arg(long, global = true)]
    pub p2: Option<f64>,
    /// `default` or a corpus manifest path.
    #[arg(long, global = true)]
    pub corpus: Option<String>,
    /// Corpus pair id (decompose).
    #[arg(long, global = true)]
    pub pair: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Coefficient truncation `|m| <= mmax`.
    #[arg(long, global = true)]
    pub mmax: Option<usize>,
    /// Quadrature points per axis for the coefficients.
    #[arg(long, global = true)]
    pub quad: Option<usize>,
    #[arg(long, global = true)]
    pub jdepth: Option<u32>,
    /// Dyadic depth of the BMO cubes.
    #[arg(long = "max-depth", global = true)]
    pub max_depth: Option<usize>,
    /// Highest derivative order audited by cm-check.
    #[arg(long = "max-order", global = true)]
    pub max_order: Option<usize>,
    /// Symbol audited by cm-check: sigma1, sigma2, sigma3, sigma3-closed,
    /// sigma3-complement, pi, pi-tilde, pi1, pi2.
    #[arg(long, global = true)]
    pub symbol: Option<String>,
    /// Also evaluate at 2N and report the change.
    #[arg(long, global = true)]
    pub refine: bool,
    /// Run the search at every order of the s-sweep.
    #[arg(long, global = true)]
    pub sweep: bool,
    /// `key=value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub pop: Option<usize>,
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Packets per searched function.
    #[arg(long, global = true)]
    pub packets: Option<usize>,
    /// Write the best search pair as a corpus manifest.
    #[arg(long, global = true)]
    pub export: Option<PathBuf>,
    /// KPF1 file to write.
    #[arg(long, global = true)]
    pub dump: Option<PathBuf>,
    /// KPF1 file to read.
    #[arg(long, global = true)]
    pub load: Option<PathBuf>,
    /// Field source `<corpus>:<pair-id>:<f|g>`.
    #[arg(long, global = true)]
    pub spec: Option<String>,
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("config key '{key}': cannot parse '{v}'"))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, String> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("config key '{key}': expected a boolean, got '{v}'")),
    }
}

impl Options {
    /// Fills every unset option from `file`; flags already given win.
    pub fn merge(&mut self, file: &BTreeMap<String, String>) -> Result<(), String> {
        macro_rules! fill {
            ($field:ident, $v:expr, $key:expr) => {
                if self.$field.is_none() {
                    self.$field = Some(parse($key, $v)?);
                }
            };
        }
        for (key, v) in file {
            let k = key.as_str();
            match k {
                "n" => fill!(n, v, k),
                "N" => fill!(size, v, k),
                "L" => fill!(length, v, k),
                "ineq" => fill!(ineq, v, k),
                "r" => fill!(r, v, k),
                "s" => fill!(s, v, k),
                "t" => fill!(t, v, k),
                "eps" => fill!(eps, v, k),
                "p1" => fill!(p1, v, k),
                "p2" => fill!(p2, v, k),
                "corpus" => fill!(corpus, v, k),
                "pair" => fill!(pair, v, k),
                "out" => fill!(out, v, k),
                "seed" => fill!(seed, v, k),
                "mmax" => fill!(mmax, v, k),
                "quad" => fill!(quad, v, k),
                "jdepth" => fill!(jdepth, v, k),
                "max-depth" => fill!(max_depth, v, k),
                "max-order" => fill!(max_order, v, k),
                "symbol" => fill!(symbol, v, k),
                "pop" => fill!(pop, v, k),
                "iters" => fill!(iters, v, k),
                "packets" => fill!(packets, v, k),
                "export" => fill!(export, v, k),
                "dump" => fill!(dump, v, k),
                "load" => fill!(load, v, k),
                "spec" => fill!(spec, v, k),
                // a flag given on the command line cannot be switched off
                "refine" => self.refine |= parse_bool(k, v)?,
                "sweep" => self.sweep |= parse_bool(k, v)?,
                _ => return Err(format!("unknown config key '{k}'")),
            }
        }
        Ok(())
    }

    pub fn load_config(&mut self) -> Result<(), String> {
        if let Some(path) = self.config.clone() {
            let text = read_text(&path)?;
            self.merge(&parse_config(&text)?)?;
        }
        Ok(())
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

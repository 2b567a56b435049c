//! The default pair corpus and its manifest format.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::function::{Packet, TestFunctionSpec};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::spectral::GridSpec;

pub const DEFAULT_SEED: u64 = 0x4b50_2d4c_6162;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusPair {
    pub id: String,
    pub category: String,
    pub f: TestFunctionSpec,
    pub g: TestFunctionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub n: usize,
    pub pairs: Vec<CorpusPair>,
}

impl Corpus {
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::InvalidParameter("corpus has no pairs".into()));
        }
        if self.n != grid.n {
            return Err(Error::InvalidParameter(format!("corpus is {}-dimensional, grid is {}-dimensional", self.n, grid.n)));
        }
        for p in &self.pairs {
            p.f.validate(grid).and_then(|_| p.g.validate(grid)).map_err(|e| Error::InvalidParameter(format!("pair {}: {e}", p.id)))?;
        }
        Ok(())
    }

    pub fn to_manifest(&self) -> String {
        toml::to_string(self).expect("corpus serializes")
    }

    pub fn from_manifest(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(format!("corpus manifest: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_manifest(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_manifest())?;
        Ok(())
    }
}

struct Builder {
    n: usize,
    rng: SplitMix64,
}

impl Builder {
    /// Packet with modulation `k` along a seeded direction (1D: the axis).
    fn packet(&mut self, a: f64, c: f64, w: f64, k: f64, phi: f64) -> Packet {
        if self.n == 1 {
            return Packet { a, c: vec![c], w, k: vec![k], phi };
        }
        let th = self.rng.uniform_in(0.0, 2.0 * PI);
        let c2 = self.rng.uniform_in(-1.0, 1.0);
        Packet { a, c: vec![c, c2], w, k: vec![k * th.cos(), k * th.sin()], phi }
    }

    fn phase(&mut self) -> f64 {
        self.rng.uniform_in(0.0, 2.0 * PI)
    }
}

/// 24 pairs on a box of side 16: six each of single-frequency,
/// separated-frequency, nested-packet and near-resonant pairs. Every
/// modulation satisfies `|k| <= 2`, so the corpus is valid for `N >= 256`.
pub fn default_corpus(n: usize) -> Corpus {
    let mut b = Builder { n, rng: SplitMix64::new(DEFAULT_SEED) };
    let mut pairs = Vec::with_capacity(24);
    let push = |pairs: &mut Vec<CorpusPair>, cat: &str, f: Vec<Packet>, g: Vec<Packet>| {
        let id = format!("{cat}-{:02}", pairs.iter().filter(|p: &&CorpusPair| p.category == cat).count() + 1);
        pairs.push(CorpusPair { id, category: cat.into(), f: TestFunctionSpec::new(f), g: TestFunctionSpec::new(g) });
    };

    for (k_f, k_g, w) in [(1.0, 1.0, 3.0), (0.5, 0.5, 4.0), (2.0, 2.0, 3.0), (1.0, 1.5, 3.5), (0.25, 1.0, 4.0), (1.5, 0.75, 2.5)] {
        let (pf, pg) = (b.phase(), b.phase());
        let f = vec![b.packet(1.0, 0.0, w, k_f, pf)];
        let g = vec![b.packet(1.0, 0.0, w, k_g, pg)];
        push(&mut pairs, "single", f, g);
    }
    for (k_f, k_g, w_f, w_g, dc) in
        [(0.125, 2.0, 2.0, 1.0, 0.0), (2.0, 0.125, 1.0, 2.0, 0.0), (0.25, 1.75, 1.5, 0.75, 0.5), (0.0, 1.5, 1.0, 1.0, 2.0), (1.75, 0.0, 0.5, 2.0, -1.0), (0.5, 2.0, 3.0, 0.5, 1.0)]
    {
        let (pf, pg) = (b.phase(), b.phase());
        let f = vec![b.packet(1.0, 0.0, w_f, k_f, pf)];
        let g = vec![b.packet(0.7, dc, w_g, k_g, pg)];
        push(&mut pairs, "separated", f, g);
    }
    for count in [2usize, 3, 4, 2, 3, 4] {
        let make = |b: &mut Builder| -> Vec<Packet> {
            let c = b.rng.uniform_in(-2.0, 2.0);
            (0..count)
                .map(|i| {
                    let w = 0.5 * 2f64.powi(i as i32);
                    let k = b.rng.uniform_in(0.0, 2.0);
                    let a = b.rng.uniform_in(0.3, 1.0) * if i % 2 == 0 { 1.0 } else { -1.0 };
                    let phi = b.phase();
                    b.packet(a, c, w.min(4.0), k, phi)
                })
                .collect()
        };
        let f = make(&mut b);
        let g = make(&mut b);
        push(&mut pairs, "nested", f, g);
    }
    for (k, dk, w) in [(1.0, 0.0625, 3.0), (1.5, 0.03125, 4.0), (0.5, 0.0625, 3.0), (2.0, -0.0625, 2.0), (1.0, -0.125, 1.5), (0.75, 0.015625, 4.0)] {
        let (pf, pg) = (b.phase(), b.phase());
        let f = vec![b.packet(1.0, -0.5, w, k, pf), b.packet(0.2, 0.5, w, 2.0 * k.min(1.0), pg)];
        let g = vec![b.packet(1.0, 0.5, w, k + dk, pg)];
        push(&mut pairs, "resonant", f, g);
    }
    Corpus { name: "default".into(), n, pairs }
}

//! Gaussian-packet test functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField};

pub const MAX_PACKETS: usize = 16;

/// `a exp(-|x - c|^2 / (2 w^2)) cos(2 pi k.x + phi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub a: f64,
    pub c: Vec<f64>,
    pub w: f64,
    pub k: Vec<f64>,
    pub phi: f64,
}

impl Packet {
    fn value(&self, x: &[f64]) -> f64 {
        let mut r2 = 0.0;
        let mut dot = 0.0;
        for i in 0..x.len() {
            r2 += (x[i] - self.c[i]).powi(2);
            dot += self.k[i] * x[i];
        }
        self.a * (-r2 / (2.0 * self.w * self.w)).exp() * (2.0 * PI * dot + self.phi).cos()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub packets: Vec<Packet>,
}

impl TestFunctionSpec {
    pub fn new(packets: Vec<Packet>) -> Self {
        Self { packets }
    }

    /// Checks the packet count and the per-packet bounds against `grid`.
    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        let count = self.packets.len();
        if !(1..=MAX_PACKETS).contains(&count) {
            return Err(Error::InvalidParameter(format!("a test function needs 1..={MAX_PACKETS} packets, got {count}")));
        }
        let (l, n) = (grid.length, grid.n);
        let k_max = grid.nyquist() / 4.0;
        for (i, p) in self.packets.iter().enumerate() {
            let bad = |what: String| Err(Error::InvalidParameter(format!("packet {i}: {what}")));
            if p.c.len() != n || p.k.len() != n {
                return bad(format!("center and modulation need {n} components"));
            }
            if !p.a.is_finite() {
                return bad("amplitude must be finite".into());
            }
            if !(p.w >= l / 64.0 && p.w <= l / 4.0) {
                return bad(format!("width {} outside [L/64, L/4] = [{}, {}]", p.w, l / 64.0, l / 4.0));
            }
            if p.c.iter().any(|c| !(*c >= -l / 2.0 && *c < l / 2.0)) {
                return bad(format!("center {:?} outside the box", p.c));
            }
            let k_norm = p.k.iter().map(|k| k * k).sum::<f64>().sqrt();
            if !(k_norm <= k_max) {
                return bad(format!("|k| = {k_norm} exceeds Nyquist/4 = {k_max}"));
            }
            if !(p.phi >= 0.0 && p.phi < 2.0 * PI) {
                return bad(format!("phase {} outside [0, 2 pi)", p.phi));
            }
        }
        Ok(())
    }

    /// Value of the (non-periodic) sum of packets at `x`.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.packets.iter().map(|p| p.value(x)).sum()
    }

    /// Periodization over the box, band-limited to `|m_i| < N/4`.
    pub fn render(&self, grid: &GridSpec) -> Result<SpectralField> {
        self.validate(grid)?;
        let l = grid.length;
        let w_max = self.packets.iter().fold(0.0f64, |m, p| m.max(p.w));
        // images beyond 9 widths contribute below exp(-40)
        let reach = (9.0 * w_max / l).ceil() as i64 + 1;
        let n = grid.n;
        let field = SpectralField::from_fn(*grid, |x| {
            let mut acc = 0.0;
            let mut shifted = [0.0; 2];
            for p0 in -reach..=reach {
                shifted[0] = x[0] + p0 as f64 * l;
                if n == 1 {
                    acc += self.value(&shifted[..1]);
                    continue;
                }
                for p1 in -reach..=reach {
                    shifted[1] = x[1] + p1 as f64 * l;
                    acc += self.value(&shifted[..2]);
                }
            }
            acc
        });
        Ok(field.band_limit(grid.half_band_index()))
    }

    /// Leading 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("plain data");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let packets = self.packets.iter().map(|p| Packet { a: p.a * factor, ..p.clone() }).collect();
        Self { packets }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(c: f64, w: f64, k: f64) -> Packet {
        Packet { a: 1.0, c: vec![c], w, k: vec![k], phi: 0.0 }
    }

    fn grid() -> GridSpec {
        GridSpec::new(1, 256, 16.0).unwrap()
    }

    #[test]
    fn validation_enforces_bounds() {
        let g = grid();
        assert!(TestFunctionSpec::new(vec![packet(0.0, 1.0, 1.0)]).validate(&g).is_ok());
        assert!(TestFunctionSpec::new(vec![]).validate(&g).is_err());
        assert!(TestFunctionSpec::new(vec![packet(0.0, 1.0, 1.0); 17]).validate(&g).is_err());
        assert!(TestFunctionSpec::new(vec![packet(0.0, 0.1, 1.0)]).validate(&g).is_err());
        assert!(TestFunctionSpec::new(vec![packet(0.0, 5.0, 1.0)]).validate(&g).is_err());
        assert!(TestFunctionSpec::new(vec![packet(8.0, 1.0, 1.0)]).validate(&g).is_err());
        // Nyquist is 8, so |k| <= 2
        assert!(TestFunctionSpec::new(vec![packet(0.0, 1.0, 2.5)]).validate(&g).is_err());
        let mut p = packet(0.0, 1.0, 1.0);
        p.phi = 7.0;
        assert!(TestFunctionSpec::new(vec![p]).validate(&g).is_err());
    }

    #[test]
    fn rendering_is_periodic_and_half_band() {
        let g = grid();
        // a packet sitting on the box edge wraps around
        let spec = TestFunctionSpec::new(vec![packet(-7.5, 2.0, 0.5)]);
        let f = spec.render(&g).unwrap();
        assert!(f.is_half_band());
        let x_right = 7.5 + 1.0 - 16.0;
        let idx = ((x_right + 8.0) / g.spacing()).round() as usize;
        let direct = spec.value(&[g.point(idx)[0]]) + spec.value(&[g.point(idx)[0] + 16.0]);
        assert!((f.samples()[idx] - direct).abs() < 1e-9);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = TestFunctionSpec::new(vec![packet(0.0, 1.0, 1.0)]);
        let b = TestFunctionSpec::new(vec![packet(0.0, 1.0, 1.5)]);
        assert_eq!(a.hash(), a.clone().hash());
        assert_eq!(a.hash().len(), 16);
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn two_dimensional_render() {
        let g = GridSpec::new(2, 32, 8.0).unwrap();
        let spec = TestFunctionSpec::new(vec![Packet { a: 2.0, c: vec![0.0, 1.0], w: 1.0, k: vec![0.25, 0.0], phi: 0.0 }]);
        let f = spec.render(&g).unwrap();
        assert!(f.is_half_band());
        assert!(f.max_abs() > 1.0);
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on the box `[-L/2, L/2)^n`.
///
/// Sample `k` (per axis) sits at `x = L*k/N - L/2`; lattice frequencies are
/// `m/L` with `-N/2 <= m < N/2` under the `e^{2 pi i xi.x}` convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(rename = "N")]
    pub size: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

impl GridSpec {
    pub fn new(n: usize, size: usize, length: f64) -> Result<Self> {
        if !(n == 1 || n == 2) {
            return Err(Error::InvalidGrid(format!("dimension {n} not in {{1, 2}}")));
        }
        if !size.is_power_of_two() || size < 16 {
            return Err(Error::InvalidGrid(format!(
                "samples per axis {size} must be a power of two >= 16"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("box length {length} must be positive")));
        }
        Ok(Self { n, size, length })
    }

    /// Total number of samples, `N^n`.
    pub fn len(&self) -> usize {
        self.size.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.size as f64
    }

    /// Volume element `(L/N)^n` of the Riemann sums.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.n as i32)
    }

    /// Per-axis Nyquist frequency `N / (2L)`.
    pub fn nyquist(&self) -> f64 {
        self.size as f64 / (2.0 * self.length)
    }

    /// Largest lattice frequency magnitude (the corner in 2D).
    pub fn max_frequency(&self) -> f64 {
        (self.n as f64).sqrt() * self.nyquist()
    }

    /// Same box, twice the samples per axis.
    pub fn refined(&self) -> Self {
        Self { size: self.size * 2, ..*self }
    }

    /// Signed lattice index of FFT bin `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        let k = k as i64;
        let n = self.size as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// FFT bin of a signed lattice index, if it lies on the lattice.
    pub fn bin(&self, m: i64) -> Option<usize> {
        let half = self.size as i64 / 2;
        if (-half..half).contains(&m) {
            Some(m.rem_euclid(self.size as i64) as usize)
        } else {
            None
        }
    }

    /// Signed lattice multi-index of a flat (row-major) position.
    pub fn multi_index(&self, flat: usize) -> [i64; 2] {
        match self.n {
            1 => [self.signed_index(flat), 0],
            _ => [
                self.signed_index(flat / self.size),
                self.signed_index(flat % self.size),
            ],
        }
    }

    /// Flat position of a signed multi-index, if it lies on the lattice.
    pub fn flat_of(&self, m: [i64; 2]) -> Option<usize> {
        match self.n {
            1 => self.bin(m[0]),
            _ => Some(self.bin(m[0])? * self.size + self.bin(m[1])?),
        }
    }

    /// Wave vector of a flat position (second component is zero in 1D).
    pub fn wavevector(&self, flat: usize) -> [f64; 2] {
        let m = self.multi_index(flat);
        [m[0] as f64 / self.length, m[1] as f64 / self.length]
    }

    /// `|xi|` for every flat position.
    pub fn frequency_norms(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| {
                let v = self.wavevector(k);
                v[0].hypot(v[1])
            })
            .collect()
    }

    /// Physical coordinates of a flat sample position.
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let h = self.spacing();
        let c = |k: usize| k as f64 * h - self.length / 2.0;
        match self.n {
            1 => [c(flat), 0.0],
            _ => [c(flat / self.size), c(flat % self.size)],
        }
    }

    /// Lowest Littlewood-Paley index kept: the annulus of `Delta_{j_min}`
    /// misses every nonzero lattice frequency.
    pub fn j_min(&self) -> i32 {
        (1.0 / self.length).log2().ceil() as i32 - 1
    }

    /// Highest Littlewood-Paley index kept: `Phi(2^{-j_max} xi) = 1` on the
    /// whole lattice.
    pub fn j_max(&self) -> i32 {
        self.max_frequency().log2().floor() as i32 + 1
    }

    pub fn j_range(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min()..=self.j_max()
    }

    /// Whether `Delta_j` can be nonzero on this lattice.
    pub fn is_resolvable(&self, j: i32) -> bool {
        self.j_range().contains(&j)
    }

    /// Largest per-axis index magnitude allowed for a factor of a product
    /// that must not lose output frequencies: `|m_i| < N/4`.
    pub fn half_band_index(&self) -> i64 {
        self.size as i64 / 4
    }
}

use std::sync::OnceLock;

use num_complex::Complex64;

use super::bump::{self, dyadic};
use super::fft;
use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Real samples on a [`GridSpec`] with a lazily cached spectrum.
///
/// The spectrum is indexed like the FFT output (row-major bins) and
/// normalized so that the samples are `f_k = sum_m F_m e^{2 pi i m.k/N}`.
/// Multipliers that depend on `|xi|` only never see the `(-1)^m` phase that
/// the box offset `-L/2` would introduce, and bilinear symbols act by
/// convolution, which is blind to it as well.
#[derive(Debug)]
pub struct SpectralField {
    grid: GridSpec,
    samples: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Clone for SpectralField {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        Self { grid: self.grid, samples: self.samples.clone(), spectrum }
    }
}

impl SpectralField {
    pub fn from_samples(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        Ok(Self { grid, samples, spectrum: OnceLock::new() })
    }

    /// Samples a function of the physical coordinates (`x[1]` is 0 in 1D).
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let samples = (0..grid.len())
            .map(|k| {
                let p = grid.point(k);
                f(&p[..grid.n])
            })
            .collect();
        Self { grid, samples, spectrum: OnceLock::new() }
    }

    /// Builds a real field from spectral data, keeping the Hermitian part.
    pub fn from_spectrum(grid: GridSpec, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                spectrum.len()
            )));
        }
        let herm = hermitian_part(&grid, &spectrum);
        let samples = fft::inverse(&herm, grid.n, grid.size).into_iter().map(|z| z.re).collect();
        let cache = OnceLock::new();
        let _ = cache.set(herm);
        Ok(Self { grid, samples, spectrum: cache })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, samples: vec![0.0; grid.len()], spectrum: OnceLock::new() }
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        Self { grid, samples: vec![c; grid.len()], spectrum: OnceLock::new() }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| fft::forward(&self.samples, self.grid.n, self.grid.size))
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_samples(self.grid, self.samples.iter().map(|&x| f(x)).collect())
            .expect("same length")
    }

    /// `c * self`; a cached spectrum is scaled along with the samples.
    pub fn scale(&self, c: f64) -> Self {
        let spectrum = OnceLock::new();
        if let Some(z) = self.spectrum.get() {
            let _ = spectrum.set(z.iter().map(|v| v * c).collect());
        }
        Self { grid: self.grid, samples: self.samples.iter().map(|x| c * x).collect(), spectrum }
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_grid(other)?;
        let s = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Self::from_samples(self.grid, s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    /// `a*self + b*other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.zip(other, |x, y| a * x + b * y)
    }

    /// Largest absolute sample.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Multiplies the spectrum by a real function of the wave vector.
    pub fn apply_multiplier(&self, m: impl Fn(&[f64]) -> f64) -> Self {
        let grid = self.grid;
        let out: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(k, &z)| {
                let w = m(&grid.wavevector(k)[..grid.n]);
                if w == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * w
                }
            })
            .collect();
        Self::from_spectrum(grid, out).expect("same length")
    }

    /// Multiplies the spectrum by a function of `|xi|`.
    pub fn apply_radial(&self, m: impl Fn(f64) -> f64) -> Self {
        self.apply_multiplier(|xi| m(bump::norm(xi)))
    }

    /// `D^s`, the multiplier `|xi|^s` (`D^0` is the identity).
    pub fn fractional_derivative(&self, s: f64) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("derivative order {s} must be >= 0")));
        }
        if s == 0.0 {
            return Ok(self.clone());
        }
        Ok(self.apply_radial(|rho| bump::power(rho, s)))
    }

    /// Littlewood-Paley block `Delta_j`, symbol `Psi(2^{-j} xi)`.
    ///
    /// Indices outside [`GridSpec::j_range`] are accepted; the result is
    /// then the zero field or a block cut off at Nyquist.
    pub fn lp_block(&self, j: i32) -> Self {
        let scale = dyadic(-j);
        self.apply_radial(|rho| bump::psi(rho * scale))
    }

    /// Low-pass `S_j`, symbol `Phi(2^{-j} xi)`.
    pub fn lowpass(&self, j: i32) -> Self {
        let scale = dyadic(-j);
        self.apply_radial(|rho| bump::phi(rho * scale))
    }

    /// Zeroes every coefficient with some `|m_i| >= max_index`.
    pub fn band_limit(&self, max_index: i64) -> Self {
        let grid = self.grid;
        let out: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(k, &z)| {
                let m = grid.multi_index(k);
                if m[..grid.n].iter().all(|c| c.abs() < max_index) {
                    z
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::from_spectrum(grid, out).expect("same length")
    }

    /// Largest coefficient magnitude whose multi-index has some
    /// `|m_i| >= max_index`, relative to the largest coefficient overall.
    pub fn out_of_band(&self, max_index: i64) -> f64 {
        let grid = self.grid;
        let spec = self.spectrum();
        let total = spec.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if total == 0.0 {
            return 0.0;
        }
        let outside = spec
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let m = grid.multi_index(*k);
                m[..grid.n].iter().any(|c| c.abs() >= max_index)
            })
            .fold(0.0f64, |m, (_, z)| m.max(z.norm()));
        outside / total
    }

    /// Whether all spectral content sits in `|m_i| < N/4`, so that products
    /// of two such fields lose nothing past Nyquist.
    pub fn is_half_band(&self) -> bool {
        self.out_of_band(self.grid.half_band_index()) <= HALF_BAND_TOL
    }

    /// Dyadic dilation `f(2^{j0} x)` on the same grid.
    ///
    /// For `j0 >= 0` the samples are re-indexed (`x -> 2^{j0} x mod L`),
    /// which requires the spectrum to sit in `|m_i| < N / 2^{j0+1}`. For
    /// `j0 < 0` the spectrum must live on multiples of `2^{-j0}`; each
    /// coefficient is moved from `xi` to `2^{j0} xi`.
    pub fn dilate(&self, j0: i32) -> Result<Self> {
        let grid = self.grid;
        let n = grid.size as i64;
        if j0 >= 0 {
            if j0 as u32 >= grid.size.trailing_zeros() {
                return Err(Error::Aliasing(format!("dilation 2^{j0} exceeds the grid")));
            }
            let lam = 1i64 << j0;
            let band = n / (2 * lam);
            if self.out_of_band(band) > ALIAS_TOL {
                return Err(Error::Aliasing(format!(
                    "spectrum extends past Nyquist/2^{j0}; dilation would alias"
                )));
            }
            let remap = |k: usize| ((lam * (k as i64 - n / 2) + n / 2).rem_euclid(n)) as usize;
            let samples = (0..grid.len())
                .map(|flat| match grid.n {
                    1 => self.samples[remap(flat)],
                    _ => {
                        let (a, b) = (flat / grid.size, flat % grid.size);
                        self.samples[remap(a) * grid.size + remap(b)]
                    }
                })
                .collect();
            Self::from_samples(grid, samples)
        } else {
            let lam = 1i64 << (-j0);
            let spec = self.spectrum();
            let total = spec.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
            for (k, &z) in spec.iter().enumerate() {
                let m = grid.multi_index(k);
                let divisible = m[..grid.n].iter().all(|c| c % lam == 0);
                if !divisible {
                    if z.norm() > ALIAS_TOL * total {
                        return Err(Error::Aliasing(format!(
                            "field is not {}-periodic in the box; 2^{j0} dilation leaves the torus",
                            grid.length / lam as f64
                        )));
                    }
                    continue;
                }
                let target = [m[0] / lam, m[1] / lam];
                if let Some(t) = grid.flat_of(target) {
                    // bins carry a (-1)^m phase from the box offset -L/2
                    let flips = target[..grid.n].iter().filter(|c| c.rem_euclid(2) == 1).count();
                    out[t] = if flips % 2 == 1 { -z } else { z };
                }
            }
            Self::from_spectrum(grid, out)
        }
    }

    /// Exact dyadic dilation onto the box of side `L / 2^{j0}`: the samples
    /// are unchanged and the lattice is scaled by `2^{j0}`.
    pub fn dilate_rescaled(&self, j0: i32) -> Self {
        let grid = GridSpec { length: self.grid.length * dyadic(-j0), ..self.grid };
        Self { grid, samples: self.samples.clone(), spectrum: self.spectrum.clone() }
    }

    /// Same physical function re-sampled on another grid with the same box,
    /// by zero-padding or truncating the spectrum.
    pub fn resample(&self, target: GridSpec) -> Result<Self> {
        if target.n != self.grid.n || target.length != self.grid.length {
            return Err(Error::GridMismatch);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); target.len()];
        for (k, &z) in self.spectrum().iter().enumerate() {
            if let Some(t) = target.flat_of(self.grid.multi_index(k)) {
                out[t] = z;
            }
        }
        Self::from_spectrum(target, out)
    }
}

/// Relative level below which out-of-band content counts as absent.
pub const HALF_BAND_TOL: f64 = 1e-12;
const ALIAS_TOL: f64 = 1e-12;

/// `(F_m + conj(F_{-m})) / 2`; the Nyquist row is its own mirror.
fn hermitian_part(grid: &GridSpec, spec: &[Complex64]) -> Vec<Complex64> {
    let n = grid.size;
    let mirror = |k: usize| (n - k) % n;
    (0..spec.len())
        .map(|flat| {
            let partner = match grid.n {
                1 => mirror(flat),
                _ => mirror(flat / n) * n + mirror(flat % n),
            };
            (spec[flat] + spec[partner].conj()) * 0.5
        })
        .collect()
}

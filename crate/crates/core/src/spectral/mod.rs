//! Discrete torus, transforms, the bump pair and linear frequency multipliers.

pub mod bump;
pub mod fft;
mod field;
mod grid;
pub mod kpf;
pub mod transform;

pub use bump::BumpFamily;
pub use field::{SpectralField, HALF_BAND_TOL};
pub use grid::GridSpec;

/// `S_{j_min} h + sum_{j_min < j <= j_max} Delta_j h`, which telescopes to
/// `S_{j_max} h = h` on the lattice.
pub fn reconstruct(field: &SpectralField) -> SpectralField {
    let g = *field.grid();
    let mut acc = field.lowpass(g.j_min());
    for j in (g.j_min() + 1)..=g.j_max() {
        acc = acc.add(&field.lp_block(j)).expect("same grid");
    }
    acc
}

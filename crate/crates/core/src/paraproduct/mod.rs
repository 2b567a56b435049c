//! Bilinear symbols, paraproduct splittings, the Fourier coefficients of
//! `Phi_{(s)}`, the kernel of `Pi_1` and the Coifman-Meyer audit.

mod bilinear;
pub mod cm;
pub mod coeffs;
mod kernel;
pub mod symbols;

pub use bilinear::{
    apply_bilinear_symbol, check_half_band, decompose_ds, ds_of_product, pi1_pi2, pi_split, rel_sup,
    t1_shift_identity_check, Decomposition, DecompositionSummary,
};
pub use cm::{cm_check, CmEntry, CmReport, SampleSpec};
pub use coeffs::{coeff_decay_fit, DecayFit, FourierCoefficients};
pub use kernel::KernelK1;
pub use symbols::{SymbolParams, SymbolSpec};

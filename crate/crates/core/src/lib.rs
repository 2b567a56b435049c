//! Spectral laboratory for endpoint Kato-Ponce (fractional Leibniz)
//! inequalities on the discrete torus.

pub mod error;
pub mod lab;
pub mod norms;
pub mod paraproduct;
pub mod rng;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{GridSpec, SpectralField};

//! Paley–Wiener spaces of discrete entire functions on ℤ².
//!
//! [`lattice`] holds the discrete complex analysis, [`spectral`] the Fourier
//! side (synthesis, projection, kernel) and [`sampling`] the nonuniform
//! sampling and iterative reconstruction.

pub mod band;
pub mod error;
mod fft;
pub mod lattice;
pub mod quadrature;
pub mod sampling;
pub mod spectral;
pub mod testfns;

pub use band::{BandParameters, TorusGrid};
pub use error::{Error, Parity, Result};
pub use lattice::{GridFunction, LatticePoint, Window};
pub use sampling::{ReconstructionReport, SamplingSet};
pub use spectral::{PWFunction, SpectralFunction};

//! Reconstruction of complex potentials of the one-dimensional Schrodinger
//! equation `-y'' + q y = rho^2 y` on `[0, L]` from boundary spectral data,
//! using Neumann series of Bessel functions.
//!
//! Everything is generic over the real scalar; the aliases below fix it to
//! `f64`.

pub mod error;
pub mod forward_oracle;
pub mod inverse_engine;
pub mod nsbf_model;
pub mod numeric_kernel;
pub mod potentials;
pub mod problem_adapters;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Complex = Cx<f64>;
pub type Potential = forward_oracle::PotentialSpec<f64>;
pub type Tolerance = forward_oracle::OdeTolerance<f64>;
pub type Sample = forward_oracle::SpectralSample<f64>;
pub type Endpoint = nsbf_model::EndpointCoefficients<f64>;
pub type Local = nsbf_model::LocalCoefficients<f64>;
pub type Config = inverse_engine::InverseConfig<f64>;
pub type Reconstruction = inverse_engine::Reconstruction<f64>;
pub type Reconstructed = inverse_engine::ReconstructionResult<f64>;
pub type SolverOptions = numeric_kernel::LstsqOptions<f64>;
pub type TwoSpectra = problem_adapters::TwoSpectraData<f64>;

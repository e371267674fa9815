//! Two-stage reconstruction: endpoint coefficients from the spectral data,
//! synthetic characteristic values on a gamma grid, one least-squares solve
//! per interior point, then recovery of `q`.

mod diagnostics;
mod first_system;
mod gamma;
mod main_system;
mod pipeline;
mod profile;
mod recovery;

pub use diagnostics::{Diagnostics, PointDiagnostics, SolveDiagnostics};
pub use first_system::{
    assemble_first_system, duplicate_samples, min_samples, recover_endpoint_values, solve_first_system,
    StepOneValues,
};
pub use gamma::{make_gamma_grid, synthesize_characteristics, CharacteristicSamples, GammaDistribution, GammaGrid};
pub use main_system::{assemble_main_system, main_unknowns};
pub use pipeline::{interior_grid, reconstruct, InverseConfig, Reconstruction};
pub use profile::{solve_profile, Profile, DEFAULT_MIN_SUCCESS};
pub use recovery::{differentiate, recover_potential, ReconstructionResult, RecoveryOption};

//! Independent forward solver: direct ODE integration of the equation for
//! data generation and validation.

mod dop853_tableau;
mod eigen;
mod integrator;
mod potential;
mod quadrature;
mod scattering;
mod seed;
mod solve;

pub use eigen::{characteristic, find_real_eigenvalues, shift_spectrum, LeftBoundary};
pub use integrator::OdeTolerance;
pub use potential::{PotentialSpec, Smoothness};
pub use quadrature::{gauss_legendre, integrate_potential, omega};
pub use scattering::{scattering_coefficients, weyl_function};
pub use seed::{seed_check_on, seed_check, SeedCheck};
pub use solve::{
    generate_problem_data, integrate_solution, phi_s_at_l, terminal_solution, EndpointValues, SolutionTrace,
    SpectralSample, LOW_FREQUENCY_FLOOR,
};

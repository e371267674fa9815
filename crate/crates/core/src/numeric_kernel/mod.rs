//! Special functions and dense linear algebra shared by the forward oracle,
//! the series model and the inverse engine.

mod bessel;
mod combos;
mod lstsq;

pub use bessel::{
    spherical_bessel_j, spherical_bessel_j_capped, spherical_bessel_sequence, DEFAULT_ORDER_CAP,
};
pub use combos::{combo_c1, combo_c2};
pub use lstsq::{lstsq_solve, DenseSystem, LstsqMethod, LstsqOptions, LstsqSolution};


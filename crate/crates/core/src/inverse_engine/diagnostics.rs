use serde::{Deserialize, Serialize};

use crate::numeric_kernel::LstsqSolution;
use crate::scalar::Real;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub residual_norm: f64,
    pub relative_residual: f64,
    pub effective_rank: usize,
    pub unknowns: usize,
    /// Ratio of extreme retained singular values of the equilibrated matrix.
    pub condition: Option<f64>,
}

impl SolveDiagnostics {
    pub fn from_solution<T: Real>(sol: &LstsqSolution<T>) -> Self {
        let cond = sol.condition().as_f64();
        Self {
            residual_norm: sol.residual_norm.as_f64(),
            relative_residual: sol.relative_residual().as_f64(),
            effective_rank: sol.effective_rank,
            unknowns: sol.x.len(),
            condition: cond.is_finite().then_some(cond),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    pub x: f64,
    pub solve: Option<SolveDiagnostics>,
    /// Set when the solve failed and the point was filled from neighbours.
    pub interpolated: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub samples: usize,
    pub duplicate_samples: usize,
    pub n_first: usize,
    pub n_main: usize,
    pub first_step: SolveDiagnostics,
    pub gamma_points: usize,
    pub gamma_removed: usize,
    pub failed_points: usize,
    pub max_relative_residual: f64,
    pub profile: Vec<PointDiagnostics>,
    pub warnings: Vec<String>,
}

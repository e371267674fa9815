use super::diagnostics::{Diagnostics, SolveDiagnostics};
use super::first_system::{duplicate_samples, min_samples, solve_first_system, StepOneValues};
use super::gamma::{make_gamma_grid, synthesize_characteristics, GammaDistribution, GammaGrid};
use super::main_system::main_unknowns;
use super::profile::{solve_profile, Profile, DEFAULT_MIN_SUCCESS};
use super::recovery::{recover_potential, ReconstructionResult, RecoveryOption};
use crate::error::{invalid, Result};
use crate::forward_oracle::SpectralSample;
use crate::nsbf_model::EndpointCoefficients;
use crate::numeric_kernel::LstsqOptions;
use crate::scalar::{Cx, Real};

#[derive(Clone, Debug)]
pub struct InverseConfig<T: Real> {
    /// Truncation order of the first system; when unset, the main order
    /// capped by the sample count (`K >= 2N + 3`).
    pub n_first: Option<usize>,
    pub n_main: usize,
    pub gamma_count: usize,
    pub gamma_min: T,
    pub gamma_max: T,
    pub distribution: GammaDistribution,
    /// Explicit gamma points; overrides count, range and distribution.
    pub custom_gamma: Option<Vec<Cx<T>>>,
    pub first_solver: LstsqOptions<T>,
    pub main_solver: LstsqOptions<T>,
    /// Total grid size including both endpoints.
    pub grid_points: usize,
    pub min_success: f64,
}

impl<T: Real> Default for InverseConfig<T> {
    fn default() -> Self {
        Self {
            n_first: None,
            n_main: 12,
            gamma_count: 700,
            gamma_min: T::of(0.1),
            gamma_max: T::of(1500.0),
            distribution: GammaDistribution::LogUniform,
            custom_gamma: None,
            first_solver: LstsqOptions::pivoted(T::of(1e-12)),
            main_solver: LstsqOptions::pivoted(T::of(1e-12)),
            grid_points: 203,
            min_success: DEFAULT_MIN_SUCCESS,
        }
    }
}

impl<T: Real> InverseConfig<T> {
    pub fn with_order(n: usize) -> Self {
        Self {
            n_first: Some(n),
            n_main: n,
            ..Self::default()
        }
    }

    pub fn first_order(&self, samples: usize) -> usize {
        self.n_first
            .unwrap_or_else(|| self.n_main.min(samples.saturating_sub(3) / 2))
    }
}

/// Uniform interior points of a grid with `total` points on `[0, L]`.
pub fn interior_grid<T: Real>(length: T, total: usize) -> Vec<T> {
    let h = length / T::of_usize(total - 1);
    (1..total - 1).map(|i| h * T::of_usize(i)).collect()
}

/// Everything the two-stage solve produced; [`Reconstruction::recover`]
/// turns it into a potential for either recovery option.
#[derive(Clone, Debug)]
pub struct Reconstruction<T: Real> {
    pub length: T,
    pub endpoint: EndpointCoefficients<T>,
    pub step1: StepOneValues<T>,
    pub grid: GammaGrid<T>,
    pub profile: Profile<T>,
    pub diagnostics: Diagnostics,
    first_residual: T,
}

pub fn reconstruct<T: Real>(
    samples: &[SpectralSample<T>],
    length: T,
    cfg: &InverseConfig<T>,
) -> Result<Reconstruction<T>> {
    if cfg.grid_points < 9 {
        return Err(invalid("x grid needs at least 9 points"));
    }
    let n_first = cfg.first_order(samples.len());
    if n_first == 0 {
        return Err(invalid(format!(
            "{} samples cannot support any truncation order (need at least {})",
            samples.len(),
            min_samples(1)
        )));
    }
    let (endpoint, first) = solve_first_system(samples, length, n_first, cfg.first_solver)?;
    let step1 = StepOneValues::from_coefficients(&endpoint);

    let grid = match &cfg.custom_gamma {
        Some(points) => GammaGrid::custom(points.clone())?,
        None => make_gamma_grid(cfg.gamma_count, cfg.gamma_min, cfg.gamma_max, cfg.distribution)?,
    };
    if grid.len() < main_unknowns(cfg.n_main) {
        return Err(invalid(format!(
            "gamma grid has {} points but the main system needs at least {}",
            grid.len(),
            main_unknowns(cfg.n_main)
        )));
    }
    let cs = synthesize_characteristics(&endpoint, &grid)?;
    let xs = interior_grid(length, cfg.grid_points);
    let profile = solve_profile(length, &cs, &step1, &xs, cfg.n_main, cfg.main_solver, cfg.min_success)?;

    let mut warnings = Vec::new();
    let duplicates = duplicate_samples(samples);
    if duplicates > 0 {
        warnings.push(format!("{duplicates} duplicate spectral samples"));
    }
    if grid.removed > 0 {
        warnings.push(format!("{} near-duplicate gamma points removed", grid.removed));
    }
    let failed = profile.failed();
    if failed > 0 {
        warnings.push(format!("{failed} grid points filled by interpolation"));
    }
    let max_rel = profile
        .diagnostics
        .iter()
        .filter_map(|d| d.solve.as_ref().map(|s| s.relative_residual))
        .fold(0.0, f64::max);
    let diagnostics = Diagnostics {
        samples: samples.len(),
        duplicate_samples: duplicates,
        n_first,
        n_main: cfg.n_main,
        first_step: SolveDiagnostics::from_solution(&first),
        gamma_points: grid.len(),
        gamma_removed: grid.removed,
        failed_points: failed,
        max_relative_residual: max_rel,
        profile: profile.diagnostics.clone(),
        warnings,
    };
    Ok(Reconstruction {
        length,
        endpoint,
        step1,
        grid,
        profile,
        diagnostics,
        first_residual: first.relative_residual(),
    })
}

impl<T: Real> Reconstruction<T> {
    pub fn recover(&self, option: RecoveryOption) -> Result<ReconstructionResult<T>> {
        let residuals: Vec<T> = self
            .profile
            .diagnostics
            .iter()
            .map(|d| d.solve.as_ref().map_or(T::nan(), |s| T::of(s.relative_residual)))
            .collect();
        recover_potential(
            self.length,
            &self.profile.points,
            &self.step1,
            self.first_residual,
            &residuals,
            option,
            self.diagnostics.clone(),
        )
    }
}

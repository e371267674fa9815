use rayon::prelude::*;

use super::diagnostics::{PointDiagnostics, SolveDiagnostics};
use super::first_system::StepOneValues;
use super::gamma::CharacteristicSamples;
use super::main_system::assemble_main_system;
use crate::error::{invalid, Error, Result};
use crate::nsbf_model::LocalCoefficients;
use crate::numeric_kernel::{lstsq_solve, LstsqOptions};
use crate::scalar::{is_finite, Cx, Real};

/// Local coefficients on the interior grid with per-point diagnostics.
#[derive(Clone, Debug)]
pub struct Profile<T: Real> {
    pub points: Vec<LocalCoefficients<T>>,
    pub diagnostics: Vec<PointDiagnostics>,
}

impl<T: Real> Profile<T> {
    pub fn failed(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.interpolated).count()
    }
}

/// Smallest fraction of per-point solves that must succeed.
pub const DEFAULT_MIN_SUCCESS: f64 = 0.9;

fn solve_point<T: Real>(
    x: T,
    length: T,
    cs: &CharacteristicSamples<T>,
    step1: &StepOneValues<T>,
    n: usize,
    solver: LstsqOptions<T>,
) -> Result<(LocalCoefficients<T>, SolveDiagnostics)> {
    let sys = assemble_main_system(x, length, cs, step1, n)?;
    let sol = lstsq_solve(&sys, solver)?;
    if !sol.x.iter().all(|&z| is_finite(z)) {
        return Err(Error::DegenerateSystem(format!("non-finite solution at x = {x}")));
    }
    let v = &sol.x;
    let local = LocalCoefficients {
        x,
        omega: v[0],
        q_big: v[1],
        phi_n: v[2..2 + n].to_vec(),
        sigma_n: v[2 + n..2 + 2 * n].to_vec(),
        theta_n: v[2 + 2 * n..2 + 3 * n].to_vec(),
    };
    Ok((local, SolveDiagnostics::from_solution(&sol)))
}

/// Solves the main system at every interior point of `x_grid` (in parallel,
/// order preserved). Failed points are filled by cubic interpolation from
/// the nearest successful neighbours, provided at least `min_success` of the
/// solves succeed.
pub fn solve_profile<T: Real>(
    length: T,
    cs: &CharacteristicSamples<T>,
    step1: &StepOneValues<T>,
    x_grid: &[T],
    n: usize,
    solver: LstsqOptions<T>,
    min_success: f64,
) -> Result<Profile<T>> {
    if x_grid.is_empty() {
        return Err(invalid("profile grid is empty"));
    }
    if x_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("profile grid must be strictly increasing"));
    }
    if !(x_grid[0] > T::zero() && x_grid[x_grid.len() - 1] < length) {
        return Err(invalid("profile grid must be strictly interior"));
    }
    let outcomes: Vec<Result<(LocalCoefficients<T>, SolveDiagnostics)>> = x_grid
        .par_iter()
        .map(|&x| solve_point(x, length, cs, step1, n, solver))
        .collect();

    let total = outcomes.len();
    let ok: Vec<usize> = (0..total).filter(|&i| outcomes[i].is_ok()).collect();
    let failed = total - ok.len();
    let enough = (ok.len() as f64) >= min_success * total as f64;
    if !enough || (failed > 0 && ok.len() < 4) {
        return Err(Error::ProfileFailure { failed, total });
    }

    let mut points: Vec<Option<LocalCoefficients<T>>> = Vec::with_capacity(total);
    let mut diagnostics = Vec::with_capacity(total);
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let x = x_grid[i].as_f64();
        match outcome {
            Ok((p, d)) => {
                points.push(Some(p));
                diagnostics.push(PointDiagnostics { x, solve: Some(d), interpolated: false, error: None });
            }
            Err(e) => {
                log::warn!("main system failed at x = {x}: {e}");
                points.push(None);
                diagnostics.push(PointDiagnostics { x, solve: None, interpolated: true, error: Some(e.to_string()) });
            }
        }
    }
    let filled: Vec<LocalCoefficients<T>> = (0..total)
        .map(|i| match &points[i] {
            Some(p) => p.clone(),
            None => interpolate_point(x_grid, &points, &ok, i),
        })
        .collect();
    Ok(Profile { points: filled, diagnostics })
}

fn interpolate_point<T: Real>(
    xs: &[T],
    points: &[Option<LocalCoefficients<T>>],
    ok: &[usize],
    i: usize,
) -> LocalCoefficients<T> {
    // Four successful neighbours closest in index.
    let mut near: Vec<usize> = ok.to_vec();
    near.sort_by_key(|&j| j.abs_diff(i));
    near.truncate(4);
    near.sort_unstable();
    let x = xs[i];
    let weights: Vec<T> = near
        .iter()
        .map(|&j| {
            near.iter()
                .filter(|&&m| m != j)
                .fold(T::one(), |w, &m| w * (x - xs[m]) / (xs[j] - xs[m]))
        })
        .collect();
    let get = |j: usize| points[j].as_ref().expect("neighbour solved");
    let mix = |f: &dyn Fn(&LocalCoefficients<T>) -> Cx<T>| {
        near.iter().zip(&weights).fold(Cx::new(T::zero(), T::zero()), |acc, (&j, &w)| acc + f(get(j)) * w)
    };
    let mix_vec = |f: &dyn Fn(&LocalCoefficients<T>) -> &Vec<Cx<T>>| {
        let len = f(get(near[0])).len();
        (0..len).map(|k| mix(&|p| f(p)[k])).collect::<Vec<_>>()
    };
    LocalCoefficients {
        x,
        omega: mix(&|p| p.omega),
        q_big: mix(&|p| p.q_big),
        phi_n: mix_vec(&|p| &p.phi_n),
        sigma_n: mix_vec(&|p| &p.sigma_n),
        theta_n: mix_vec(&|p| &p.theta_n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn interpolation_reproduces_cubic_profile() {
        let xs: Vec<f64> = (1..=9).map(|i| i as f64 * 0.1).collect();
        let f = |x: f64| cx(x * x * x - x, 2.0 * x * x);
        let points: Vec<Option<LocalCoefficients<f64>>> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                (i != 4).then(|| LocalCoefficients {
                    x,
                    omega: f(x),
                    q_big: f(x) * 2.0,
                    phi_n: vec![f(x)],
                    sigma_n: vec![],
                    theta_n: vec![f(x) * 3.0],
                })
            })
            .collect();
        let ok: Vec<usize> = (0..9).filter(|&i| i != 4).collect();
        let p = interpolate_point(&xs, &points, &ok, 4);
        assert!((p.omega - f(0.5)).norm() < 1e-14);
        assert!((p.theta_n[0] - f(0.5) * 3.0).norm() < 1e-14);
    }
}

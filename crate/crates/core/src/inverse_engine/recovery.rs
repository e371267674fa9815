use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::diagnostics::Diagnostics;
use super::first_system::StepOneValues;
use crate::error::{invalid, Result};
use crate::nsbf_model::LocalCoefficients;
use crate::scalar::{Cx, Real};

/// How `q` is obtained from the main-system solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryOption {
    /// `q = 2 omega'` by finite differences.
    Derivative,
    /// `q = 4 Q + 2 omega^2`.
    Algebraic,
}

impl RecoveryOption {
    pub fn label(self) -> &'static str {
        match self {
            Self::Derivative => "option1",
            Self::Algebraic => "option2",
        }
    }
}

/// Recovered potential on the full grid `[0, x_1, ..., L]`.
#[derive(Clone, Debug)]
pub struct ReconstructionResult<T: Real> {
    pub option: RecoveryOption,
    pub x_grid: Vec<T>,
    pub q_hat: Vec<Cx<T>>,
    pub omega_hat: Vec<Cx<T>>,
    pub q_big_hat: Vec<Cx<T>>,
    /// Relative least-squares residual at each grid point (step one at the ends).
    pub residual: Vec<T>,
    pub q0_hat: Cx<T>,
    pub ql_hat: Cx<T>,
    pub omegal_hat: Cx<T>,
    pub diagnostics: Diagnostics,
}

const MIN_GRID: usize = 9;

/// Derivative weights at `x0` of the Lagrange interpolant through `nodes`.
fn derivative_weights<T: Real>(nodes: &[T], x0: T) -> Vec<T> {
    let n = nodes.len();
    (0..n)
        .map(|j| {
            let mut total = T::zero();
            for m in (0..n).filter(|&m| m != j) {
                let mut prod = T::one() / (nodes[j] - nodes[m]);
                for l in (0..n).filter(|&l| l != j && l != m) {
                    prod = prod * (x0 - nodes[l]) / (nodes[j] - nodes[l]);
                }
                total = total + prod;
            }
            total
        })
        .collect()
}

/// First derivative at the interior nodes: centered five-point windows,
/// shifted one-sided windows next to the ends.
pub fn differentiate<T: Real>(xs: &[T], ys: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    let n = xs.len();
    if n < 5 || ys.len() != n {
        return Err(invalid("differentiation needs at least 5 matching samples"));
    }
    let mut out = vec![Cx::new(T::zero(), T::zero()); n];
    for (i, slot) in out.iter_mut().enumerate().take(n - 1).skip(1) {
        let start = i.saturating_sub(2).min(n - 5);
        let w = derivative_weights(&xs[start..start + 5], xs[i]);
        *slot = w.iter().zip(&ys[start..start + 5]).fold(Cx::new(T::zero(), T::zero()), |acc, (&w, &y)| acc + y * w);
    }
    Ok(out)
}

pub fn recover_potential<T: Real>(
    length: T,
    profile: &[LocalCoefficients<T>],
    step1: &StepOneValues<T>,
    first_residual: T,
    point_residuals: &[T],
    option: RecoveryOption,
    diagnostics: Diagnostics,
) -> Result<ReconstructionResult<T>> {
    if profile.len() + 2 < MIN_GRID {
        return Err(invalid(format!("recovery needs a grid of at least {MIN_GRID} points")));
    }
    if point_residuals.len() != profile.len() {
        return Err(invalid("one residual per profile point is required"));
    }
    let zero = Cx::new(T::zero(), T::zero());
    let two = T::of(2.0);
    let four = T::of(4.0);
    let mut x_grid = Vec::with_capacity(profile.len() + 2);
    x_grid.push(T::zero());
    x_grid.extend(profile.iter().map(|p| p.x));
    x_grid.push(length);

    let mut omega_hat = vec![zero];
    omega_hat.extend(profile.iter().map(|p| p.omega));
    omega_hat.push(step1.omega_l);

    let q_big_0 = step1.q0 / four;
    let q_big_l = step1.q_l / four - step1.omega_l * step1.omega_l / two;
    let mut q_big_hat = vec![q_big_0];
    q_big_hat.extend(profile.iter().map(|p| p.q_big));
    q_big_hat.push(q_big_l);

    let mut q_hat = match option {
        RecoveryOption::Derivative => differentiate(&x_grid, &omega_hat)?.into_iter().map(|d| d * two).collect(),
        RecoveryOption::Algebraic => omega_hat
            .iter()
            .zip(&q_big_hat)
            .map(|(&w, &qb)| qb * four + w * w * two)
            .collect::<Vec<_>>(),
    };
    let last = q_hat.len() - 1;
    q_hat[0] = step1.q0;
    q_hat[last] = step1.q_l;

    let mut residual = vec![first_residual];
    residual.extend_from_slice(point_residuals);
    residual.push(first_residual);

    Ok(ReconstructionResult {
        option,
        x_grid,
        q_hat,
        omega_hat,
        q_big_hat,
        residual,
        q0_hat: step1.q0,
        ql_hat: step1.q_l,
        omegal_hat: step1.omega_l,
        diagnostics,
    })
}

impl<T: Real> ReconstructionResult<T> {
    /// `max |q_hat - q|` over the grid.
    pub fn max_abs_error(&self, exact: impl Fn(T) -> Cx<T>) -> T {
        self.x_grid
            .iter()
            .zip(&self.q_hat)
            .map(|(&x, &q)| (q - exact(x)).norm())
            .fold(T::zero(), T::max)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "re_q", "im_q", "re_omega", "im_omega", "re_Q", "im_Q", "residual"])?;
        for i in 0..self.x_grid.len() {
            let rec = [
                self.x_grid[i],
                self.q_hat[i].re,
                self.q_hat[i].im,
                self.omega_hat[i].re,
                self.omega_hat[i].im,
                self.q_big_hat[i].re,
                self.q_big_hat[i].im,
                self.residual[i],
            ];
            w.write_record(rec.iter().map(|v| format!("{:.17e}", v.as_f64())))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_diagnostics(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path)?;
        let doc = serde_json::json!({
            "option": self.option,
            "q0": [self.q0_hat.re.as_f64(), self.q0_hat.im.as_f64()],
            "qL": [self.ql_hat.re.as_f64(), self.ql_hat.im.as_f64()],
            "omega_L": [self.omegal_hat.re.as_f64(), self.omegal_hat.im.as_f64()],
            "diagnostics": self.diagnostics,
        });
        f.write_all(serde_json::to_string_pretty(&doc)?.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn five_point_derivative_is_exact_for_quartics() {
        let xs: Vec<f64> = (0..12).map(|i| (i as f64 * 0.1).powf(1.1)).collect();
        let f = |x: f64| cx(x.powi(4) - 2.0 * x, x * x);
        let df = |x: f64| cx(4.0 * x.powi(3) - 2.0, 2.0 * x);
        let ys: Vec<_> = xs.iter().map(|&x| f(x)).collect();
        let d = differentiate(&xs, &ys).unwrap();
        for i in 1..11 {
            assert!((d[i] - df(xs[i])).norm() < 1e-11, "i = {i}");
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let step1 = StepOneValues { omega_l: cx(0.0, 0.0), q0: cx(0.0, 0.0), q_l: cx(0.0, 0.0) };
        let prof: Vec<LocalCoefficients<f64>> = (1..=5)
            .map(|i| LocalCoefficients {
                x: i as f64 / 6.0,
                omega: cx(0.0, 0.0),
                q_big: cx(0.0, 0.0),
                phi_n: vec![],
                sigma_n: vec![],
                theta_n: vec![],
            })
            .collect();
        let r = recover_potential(1.0, &prof, &step1, 0.0, &[0.0; 5], RecoveryOption::Algebraic, Diagnostics::default());
        assert!(r.is_err());
    }
}

use super::integrator::OdeTolerance;
use super::potential::{PotentialSpec, Smoothness};
use super::solve::integrate_solution;
use crate::error::{invalid, Error, Result};
use crate::scalar::{real, Cx, Real};

/// Leading series coefficients `g0 = phi(0, x) - 1`, `s0 = 3 (S(0, x)/x - 1)`
/// on a uniform grid, with the largest interior deviation of
/// `g0'' / (g0 + 1)` from `q`.
#[derive(Clone, Debug)]
pub struct SeedCheck<T: Real> {
    pub grid: Vec<T>,
    pub g0: Vec<Cx<T>>,
    pub s0: Vec<Cx<T>>,
    pub residual: T,
}

const DEFAULT_POINTS: usize = 401;
const STENCIL: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];

pub fn seed_check<T: Real>(q: &PotentialSpec<T>, tol: &OdeTolerance<T>) -> Result<SeedCheck<T>> {
    seed_check_on(q, DEFAULT_POINTS, tol)
}

pub fn seed_check_on<T: Real>(q: &PotentialSpec<T>, points: usize, tol: &OdeTolerance<T>) -> Result<SeedCheck<T>> {
    if q.smoothness() != Smoothness::C1 {
        return Err(invalid("seed check needs a C1 potential"));
    }
    if points < 8 {
        return Err(invalid("seed check needs at least 8 grid points"));
    }
    let h = q.length() / T::of_usize(points - 1);
    let grid: Vec<T> = (0..points).map(|i| h * T::of_usize(i)).collect();
    let zero = real(T::zero());
    let one = real(T::one());
    let rho = zero;
    let phi = integrate_solution(q, rho, one, zero, &grid, tol)?.samples;
    let s = integrate_solution(q, rho, zero, one, &grid, tol)?.samples;
    let g0: Vec<Cx<T>> = phi.iter().map(|p| p.1 - one).collect();
    let three = T::of(3.0);
    let s0: Vec<Cx<T>> = s
        .iter()
        .map(|&(x, y, _)| if x == T::zero() { zero } else { (y / x - one) * three })
        .collect();

    let floor = T::of(1e-8);
    let mut residual = T::zero();
    for i in 3..points - 3 {
        let denom = g0[i] + one;
        if denom.norm() < floor {
            return Err(Error::SingularDenominator { x: grid[i].as_f64() });
        }
        let mut d2 = zero;
        for (k, &c) in STENCIL.iter().enumerate() {
            d2 = d2 + g0[i + k - 3] * T::of(c);
        }
        d2 = d2 / (h * h);
        residual = residual.max((q.eval(grid[i]) - d2 / denom).norm());
    }
    Ok(SeedCheck { grid, g0, s0, residual })
}

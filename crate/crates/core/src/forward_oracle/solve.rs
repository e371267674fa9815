use rayon::prelude::*;

use super::integrator::{integrate, OdeTolerance};
use super::potential::PotentialSpec;
use crate::error::{invalid, Error, Result};
use crate::scalar::{cx, is_finite, Cx, Real};

/// Samples with `|rho|` below this are rejected: the inverse systems divide
/// by powers of `rho`.
pub const LOW_FREQUENCY_FLOOR: f64 = 1e-3;

/// One Problem-A datum: initial values `(a, b)` at `x = 0` and the value
/// `ell` at `x = L` of the solution at spectral parameter `rho`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSample<T: Real> {
    pub rho: Cx<T>,
    pub a: Cx<T>,
    pub b: Cx<T>,
    pub ell: Cx<T>,
}

impl<T: Real> SpectralSample<T> {
    pub fn new(rho: Cx<T>, a: Cx<T>, b: Cx<T>, ell: Cx<T>) -> Result<Self> {
        let s = Self { rho, a, b, ell };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.rho, self.a, self.b, self.ell].iter().all(|&z| is_finite(z)) {
            return Err(invalid("spectral sample has non-finite entries"));
        }
        if self.rho.norm() == T::zero() {
            return Err(invalid("spectral parameter must be nonzero"));
        }
        if self.a.norm() == T::zero() && self.b.norm() == T::zero() {
            return Err(invalid("initial data (a, b) must not both vanish"));
        }
        Ok(())
    }
}

/// Solution of the equation with its derivative at `x = L`, plus optional
/// samples `(x, y, y')` on a requested grid.
#[derive(Clone, Debug)]
pub struct SolutionTrace<T: Real> {
    pub value_at_l: Cx<T>,
    pub derivative_at_l: Cx<T>,
    pub samples: Vec<(T, Cx<T>, Cx<T>)>,
}

/// Values `phi(L), phi'(L), S(L), S'(L)`.
#[derive(Clone, Copy, Debug)]
pub struct EndpointValues<T: Real> {
    pub phi: Cx<T>,
    pub dphi: Cx<T>,
    pub s: Cx<T>,
    pub ds: Cx<T>,
}

impl<T: Real> EndpointValues<T> {
    pub fn wronskian(&self) -> Cx<T> {
        self.phi * self.ds - self.s * self.dphi
    }
}

pub(crate) fn propagate<T: Real>(
    q: &PotentialSpec<T>,
    rho: Cx<T>,
    from: T,
    to: T,
    y0: Cx<T>,
    dy0: Cx<T>,
    grid: &[T],
    tol: &OdeTolerance<T>,
) -> Result<SolutionTrace<T>> {
    if let Some(c) = q.constant_value() {
        return Ok(propagate_constant(c, rho, from, to, y0, dy0, grid));
    }
    let lambda = rho * rho;
    let rhs = |x: T, y: &[Cx<T>; 2]| [y[1], (q.eval(x) - lambda) * y[0]];
    let mut sorted: Vec<T> = grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut stops = sorted.clone();
    stops.extend_from_slice(q.breakpoints());
    let mut samples = Vec::with_capacity(sorted.len());
    if sorted.first() == Some(&from) {
        samples.push((from, y0, dy0));
    }
    let end = integrate(rhs, from, to, [y0, dy0], &stops, tol, |x, y| {
        if sorted.binary_search_by(|p| p.partial_cmp(&x).unwrap()).is_ok() {
            samples.push((x, y[0], y[1]));
        }
    })?;
    if sorted.last() == Some(&to) && from != to {
        samples.push((to, end[0], end[1]));
    }
    if !(is_finite(end[0]) && is_finite(end[1])) {
        return Err(Error::IntegrationFailure {
            x: to.as_f64(),
            reason: "solution overflowed".into(),
        });
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(SolutionTrace {
        value_at_l: end[0],
        derivative_at_l: end[1],
        samples,
    })
}

/// `cos(k t)` and `sin(k t) / k` for `k^2 = k2`; both are even in `k`, so the
/// square-root branch is irrelevant.
fn trig_pair<T: Real>(k2: Cx<T>, t: T) -> (Cx<T>, Cx<T>) {
    let k = k2.sqrt();
    let z = k * t;
    if z.norm() < T::of(1e-3) {
        let z2 = z * z;
        let one = cx(T::one(), T::zero());
        let c = one - z2 * T::of(0.5) + z2 * z2 / T::of(24.0);
        let s = (one - z2 / T::of(6.0) + z2 * z2 / T::of(120.0)) * t;
        (c, s)
    } else {
        (z.cos(), z.sin() / k)
    }
}

fn propagate_constant<T: Real>(
    c: Cx<T>,
    rho: Cx<T>,
    from: T,
    to: T,
    y0: Cx<T>,
    dy0: Cx<T>,
    grid: &[T],
) -> SolutionTrace<T> {
    let k2 = rho * rho - c;
    let at = |x: T| {
        let (cs, sn) = trig_pair(k2, x - from);
        (y0 * cs + dy0 * sn, dy0 * cs - y0 * k2 * sn)
    };
    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
    let mut samples: Vec<_> = grid
        .iter()
        .filter(|&&x| x >= lo && x <= hi)
        .map(|&x| {
            let (y, dy) = at(x);
            (x, y, dy)
        })
        .collect();
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    samples.dedup_by(|a, b| a.0 == b.0);
    let (value_at_l, derivative_at_l) = at(to);
    SolutionTrace {
        value_at_l,
        derivative_at_l,
        samples,
    }
}

/// Solves `-y'' + q y = rho^2 y`, `y(0) = a`, `y'(0) = b` and reports `y(L)`,
/// `y'(L)`; `grid` points in `[0, L]` are sampled exactly.
pub fn integrate_solution<T: Real>(
    q: &PotentialSpec<T>,
    rho: Cx<T>,
    a: Cx<T>,
    b: Cx<T>,
    grid: &[T],
    tol: &OdeTolerance<T>,
) -> Result<SolutionTrace<T>> {
    if !(is_finite(rho) && is_finite(a) && is_finite(b)) {
        return Err(invalid("non-finite spectral parameter or initial data"));
    }
    propagate(q, rho, T::zero(), q.length(), a, b, grid, tol)
}

/// Solution with terminal data `y(L) = 0`, `y'(L) = 1`, sampled on `grid`.
pub fn terminal_solution<T: Real>(
    q: &PotentialSpec<T>,
    rho: Cx<T>,
    grid: &[T],
    tol: &OdeTolerance<T>,
) -> Result<Vec<(T, Cx<T>, Cx<T>)>> {
    let zero = cx(T::zero(), T::zero());
    let one = cx(T::one(), T::zero());
    Ok(propagate(q, rho, q.length(), T::zero(), zero, one, grid, tol)?.samples)
}

pub fn phi_s_at_l<T: Real>(q: &PotentialSpec<T>, rho: Cx<T>, tol: &OdeTolerance<T>) -> Result<EndpointValues<T>> {
    let zero = cx(T::zero(), T::zero());
    let one = cx(T::one(), T::zero());
    let phi = integrate_solution(q, rho, one, zero, &[], tol)?;
    let s = integrate_solution(q, rho, zero, one, &[], tol)?;
    Ok(EndpointValues {
        phi: phi.value_at_l,
        dphi: phi.derivative_at_l,
        s: s.value_at_l,
        ds: s.derivative_at_l,
    })
}

/// Builds Problem-A data `ell_k = a(rho_k) phi(rho_k, L) + b(rho_k) S(rho_k, L)`.
/// Integrations run in parallel; output order follows `rhos`.
pub fn generate_problem_data<T, A, B>(
    q: &PotentialSpec<T>,
    rhos: &[Cx<T>],
    a_fn: A,
    b_fn: B,
    tol: &OdeTolerance<T>,
) -> Result<Vec<SpectralSample<T>>>
where
    T: Real,
    A: Fn(Cx<T>) -> Cx<T> + Sync,
    B: Fn(Cx<T>) -> Cx<T> + Sync,
{
    let floor = T::of(LOW_FREQUENCY_FLOOR);
    if let Some(r) = rhos.iter().find(|r| !(r.norm() >= floor)) {
        return Err(invalid(format!(
            "spectral parameter {r} is below the low-frequency floor {LOW_FREQUENCY_FLOOR}"
        )));
    }
    rhos.par_iter()
        .map(|&rho| {
            let (a, b) = (a_fn(rho), b_fn(rho));
            let ell = integrate_solution(q, rho, a, b, &[], tol)?.value_at_l;
            SpectralSample::new(rho, a, b, ell)
        })
        .collect()
}

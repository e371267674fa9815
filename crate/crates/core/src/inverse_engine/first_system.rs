use log::warn;

use crate::error::{invalid, Error, Result};
use crate::forward_oracle::{SpectralSample, LOW_FREQUENCY_FLOOR};
use crate::nsbf_model::{EndpointCoefficients, MAX_ORDER};
use crate::numeric_kernel::{
    combo_c1, combo_c2, lstsq_solve, spherical_bessel_sequence, DenseSystem, LstsqOptions, LstsqSolution,
};
use crate::scalar::{Cx, Real};

/// Endpoint data the main system treats as known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOneValues<T: Real> {
    pub omega_l: Cx<T>,
    pub q0: Cx<T>,
    pub q_l: Cx<T>,
}

/// Smallest sample count for truncation order `n`.
pub fn min_samples(n: usize) -> usize {
    2 * n + 3
}

/// Number of samples that repeat an earlier one (same `rho^2`, `a`, `b` up
/// to a relative gap of 1e-12); such rows add no information.
pub fn duplicate_samples<T: Real>(samples: &[SpectralSample<T>]) -> usize {
    let gap = T::of(1e-12);
    let close = |u: Cx<T>, v: Cx<T>| (u - v).norm() <= gap * u.norm().max(v.norm()).max(T::min_positive_value());
    let mut dup = 0;
    for (i, s) in samples.iter().enumerate() {
        let r2 = s.rho * s.rho;
        if samples[..i]
            .iter()
            .any(|p| close(p.rho * p.rho, r2) && close(p.a, s.a) && close(p.b, s.b))
        {
            dup += 1;
        }
    }
    dup
}

/// Rows `k` over unknowns `[omega(L), q-(L), q+(L), phi_1..phi_N, sigma_1..sigma_N]`.
pub fn assemble_first_system<T: Real>(samples: &[SpectralSample<T>], length: T, n: usize) -> Result<DenseSystem<T>> {
    if n == 0 || n > MAX_ORDER {
        return Err(invalid(format!("truncation order must be in 1..={MAX_ORDER}")));
    }
    if !(length > T::zero() && length.is_finite()) {
        return Err(invalid("interval length must be positive and finite"));
    }
    let cols = 2 * n + 3;
    if samples.len() < min_samples(n) {
        return Err(Error::Underdetermined {
            rows: samples.len(),
            unknowns: cols,
        });
    }
    let floor = T::of(LOW_FREQUENCY_FLOOR);
    for s in samples {
        s.validate()?;
        if s.rho.norm() < floor {
            return Err(invalid(format!("spectral parameter {} is below the low-frequency floor", s.rho)));
        }
    }
    let dup = duplicate_samples(samples);
    if dup > 0 {
        warn!("{dup} duplicate spectral samples in the first system");
    }

    let mut sys = DenseSystem::zeros(samples.len(), cols);
    let mut j = vec![Cx::new(T::zero(), T::zero()); 2 * n + 2];
    for (k, s) in samples.iter().enumerate() {
        let rho = s.rho;
        let z = rho * length;
        spherical_bessel_sequence(z, &mut j)?;
        let r2 = rho * rho;
        let r3 = r2 * rho;
        let (sin, cos) = (z.sin(), z.cos());
        let row = sys.row_mut(k);
        row[0] = s.a * sin / rho + s.b * combo_c1(z) / r2;
        row[1] = -s.a * j[1] * length / rho;
        row[2] = s.b * combo_c2(z) / r3;
        for m in 1..=n {
            let sign = if m % 2 == 0 { -T::one() } else { T::one() };
            row[2 + m] = s.a * j[2 * m] * sign / r2;
            row[2 + n + m] = s.b * j[2 * m + 1] * sign / r3;
        }
        sys.rhs_mut()[k] = s.ell - s.a * cos - s.b * sin / rho;
    }
    Ok(sys)
}

/// Solves the first system and unpacks the endpoint coefficients.
pub fn solve_first_system<T: Real>(
    samples: &[SpectralSample<T>],
    length: T,
    n: usize,
    solver: LstsqOptions<T>,
) -> Result<(EndpointCoefficients<T>, LstsqSolution<T>)> {
    let sys = assemble_first_system(samples, length, n)?;
    let sol = lstsq_solve(&sys, solver)?;
    let x = &sol.x;
    let c = EndpointCoefficients {
        length,
        omega_l: x[0],
        q_minus_l: x[1],
        q_plus_l: x[2],
        phi_n: x[3..3 + n].to_vec(),
        sigma_n: x[3 + n..3 + 2 * n].to_vec(),
    };
    Ok((c, sol))
}

/// `q(0)` and `q(L)` from the endpoint coefficients.
pub fn recover_endpoint_values<T: Real>(c: &EndpointCoefficients<T>) -> (Cx<T>, Cx<T>) {
    (c.q_at_zero(), c.q_at_l())
}

impl<T: Real> StepOneValues<T> {
    pub fn from_coefficients(c: &EndpointCoefficients<T>) -> Self {
        let (q0, q_l) = recover_endpoint_values(c);
        Self {
            omega_l: c.omega_l,
            q0,
            q_l,
        }
    }
}

use super::first_system::StepOneValues;
use super::gamma::CharacteristicSamples;
use crate::error::{invalid, Error, Result};
use crate::numeric_kernel::{combo_c1, combo_c2, spherical_bessel_sequence, DenseSystem};
use crate::scalar::{Cx, Real};

/// Unknown count of the main system for truncation order `n`.
pub fn main_unknowns(n: usize) -> usize {
    3 * n + 2
}

/// Rows `k` over unknowns `[omega(x), Q(x), phi_1..phi_N, sigma_1..sigma_N,
/// theta_1..theta_N]` at an interior point `x`, with the step-one values
/// moved to the right-hand side.
pub fn assemble_main_system<T: Real>(
    x: T,
    length: T,
    cs: &CharacteristicSamples<T>,
    step1: &StepOneValues<T>,
    n: usize,
) -> Result<DenseSystem<T>> {
    if !(x > T::zero() && x < length) {
        return Err(invalid(format!("main system needs an interior point, got x = {x}")));
    }
    let m = cs.grid.len();
    let cols = main_unknowns(n);
    if m < cols {
        return Err(Error::Underdetermined { rows: m, unknowns: cols });
    }
    if cs.s.len() != m || cs.f.len() != m {
        return Err(invalid("characteristic samples do not match the grid"));
    }
    let quarter = T::of(0.25);
    let half = T::of(0.5);
    let StepOneValues { omega_l, q0, q_l } = *step1;
    let moved_a5 = (omega_l * omega_l - q_l * half) * half;
    let zero = Cx::new(T::zero(), T::zero());
    let mut jx = vec![zero; 2 * n + 2];
    let mut jr = vec![zero; 2 * n + 2];
    let mut sys = DenseSystem::zeros(m, cols);
    let lx = length - x;
    for k in 0..m {
        let g = cs.grid.points[k];
        let (sk, fk) = (cs.s[k], cs.f[k]);
        let zx = g * x;
        let zr = g * lx;
        spherical_bessel_sequence(zx, &mut jx)?;
        spherical_bessel_sequence(zr, &mut jr)?;
        let g2 = g * g;
        let g3 = g2 * g;
        let (sin_x, cos_x) = (zx.sin(), zx.cos());
        let xj1 = jx[1] * x / g;
        let c2x = combo_c2(zx) / g3;

        let a1 = -sk * sin_x / g + fk * combo_c1(zx) / g2;
        let a2 = fk * c2x + sk * xj1;
        let a3 = -sk * xj1 + fk * c2x;
        let a4 = combo_c1(zr) / g2;
        let a5 = combo_c2(zr) / g3;

        let row = sys.row_mut(k);
        row[0] = a1 - a4 + a5 * omega_l;
        row[1] = a2 + a5;
        for p in 1..=n {
            let even = p % 2 == 0;
            let b = sk * jx[2 * p] / g2;
            let c = fk * jx[2 * p + 1] / g3;
            let d = jr[2 * p + 1] / g3;
            row[1 + p] = if even { b } else { -b };
            row[1 + n + p] = if even { -c } else { c };
            row[1 + 2 * n + p] = if even { -d } else { d };
        }
        sys.rhs_mut()[k] = -zr.sin() / g + sk * cos_x - fk * sin_x / g - a3 * q0 * quarter - a4 * omega_l + a5 * moved_a5;
    }
    Ok(sys)
}

use super::integrator::OdeTolerance;
use super::potential::PotentialSpec;
use super::solve::{phi_s_at_l, propagate};
use crate::error::{invalid, Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Reflection and transmission coefficients of the potential supported on
/// `[0, L]`, with a wave `T e^{-i rho x}` leaving through `x = L`.
pub fn scattering_coefficients<T: Real>(
    q: &PotentialSpec<T>,
    rho: Cx<T>,
    tol: &OdeTolerance<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    if rho.norm() == T::zero() {
        return Err(invalid("scattering needs a nonzero spectral parameter"));
    }
    let i = cx(T::zero(), T::one());
    let l = q.length();
    let wave = (-i * rho * l).exp();
    let trace = propagate(q, rho, l, T::zero(), wave, -i * rho * wave, &[], tol)?;
    let (y0, dy0) = (trace.value_at_l, trace.derivative_at_l);
    let half = T::of(0.5);
    let ratio = dy0 / (i * rho);
    let incoming = (y0 - ratio) * half;
    let reflected = (y0 + ratio) * half;
    if incoming.norm() <= T::epsilon() * (y0.norm() + ratio.norm()) {
        return Err(Error::DivisionDegenerate(format!(
            "incoming amplitude vanishes at rho = {rho}"
        )));
    }
    Ok((reflected / incoming, incoming.inv()))
}

/// Weyl function `M(rho) = Phi(rho, 0)` of the solution with `Phi'(0) = 1`,
/// `Phi(L) = 0`, i.e. `M = -S(rho, L) / phi(rho, L)`.
pub fn weyl_function<T: Real>(q: &PotentialSpec<T>, rho: Cx<T>, tol: &OdeTolerance<T>) -> Result<Cx<T>> {
    let ends = phi_s_at_l(q, rho, tol)?;
    if ends.phi.norm() <= T::epsilon() * ends.s.norm() {
        return Err(Error::DivisionDegenerate(format!(
            "rho^2 = {} is a Neumann-Dirichlet eigenvalue",
            rho * rho
        )));
    }
    Ok(-ends.s / ends.phi)
}

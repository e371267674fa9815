use rayon::prelude::*;

use super::integrator::OdeTolerance;
use super::potential::PotentialSpec;
use super::solve::phi_s_at_l;
use crate::error::{invalid, Error, Result};
use crate::scalar::{principal_sqrt, real, Cx, Real};

/// Boundary form at `x = 0`; the terminal condition is always `y(L) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LeftBoundary<T> {
    /// `y(0) = 0`.
    Dirichlet,
    /// `y'(0) = h y(0)`.
    Robin(T),
}

/// Characteristic function whose zeros are the eigenvalues `lambda = rho^2`.
pub fn characteristic<T: Real>(
    q: &PotentialSpec<T>,
    boundary: LeftBoundary<T>,
    lambda: T,
    tol: &OdeTolerance<T>,
) -> Result<T> {
    let rho = principal_sqrt(real(lambda));
    let ends = phi_s_at_l(q, rho, tol)?;
    let v = match boundary {
        LeftBoundary::Dirichlet => ends.s,
        LeftBoundary::Robin(h) => ends.phi + ends.s * h,
    };
    Ok(v.re)
}

/// First `count` eigenvalues of a real potential, located by a sign-change
/// scan on `[min q - 1, ((count + 2) pi / L)^2 + max |q|]` and refined by
/// Brent's method.
pub fn find_real_eigenvalues<T: Real>(
    q: &PotentialSpec<T>,
    boundary: LeftBoundary<T>,
    count: usize,
    tol: &OdeTolerance<T>,
) -> Result<Vec<T>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if q.max_imaginary() > T::zero() {
        return Err(invalid("eigenvalue search needs a real-valued potential"));
    }
    let l = q.length();
    let pi = T::PI();
    let (min_re, max_abs) = q.real_range();
    let mut lower = min_re - T::one();
    if let LeftBoundary::Robin(h) = boundary {
        if h < T::zero() {
            // A negative Robin parameter can push one eigenvalue below min q.
            lower = lower - h * h;
        }
    }
    let upper = (T::of_usize(count + 2) * pi / l).powi(2) + max_abs;
    let step = pi * pi / (T::of(4.0) * l * l);
    let n = ((upper - lower) / step).ceil().to_usize().unwrap_or(0) + 1;
    let grid: Vec<T> = (0..=n).map(|i| lower + step * T::of_usize(i)).collect();
    let values = grid
        .par_iter()
        .map(|&lam| characteristic(q, boundary, lam, tol))
        .collect::<Result<Vec<T>>>()?;

    let mut found = Vec::with_capacity(count);
    for i in 0..n {
        if found.len() == count {
            break;
        }
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == T::zero() {
            found.push(grid[i]);
            continue;
        }
        if fa * fb < T::zero() {
            let f = |lam: T| characteristic(q, boundary, lam, tol);
            found.push(brent(f, grid[i], grid[i + 1], fa, fb)?);
        }
    }
    if found.len() < count {
        return Err(Error::SearchWindowExhausted {
            found: found.len(),
            requested: count,
            upper: upper.as_f64(),
        });
    }
    Ok(found)
}

/// Maps real eigenvalues to spectral parameters `rho = sqrt(lambda + c)`
/// on the principal branch.
pub fn shift_spectrum<T: Real>(lambdas: &[T], c: Cx<T>) -> Vec<Cx<T>> {
    lambdas.iter().map(|&l| principal_sqrt(real(l) + c)).collect()
}

fn brent<T: Real>(f: impl Fn(T) -> Result<T>, a0: T, b0: T, fa0: T, fb0: T) -> Result<T> {
    let (mut a, mut b, mut fa, mut fb) = (a0, b0, fa0, fb0);
    let two = T::of(2.0);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > T::zero() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs().max(T::one());
        let xm = (c - b) / two;
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut qq);
            if a == c {
                p = two * xm * s;
                qq = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                qq = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                qq = -qq;
            }
            p = p.abs();
            let min1 = T::of(3.0) * xm * qq - (tol1 * qq).abs();
            let min2 = (e * qq).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / qq;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn brent_finds_cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(f, 0.0, 2.0, -2.0, 6.0).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn shift_examples() {
        let r = shift_spectrum(&[4.0_f64, 0.0, 1.0], cx(0.0, 0.0));
        assert_eq!(r[0], cx(2.0, 0.0));
        let r = shift_spectrum(&[0.0_f64, 1.0], cx(0.0, 1.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] - cx(h, h)).norm() < 1e-15);
        assert!((r[1] - cx(1.0986841134678100, 0.45508986056222733)).norm() < 1e-15);
    }

    #[test]
    fn complex_potential_is_rejected() {
        let q = PotentialSpec::constant(1.0_f64, cx(0.0, 1.0)).unwrap();
        assert!(find_real_eigenvalues(&q, LeftBoundary::Dirichlet, 2, &OdeTolerance::default()).is_err());
    }
}

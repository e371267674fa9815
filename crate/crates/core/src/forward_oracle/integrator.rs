//! Adaptive Dormand-Prince 8(5,3) integration of complex first-order systems.

use super::dop853_tableau as tab;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug)]
pub struct OdeTolerance<T: Real> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeTolerance<T> {
    fn default() -> Self {
        let floor = T::epsilon() * T::of(100.0);
        let tol = T::of(1e-12).max(floor);
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 5_000_000,
        }
    }
}

impl<T: Real> OdeTolerance<T> {
    pub fn uniform(tol: T) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction). Every
/// point of `stops` lying strictly between the ends is hit exactly and
/// reported through `on_stop`, in integration order.
pub(crate) fn integrate<T, F, const D: usize>(
    f: F,
    x0: T,
    x1: T,
    y0: [Cx<T>; D],
    stops: &[T],
    tol: &OdeTolerance<T>,
    mut on_stop: impl FnMut(T, &[Cx<T>; D]),
) -> Result<[Cx<T>; D]>
where
    T: Real,
    F: Fn(T, &[Cx<T>; D]) -> [Cx<T>; D],
{
    if x0 == x1 {
        return Ok(y0);
    }
    let dir = if x1 > x0 { T::one() } else { -T::one() };
    let mut targets: Vec<T> = stops
        .iter()
        .copied()
        .filter(|&s| (s - x0) * dir > T::zero() && (x1 - s) * dir > T::zero())
        .collect();
    targets.sort_by(|a, b| ((*a - *b) * dir).partial_cmp(&T::zero()).unwrap());
    targets.dedup();
    targets.push(x1);

    let zero = Cx::new(T::zero(), T::zero());
    let mut x = x0;
    let mut y = y0;
    let mut fx = f(x, &y);
    let mut h = initial_step(&f, x, &y, &fx, dir, (x1 - x0).abs(), tol);
    let mut steps = 0usize;
    let mut k = [[zero; D]; tab::STAGES + 1];
    let min_step = T::epsilon() * T::of(16.0);

    for &target in &targets {
        while (target - x) * dir > T::zero() {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::IntegrationFailure {
                    x: x.as_f64(),
                    reason: format!("exceeded {} steps", tol.max_steps),
                });
            }
            let remaining = (target - x).abs();
            let hs = h.min(remaining);
            let last = hs >= remaining;
            if hs <= min_step * x.abs().max(T::one()) && !last {
                return Err(Error::IntegrationFailure {
                    x: x.as_f64(),
                    reason: "step size underflow".into(),
                });
            }
            let step = hs * dir;
            let (y_new, f_new, err) = dop853_step(&f, x, &y, &fx, step, &mut k, tol);
            if !err.is_finite() {
                h = hs * T::of(MIN_FACTOR);
                if h <= min_step * x.abs().max(T::one()) {
                    return Err(Error::IntegrationFailure {
                        x: x.as_f64(),
                        reason: "non-finite solution".into(),
                    });
                }
                continue;
            }
            let exponent = -T::one() / T::of(8.0);
            if err <= T::one() {
                let factor = if err == T::zero() {
                    T::of(MAX_FACTOR)
                } else {
                    (T::of(SAFETY) * err.powf(exponent)).min(T::of(MAX_FACTOR))
                };
                x = if last { target } else { x + step };
                y = y_new;
                fx = f_new;
                if last {
                    // Keep the proposed step for the next segment.
                    h = h.max(hs * factor.min(T::one()));
                } else {
                    h = hs * factor;
                }
            } else {
                let factor = (T::of(SAFETY) * err.powf(exponent)).max(T::of(MIN_FACTOR));
                h = hs * factor;
            }
        }
        if target != x1 {
            on_stop(target, &y);
        }
    }
    Ok(y)
}

fn weighted_rms<T: Real, const D: usize>(v: &[Cx<T>; D], scale: &[Cx<T>; D]) -> T {
    let mut s = T::zero();
    for (a, sc) in v.iter().zip(scale) {
        s = s + (a.re / sc.re).powi(2) + (a.im / sc.im).powi(2);
    }
    (s / T::of_usize(2 * D)).sqrt()
}

fn scale_of<T: Real, const D: usize>(y: &[Cx<T>; D], y2: &[Cx<T>; D], tol: &OdeTolerance<T>) -> [Cx<T>; D] {
    let mut sc = [Cx::new(T::zero(), T::zero()); D];
    for i in 0..D {
        let m = tol.atol + tol.rtol * y[i].norm().max(y2[i].norm());
        sc[i] = Cx::new(m, m);
    }
    sc
}

fn initial_step<T, F, const D: usize>(
    f: &F,
    x: T,
    y: &[Cx<T>; D],
    fx: &[Cx<T>; D],
    dir: T,
    span: T,
    tol: &OdeTolerance<T>,
) -> T
where
    T: Real,
    F: Fn(T, &[Cx<T>; D]) -> [Cx<T>; D],
{
    let sc = scale_of(y, y, tol);
    let d0 = weighted_rms(y, &sc);
    let d1 = weighted_rms(fx, &sc);
    let h0 = if d0 < T::of(1e-5) || d1 < T::of(1e-5) {
        T::of(1e-6)
    } else {
        T::of(0.01) * d0 / d1
    }
    .min(span);
    let mut y1 = *y;
    for i in 0..D {
        y1[i] = y[i] + fx[i] * (h0 * dir);
    }
    let f1 = f(x + h0 * dir, &y1);
    let mut diff = [Cx::new(T::zero(), T::zero()); D];
    for i in 0..D {
        diff[i] = f1[i] - fx[i];
    }
    let d2 = weighted_rms(&diff, &sc) / h0;
    let h1 = if d1 <= T::of(1e-15) && d2 <= T::of(1e-15) {
        (h0 * T::of(1e-3)).max(T::of(1e-6))
    } else {
        (T::of(0.01) / d1.max(d2)).powf(T::one() / T::of(8.0))
    };
    (h0 * T::of(100.0)).min(h1).min(span)
}

#[allow(clippy::type_complexity)]
fn dop853_step<T, F, const D: usize>(
    f: &F,
    x: T,
    y: &[Cx<T>; D],
    fx: &[Cx<T>; D],
    h: T,
    k: &mut [[Cx<T>; D]; tab::STAGES + 1],
    tol: &OdeTolerance<T>,
) -> ([Cx<T>; D], [Cx<T>; D], T)
where
    T: Real,
    F: Fn(T, &[Cx<T>; D]) -> [Cx<T>; D],
{
    let zero = Cx::new(T::zero(), T::zero());
    k[0] = *fx;
    for s in 1..tab::STAGES {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = tab::A[s][j];
            if a != 0.0 {
                let a = T::of(a) * h;
                for i in 0..D {
                    ys[i] = ys[i] + kj[i] * a;
                }
            }
        }
        k[s] = f(x + T::of(tab::C[s]) * h, &ys);
    }
    let mut y_new = *y;
    for (s, ks) in k.iter().enumerate().take(tab::STAGES) {
        let b = tab::B[s];
        if b != 0.0 {
            let b = T::of(b) * h;
            for i in 0..D {
                y_new[i] = y_new[i] + ks[i] * b;
            }
        }
    }
    let f_new = f(x + h, &y_new);
    k[tab::STAGES] = f_new;

    let mut e5 = [zero; D];
    let mut e3 = [zero; D];
    for (s, ks) in k.iter().enumerate() {
        let (c5, c3) = (tab::E5[s], tab::E3[s]);
        for i in 0..D {
            if c5 != 0.0 {
                e5[i] = e5[i] + ks[i] * T::of(c5);
            }
            if c3 != 0.0 {
                e3[i] = e3[i] + ks[i] * T::of(c3);
            }
        }
    }
    let sc = scale_of(y, &y_new, tol);
    let n5 = weighted_rms(&e5, &sc).powi(2);
    let n3 = weighted_rms(&e3, &sc).powi(2);
    let err = if n5 == T::zero() && n3 == T::zero() {
        T::zero()
    } else {
        h.abs() * n5 / (n5 + T::of(0.01) * n3).sqrt()
    };
    (y_new, f_new, err)
}

//! Cancellation-free evaluation of the two trigonometric/Bessel combinations
//! appearing in the regrouped series for `S` and `T`:
//!
//! * `c1(z) = 3 j1(z)/z - cos z = (2/5) z^2 - (4/105) z^4 + ...`
//! * `c2(z) = sin z - 3 j1(z)    = -z^3/15 + z^5/210 - ...`

use crate::scalar::{Cx, Real};

const SERIES_RADIUS: f64 = 0.5;
const MIN_TERMS: usize = 12;
const MAX_TERMS: usize = 60;

pub fn combo_c1<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.norm() < T::of(SERIES_RADIUS) {
        return c1_series(z);
    }
    let c = z.cos();
    let j1_over_z = (z.sin() / z - c) / (z * z);
    j1_over_z * T::of(3.0) - c
}

pub fn combo_c2<T: Real>(z: Cx<T>) -> Cx<T> {
    if z.norm() < T::of(SERIES_RADIUS) {
        return c2_series(z);
    }
    let s = z.sin();
    let j1 = (s / z - z.cos()) / z;
    s - j1 * T::of(3.0)
}

// p_k = (-1)^k z^{2k}/(2k)!, r_k = (-1)^k z^{2k}/(2k+3)!
fn c1_series<T: Real>(z: Cx<T>) -> Cx<T> {
    let w = -(z * z);
    let mut p = Cx::new(T::one(), T::zero());
    let mut r = Cx::new(T::one() / T::of(6.0), T::zero());
    let mut sum = Cx::new(T::zero(), T::zero());
    for k in 0..MAX_TERMS {
        let kk = T::of_usize(k);
        p = p * w / ((T::of(2.0) * kk + T::one()) * (T::of(2.0) * kk + T::of(2.0)));
        r = r * w / ((T::of(2.0) * kk + T::of(4.0)) * (T::of(2.0) * kk + T::of(5.0)));
        let n = k + 1;
        let term = r * T::of_usize(3 * (2 * n + 2)) - p;
        sum = sum + term;
        if n >= MIN_TERMS && term.norm() <= T::epsilon() * sum.norm() {
            break;
        }
    }
    sum
}

// p_k = (-1)^k z^{2k+1}/(2k+1)!, r_k = (-1)^k z^{2k+1}/(2k+3)!
fn c2_series<T: Real>(z: Cx<T>) -> Cx<T> {
    let w = -(z * z);
    let mut p = z;
    let mut r = z / T::of(6.0);
    let mut sum = Cx::new(T::zero(), T::zero());
    for k in 0..MAX_TERMS {
        let kk = T::of_usize(k);
        p = p * w / ((T::of(2.0) * kk + T::of(2.0)) * (T::of(2.0) * kk + T::of(3.0)));
        r = r * w / ((T::of(2.0) * kk + T::of(4.0)) * (T::of(2.0) * kk + T::of(5.0)));
        let n = k + 1;
        let term = p - r * T::of_usize(3 * (2 * n + 2));
        sum = sum + term;
        if n >= MIN_TERMS && term.norm() <= T::epsilon() * sum.norm() {
            break;
        }
    }
    sum
}

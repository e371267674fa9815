//! Spherical Bessel functions of the first kind for complex argument.
//!
//! Three regimes, chosen per order:
//! * ascending series when `|z| < max(0.5, n/2)`,
//! * upward recurrence from `j0`, `j1` for orders below `|z|` (and below the
//!   point where the recessive solution starts to dominate off the real axis),
//! * Miller-type backward recurrence on the ratios `j_n / j_{n-1}` for the
//!   remaining orders, anchored on the last upward value.

use crate::error::{invalid, Result};
use crate::scalar::{Cx, Real};

/// Default highest order accepted by [`spherical_bessel_j`].
pub const DEFAULT_ORDER_CAP: usize = 64;

const SERIES_RADIUS: f64 = 0.5;
const MIN_SERIES_TERMS: usize = 12;
const MAX_SERIES_TERMS: usize = 400;
const BACKWARD_MARGIN: usize = 20;
const UPWARD_GROWTH: f64 = 3.0;

/// `j_n(z)`; fails when `n` exceeds [`DEFAULT_ORDER_CAP`].
pub fn spherical_bessel_j<T: Real>(n: usize, z: Cx<T>) -> Result<Cx<T>> {
    spherical_bessel_j_capped(n, z, DEFAULT_ORDER_CAP)
}

pub fn spherical_bessel_j_capped<T: Real>(n: usize, z: Cx<T>, cap: usize) -> Result<Cx<T>> {
    if n > cap {
        return Err(invalid(format!(
            "spherical Bessel order {n} exceeds the cap {cap}"
        )));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid("spherical Bessel argument must be finite"));
    }
    if z.norm() < series_radius::<T>(n) {
        return Ok(series(n, z));
    }
    let mut buf = vec![Cx::new(T::zero(), T::zero()); n + 1];
    fill_sequence(z, &mut buf);
    Ok(buf[n])
}

/// Fills `out[k] = j_k(z)` for `k = 0..out.len()` in one sweep.
pub fn spherical_bessel_sequence<T: Real>(z: Cx<T>, out: &mut [Cx<T>]) -> Result<()> {
    if out.len() > DEFAULT_ORDER_CAP + 1 {
        return Err(invalid(format!(
            "spherical Bessel order {} exceeds the cap {DEFAULT_ORDER_CAP}",
            out.len() - 1
        )));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid("spherical Bessel argument must be finite"));
    }
    fill_sequence(z, out);
    Ok(())
}

#[inline]
fn series_radius<T: Real>(n: usize) -> T {
    T::of(SERIES_RADIUS).max(T::of_usize(n) / T::of(2.0))
}

/// `j0` and `j1` from their closed forms, switching to series near the origin.
pub(crate) fn j0_j1<T: Real>(z: Cx<T>) -> (Cx<T>, Cx<T>) {
    if z.norm() < T::of(SERIES_RADIUS) {
        return (series(0, z), series(1, z));
    }
    let (s, c) = (z.sin(), z.cos());
    let j0 = s / z;
    let j1 = (j0 - c) / z;
    (j0, j1)
}

fn fill_sequence<T: Real>(z: Cx<T>, out: &mut [Cx<T>]) {
    if out.is_empty() {
        return;
    }
    let zero = Cx::new(T::zero(), T::zero());
    if z == zero {
        out.iter_mut().for_each(|v| *v = zero);
        out[0] = Cx::new(T::one(), T::zero());
        return;
    }
    let nmax = out.len() - 1;
    let az = z.norm();

    // Orders strictly below `first_series` come from recurrence.
    let first_series = if az < T::of(SERIES_RADIUS) {
        0
    } else {
        (T::of(2.0) * az).floor().to_usize().unwrap_or(usize::MAX).saturating_add(1)
    };
    for (n, slot) in out.iter_mut().enumerate().skip(first_series) {
        *slot = series(n, z);
    }
    if first_series == 0 {
        return;
    }
    let n_rec = nmax.min(first_series - 1);
    let (j0, j1) = j0_j1(z);
    out[0] = j0;
    if n_rec == 0 {
        return;
    }
    out[1] = j1;
    if n_rec == 1 {
        return;
    }

    // Upward recurrence is stable while the order stays below |z| and the
    // recessive growth exp(n^2 |Im z| / |z|^2) stays within UPWARD_GROWTH.
    let mut n_up_bound = az;
    if z.im != T::zero() {
        n_up_bound = n_up_bound.min((T::of(UPWARD_GROWTH) * az * az / z.im.abs()).sqrt());
    }
    let n_up = n_rec.min(n_up_bound.floor().to_usize().unwrap_or(0).max(1));
    for n in 1..n_up {
        out[n + 1] = out[n] * (T::of_usize(2 * n + 1)) / z - out[n - 1];
    }
    if n_up == n_rec {
        return;
    }

    // Backward recurrence on ratios r_n = j_n / j_{n-1} for the orders above.
    let start = n_rec + az.ceil().to_usize().unwrap_or(0) + BACKWARD_MARGIN;
    let tiny = T::min_positive_value().sqrt();
    let mut ratio = zero;
    let mut ratios = vec![zero; n_rec + 1];
    for n in (n_up..=start).rev() {
        let mut den = Cx::new(T::of_usize(2 * n + 1), T::zero()) - z * ratio;
        if den.norm() < tiny {
            den = Cx::new(tiny, T::zero());
        }
        ratio = z / den;
        if n <= n_rec {
            ratios[n] = ratio;
        }
    }
    // Anchor on the larger of the two last upward values.
    if out[n_up].norm() < out[n_up - 1].norm() {
        out[n_up] = ratios[n_up] * out[n_up - 1];
    }
    let mut v = out[n_up];
    for n in n_up + 1..=n_rec {
        v = v * ratios[n];
        out[n] = v;
    }
}

/// Ascending series `z^n/(2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)...(2n+2k+1))`.
pub(crate) fn series<T: Real>(n: usize, z: Cx<T>) -> Cx<T> {
    let one = Cx::new(T::one(), T::zero());
    let mut pre = one;
    for k in 1..=n {
        pre = pre * z / T::of_usize(2 * k + 1);
    }
    let w = -(z * z) / T::of(2.0);
    let mut term = one;
    let mut sum = one;
    let eps = T::epsilon();
    for k in 1..=MAX_SERIES_TERMS {
        term = term * w / (T::of_usize(k) * T::of_usize(2 * n + 2 * k + 1));
        sum = sum + term;
        if k >= MIN_SERIES_TERMS && term.norm() <= eps * sum.norm() {
            break;
        }
    }
    pre * sum
}

//! Independent reference computations for the forward solver.

use num_complex::Complex64 as C;

/// Classical RK4 with a fixed number of steps for `-y'' + q y = rho^2 y`.
pub fn rk4(q: &dyn Fn(f64) -> C, rho: C, l: f64, y0: C, dy0: C, steps: usize) -> (C, C) {
    let lam = rho * rho;
    let f = |x: f64, y: C, dy: C| (dy, (q(x) - lam) * y);
    let h = l / steps as f64;
    let (mut y, mut dy) = (y0, dy0);
    for i in 0..steps {
        let x = i as f64 * h;
        let k1 = f(x, y, dy);
        let k2 = f(x + h / 2.0, y + k1.0 * (h / 2.0), dy + k1.1 * (h / 2.0));
        let k3 = f(x + h / 2.0, y + k2.0 * (h / 2.0), dy + k2.1 * (h / 2.0));
        let k4 = f(x + h, y + k3.0 * h, dy + k3.1 * h);
        y += (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (h / 6.0);
        dy += (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (h / 6.0);
    }
    (y, dy)
}

/// RK4 at `n` and `2n` steps combined by Richardson extrapolation of the
/// fourth-order error.
pub fn rk4_richardson(q: &dyn Fn(f64) -> C, rho: C, l: f64, y0: C, dy0: C, n: usize) -> C {
    let coarse = rk4(q, rho, l, y0, dy0, n).0;
    let fine = rk4(q, rho, l, y0, dy0, 2 * n).0;
    fine + (fine - coarse) / 15.0
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (Sturm sequence count).
fn sturm_count(d: &[f64], e: f64, x: f64) -> usize {
    let mut count = 0;
    let mut p = d[0] - x;
    if p < 0.0 {
        count += 1;
    }
    for &di in &d[1..] {
        let prev = if p == 0.0 { 1e-300 } else { p };
        p = di - x - e * e / prev;
        if p < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `count` eigenvalues of `-y'' + q y` with Dirichlet ends on `[0, l]`
/// using second-order finite differences on `n` interior points.
pub fn fd_dirichlet_eigenvalues(q: &dyn Fn(f64) -> f64, l: f64, n: usize, count: usize) -> Vec<f64> {
    let h = l / (n + 1) as f64;
    let d: Vec<f64> = (1..=n).map(|i| 2.0 / (h * h) + q(i as f64 * h)).collect();
    let e = -1.0 / (h * h);
    let lo0 = d.iter().fold(f64::INFINITY, |a, &b| a.min(b)) - 4.0 / (h * h);
    let hi0 = d.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) + 4.0 / (h * h);
    (0..count)
        .map(|k| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(&d, e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Finite-difference eigenvalues on three nested grids, extrapolated to
/// remove the `h^2` and `h^4` error terms.
pub fn fd_extrapolated(q: &dyn Fn(f64) -> f64, l: f64, m: usize, count: usize) -> Vec<f64> {
    // Interior counts m-1, 2m-1, 4m-1 give h = l/m, l/2m, l/4m.
    let a = fd_dirichlet_eigenvalues(q, l, m - 1, count);
    let b = fd_dirichlet_eigenvalues(q, l, 2 * m - 1, count);
    let c = fd_dirichlet_eigenvalues(q, l, 4 * m - 1, count);
    (0..count)
        .map(|k| {
            let r1 = (4.0 * b[k] - a[k]) / 3.0;
            let r2 = (4.0 * c[k] - b[k]) / 3.0;
            (16.0 * r2 - r1) / 15.0
        })
        .collect()
}

/// Reflection and transmission of a constant slab `q = c` on `[0, l]` by
/// matching plane waves at both interfaces; wave `e^{-i rho x}` exits right.
pub fn slab(c: C, rho: C, l: f64) -> (C, C) {
    let i = C::new(0.0, 1.0);
    let k = (rho * rho - c).sqrt();
    // Inside: y = P e^{-ikx} + Q e^{ikx}; at x = l match y = e^{-i rho x}.
    let w = (-i * rho * l).exp();
    let em = (-i * k * l).exp();
    let ep = (i * k * l).exp();
    // P em + Q ep = w ; -ik P em + ik Q ep = -i rho w
    let q_amp = (w - rho * w / k) / (2.0 * ep);
    let p_amp = (w + rho * w / k) / (2.0 * em);
    // At x = 0: A + B = P + Q ; -i rho A + i rho B = -ik P + ik Q
    let y0 = p_amp + q_amp;
    let dy0 = -i * k * p_amp + i * k * q_amp;
    let a = (y0 - dy0 / (i * rho)) / 2.0;
    let b = (y0 + dy0 / (i * rho)) / 2.0;
    (b / a, 1.0 / a)
}

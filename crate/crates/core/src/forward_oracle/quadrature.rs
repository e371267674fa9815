use super::potential::PotentialSpec;
use crate::scalar::{CompensatedSum, Cx, Real};

const GAUSS_POINTS: usize = 10;
const PANELS: usize = 64;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `int_a^b q(s) ds` by composite Gauss-Legendre, splitting at breakpoints.
pub fn integrate_potential<T: Real>(q: &PotentialSpec<T>, a: T, b: T) -> Cx<T> {
    let rule = gauss_legendre(GAUSS_POINTS);
    let (lo, hi, sign) = if a <= b { (a, b, T::one()) } else { (b, a, -T::one()) };
    let mut cuts = vec![lo];
    cuts.extend(q.breakpoints().iter().copied().filter(|&p| p > lo && p < hi));
    cuts.push(hi);
    let max_width = q.length() / T::of_usize(PANELS);
    let mut acc = CompensatedSum::new();
    for w in cuts.windows(2) {
        let span = w[1] - w[0];
        let pieces = (span / max_width).ceil().to_usize().unwrap_or(1).max(1);
        let h = span / T::of_usize(pieces);
        for p in 0..pieces {
            let mid = w[0] + h * (T::of_usize(p) + T::of(0.5));
            for &(x, wt) in &rule {
                acc.add(q.eval(mid + h * T::of(0.5 * x)) * (h * T::of(0.5 * wt)));
            }
        }
    }
    acc.value() * sign
}

/// `omega(x) = (1/2) int_0^x q(s) ds`.
pub fn omega<T: Real>(q: &PotentialSpec<T>, x: T) -> Cx<T> {
    integrate_potential(q, T::zero(), x) * T::of(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let rule = gauss_legendre(10);
        let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-15);
        let s: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn omega_of_kinked_potential() {
        let q = PotentialSpec::new(1.0_f64, |x: f64| cx((x - 0.3).abs(), 0.0))
            .unwrap()
            .with_breakpoints(vec![0.3]);
        let exact = 0.5 * (0.3 * 0.3 / 2.0 + 0.7 * 0.7 / 2.0);
        assert!((omega(&q, 1.0).re - exact).abs() < 1e-15);
        assert!((integrate_potential(&q, 1.0, 0.0).re + 2.0 * exact).abs() < 1e-15);
    }
}

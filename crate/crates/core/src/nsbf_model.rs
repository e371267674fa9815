//! Truncated regrouped Neumann series of Bessel functions for the solutions
//! `phi`, `S` and `T`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric_kernel::{combo_c1, combo_c2, spherical_bessel_sequence};
use crate::scalar::{is_finite, CompensatedSum, Cx, Real};

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 30;

/// Series coefficients at `x = L`, as produced by the first-stage system.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointCoefficients<T: Real> {
    pub length: T,
    pub omega_l: Cx<T>,
    pub q_minus_l: Cx<T>,
    pub q_plus_l: Cx<T>,
    pub phi_n: Vec<Cx<T>>,
    pub sigma_n: Vec<Cx<T>>,
}

/// Unknowns of the main system at an interior point `x`; `q_big` is
/// `Q(x) = q(x)/4 - omega(x)^2/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCoefficients<T: Real> {
    pub x: T,
    pub omega: Cx<T>,
    pub q_big: Cx<T>,
    pub phi_n: Vec<Cx<T>>,
    pub sigma_n: Vec<Cx<T>>,
    pub theta_n: Vec<Cx<T>>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct EndpointDoc {
    L: f64,
    N: usize,
    omega_L: [f64; 2],
    q_minus_L: [f64; 2],
    q_plus_L: [f64; 2],
    phi_n: Vec<[f64; 2]>,
    sigma_n: Vec<[f64; 2]>,
}

fn pair<T: Real>(z: Cx<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn unpair<T: Real>(p: [f64; 2]) -> Cx<T> {
    Cx::new(T::of(p[0]), T::of(p[1]))
}

impl<T: Real> EndpointCoefficients<T> {
    pub fn order(&self) -> usize {
        self.phi_n.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.phi_n.len();
        if n == 0 || n > MAX_ORDER {
            return Err(invalid(format!("truncation order must be in 1..={MAX_ORDER}, got {n}")));
        }
        if self.sigma_n.len() != n {
            return Err(invalid("phi_n and sigma_n must have the same length"));
        }
        if !(self.length > T::zero() && self.length.is_finite()) {
            return Err(invalid("interval length must be positive and finite"));
        }
        let scalars = [self.omega_l, self.q_minus_l, self.q_plus_l];
        if !scalars.iter().chain(&self.phi_n).chain(&self.sigma_n).all(|&z| is_finite(z)) {
            return Err(invalid("endpoint coefficients must be finite"));
        }
        Ok(())
    }

    /// `phi_N(rho, L)`.
    pub fn phi_at_l(&self, rho: Cx<T>) -> Result<Cx<T>> {
        eval_phi_n(self.length, rho, self.omega_l, self.q_minus_l, &self.phi_n)
    }

    /// `S_N(rho, L)`.
    pub fn s_at_l(&self, rho: Cx<T>) -> Result<Cx<T>> {
        eval_s_n(self.length, rho, self.omega_l, self.q_plus_l, &self.sigma_n)
    }

    /// `q(0) = 2 (q+(L) - q-(L))`.
    pub fn q_at_zero(&self) -> Cx<T> {
        (self.q_plus_l - self.q_minus_l) * T::of(2.0)
    }

    /// `q(L) = 2 (q+(L) + q-(L) + omega(L)^2)`.
    pub fn q_at_l(&self) -> Cx<T> {
        (self.q_plus_l + self.q_minus_l + self.omega_l * self.omega_l) * T::of(2.0)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = EndpointDoc {
            L: self.length.as_f64(),
            N: self.order(),
            omega_L: pair(self.omega_l),
            q_minus_L: pair(self.q_minus_l),
            q_plus_L: pair(self.q_plus_l),
            phi_n: self.phi_n.iter().map(|&z| pair(z)).collect(),
            sigma_n: self.sigma_n.iter().map(|&z| pair(z)).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: EndpointDoc = serde_json::from_str(text)?;
        if doc.phi_n.len() != doc.N || doc.sigma_n.len() != doc.N {
            return Err(Error::Format(format!(
                "N = {} but phi_n has {} and sigma_n has {} entries",
                doc.N,
                doc.phi_n.len(),
                doc.sigma_n.len()
            )));
        }
        let c = Self {
            length: T::of(doc.L),
            omega_l: unpair(doc.omega_L),
            q_minus_l: unpair(doc.q_minus_L),
            q_plus_l: unpair(doc.q_plus_L),
            phi_n: doc.phi_n.into_iter().map(unpair).collect(),
            sigma_n: doc.sigma_n.into_iter().map(unpair).collect(),
        };
        c.validate()?;
        Ok(c)
    }
}

impl<T: Real> LocalCoefficients<T> {
    /// `q(x) = 4 Q(x) + 2 omega(x)^2`.
    pub fn potential(&self) -> Cx<T> {
        self.q_big * T::of(4.0) + self.omega * self.omega * T::of(2.0)
    }
}

fn check_rho<T: Real>(rho: Cx<T>) -> Result<()> {
    if rho.norm() == T::zero() || !is_finite(rho) {
        return Err(invalid("series evaluation needs a finite nonzero rho"));
    }
    Ok(())
}

fn bessel_orders<T: Real>(z: Cx<T>, count: usize) -> Result<Vec<Cx<T>>> {
    let mut j = vec![Cx::new(T::zero(), T::zero()); count];
    spherical_bessel_sequence(z, &mut j)?;
    Ok(j)
}

/// `sum_{n=1}^{N} (-1)^n c_n j_{2n + shift}(z)` from a precomputed sequence.
fn alternating_tail<T: Real>(coeffs: &[Cx<T>], j: &[Cx<T>], shift: usize) -> Cx<T> {
    let mut acc = CompensatedSum::new();
    for (k, &c) in coeffs.iter().enumerate() {
        let n = k + 1;
        let term = c * j[2 * n + shift];
        acc.add(if n % 2 == 0 { term } else { -term });
    }
    acc.value()
}

/// `phi_N(rho, x) = cos(rho x) + omega sin(rho x)/rho - x j1(rho x) q-/rho
///   - rho^-2 sum (-1)^n phi_n j_{2n}(rho x)`.
pub fn eval_phi_n<T: Real>(x: T, rho: Cx<T>, omega: Cx<T>, q_minus: Cx<T>, phi_n: &[Cx<T>]) -> Result<Cx<T>> {
    check_rho(rho)?;
    let z = rho * x;
    let j = bessel_orders(z, 2 * phi_n.len() + 2)?;
    let tail = alternating_tail(phi_n, &j, 0);
    Ok(z.cos() + omega * z.sin() / rho - q_minus * j[1] * x / rho - tail / (rho * rho))
}

/// `S_N(rho, x) = sin(rho x)/rho + omega c1(rho x)/rho^2 + q+ c2(rho x)/rho^3
///   - rho^-3 sum (-1)^n sigma_n j_{2n+1}(rho x)`.
pub fn eval_s_n<T: Real>(x: T, rho: Cx<T>, omega: Cx<T>, q_plus: Cx<T>, sigma_n: &[Cx<T>]) -> Result<Cx<T>> {
    check_rho(rho)?;
    let z = rho * x;
    let j = bessel_orders(z, 2 * sigma_n.len() + 2)?;
    let tail = alternating_tail(sigma_n, &j, 1);
    let r2 = rho * rho;
    let r3 = r2 * rho;
    Ok(z.sin() / rho + omega * combo_c1(z) / r2 + q_plus * combo_c2(z) / r3 - tail / r3)
}

/// `T_N(rho, x) = -sin(rho (L-x))/rho - omega_L c1/rho^2 - q_L+ c2/rho^3
///   + rho^-3 sum (-1)^n theta_n j_{2n+1}(rho (L-x))`.
pub fn eval_t_n<T: Real>(
    x: T,
    length: T,
    rho: Cx<T>,
    omega_l: Cx<T>,
    q_l_plus: Cx<T>,
    theta_n: &[Cx<T>],
) -> Result<Cx<T>> {
    if !(x >= T::zero() && x <= length) {
        return Err(invalid("evaluation point must lie in [0, L]"));
    }
    Ok(-eval_s_n(length - x, rho, omega_l, q_l_plus, theta_n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn sample_coeffs() -> (Vec<Cx<f64>>, Cx<f64>, Cx<f64>) {
        let v = (1..=6).map(|n| cx(1.0 / n as f64, -0.3 / (n * n) as f64)).collect();
        (v, cx(0.7, 0.2), cx(-1.1, 0.4))
    }

    #[test]
    fn zero_coefficients_give_free_solutions() {
        let z = vec![cx(0.0, 0.0); 4];
        let o = cx(0.0, 0.0);
        let rho = cx(3.1, 0.2);
        let x = 1.3;
        let p = eval_phi_n(x, rho, o, o, &z).unwrap();
        assert!((p - (rho * x).cos()).norm() < 1e-15);
        let s = eval_s_n(x, rho, o, o, &z).unwrap();
        assert!((s - (rho * x).sin() / rho).norm() < 1e-15);
        let t = eval_t_n(x, 2.0, rho, o, o, &z).unwrap();
        assert!((t + (rho * (2.0 - x)).sin() / rho).norm() < 1e-15);
    }

    #[test]
    fn parity_conjugation_and_terminal_zero() {
        let (c, w, q) = sample_coeffs();
        for rho in [cx(0.4, 0.0), cx(7.0, 0.5), cx(80.0, -1.0)] {
            let a = eval_phi_n(1.7, rho, w, q, &c).unwrap();
            let b = eval_phi_n(1.7, -rho, w, q, &c).unwrap();
            assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
            let a = eval_s_n(1.7, rho, w, q, &c).unwrap();
            let b = eval_s_n(1.7, -rho, w, q, &c).unwrap();
            assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
            assert_eq!(eval_t_n(2.5, 2.5, rho, w, q, &c).unwrap(), cx(0.0, 0.0));
        }
        let real: Vec<_> = c.iter().map(|z| cx(z.re, 0.0)).collect();
        let v = eval_phi_n(1.2, cx(5.0, 0.0), cx(0.3, 0.0), cx(0.9, 0.0), &real).unwrap();
        assert_eq!(v.im, 0.0);
        let v = eval_s_n(1.2, cx(5.0, 0.0), cx(0.3, 0.0), cx(0.9, 0.0), &real).unwrap();
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn zero_rho_is_rejected() {
        let (c, w, q) = sample_coeffs();
        assert!(eval_phi_n(1.0, cx(0.0, 0.0), w, q, &c).is_err());
        assert!(eval_s_n(1.0, cx(0.0, 0.0), w, q, &c).is_err());
        assert!(eval_t_n(3.0, 2.0, cx(1.0, 0.0), w, q, &c).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (c, w, q) = sample_coeffs();
        let e = EndpointCoefficients { length: 2.0, omega_l: w, q_minus_l: q, q_plus_l: w * q, phi_n: c.clone(), sigma_n: c };
        let text = e.to_json().unwrap();
        assert!(text.contains("\"omega_L\""));
        let back = EndpointCoefficients::<f64>::from_json(&text).unwrap();
        assert_eq!(back, e);
        let broken = text.replacen("\"N\": 6", "\"N\": 5", 1);
        assert!(EndpointCoefficients::<f64>::from_json(&broken).is_err());
    }
}

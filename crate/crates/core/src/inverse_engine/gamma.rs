use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::forward_oracle::LOW_FREQUENCY_FLOOR;
use crate::nsbf_model::{eval_phi_n, eval_s_n, EndpointCoefficients};
use crate::scalar::{is_finite, Cx, Real};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GammaDistribution {
    #[default]
    LogUniform,
    Uniform,
    Custom,
}

/// Points `gamma_k` where the characteristic functions are synthesized.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaGrid<T: Real> {
    pub points: Vec<Cx<T>>,
    pub distribution: GammaDistribution,
    /// Points dropped as near-duplicates.
    pub removed: usize,
}

const DEDUP_GAP: f64 = 1e-12;

impl<T: Real> GammaGrid<T> {
    /// Custom grid; near-duplicate points are dropped.
    pub fn custom(points: Vec<Cx<T>>) -> Result<Self> {
        Self::build(points, GammaDistribution::Custom)
    }

    fn build(points: Vec<Cx<T>>, distribution: GammaDistribution) -> Result<Self> {
        let floor = T::of(LOW_FREQUENCY_FLOOR);
        if let Some(p) = points.iter().find(|p| !is_finite(**p) || p.norm() < floor) {
            return Err(invalid(format!("gamma point {p} is non-finite or below the low-frequency floor")));
        }
        let gap = T::of(DEDUP_GAP);
        let total = points.len();
        let mut kept: Vec<Cx<T>> = Vec::with_capacity(points.len());
        for p in points {
            if !kept.iter().any(|q| (*q - p).norm() < gap * q.norm().max(p.norm())) {
                kept.push(p);
            }
        }
        let removed = total - kept.len();
        if removed > 0 {
            warn!("dropped {removed} near-duplicate gamma points");
        }
        Ok(Self {
            points: kept,
            distribution,
            removed,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Real grid of `m` points on `[gmin, gmax]`, uniform in `lg gamma` or in `gamma`.
pub fn make_gamma_grid<T: Real>(m: usize, gmin: T, gmax: T, distribution: GammaDistribution) -> Result<GammaGrid<T>> {
    if !(gmin > T::zero() && gmax > gmin && gmax.is_finite()) {
        return Err(invalid("gamma range must satisfy 0 < gmin < gmax"));
    }
    if m < 2 {
        return Err(invalid("gamma grid needs at least 2 points"));
    }
    let denom = T::of_usize(m - 1);
    let points: Vec<Cx<T>> = match distribution {
        GammaDistribution::LogUniform => {
            let (a, b) = (gmin.log10(), gmax.log10());
            (0..m)
                .map(|k| {
                    let v = if k == 0 {
                        gmin
                    } else if k == m - 1 {
                        gmax
                    } else {
                        T::of(10.0).powf(a + (b - a) * T::of_usize(k) / denom)
                    };
                    Cx::new(v, T::zero())
                })
                .collect()
        }
        GammaDistribution::Uniform => (0..m)
            .map(|k| Cx::new(gmin + (gmax - gmin) * T::of_usize(k) / denom, T::zero()))
            .collect(),
        GammaDistribution::Custom => return Err(invalid("custom grids are built from explicit points")),
    };
    GammaGrid::build(points, distribution)
}

/// `S_k = S_N(gamma_k, L)` and `F_k = phi_N(gamma_k, L)`.
#[derive(Clone, Debug)]
pub struct CharacteristicSamples<T: Real> {
    pub s: Vec<Cx<T>>,
    pub f: Vec<Cx<T>>,
    pub grid: GammaGrid<T>,
}

pub fn synthesize_characteristics<T: Real>(
    c: &EndpointCoefficients<T>,
    grid: &GammaGrid<T>,
) -> Result<CharacteristicSamples<T>> {
    c.validate()?;
    let l = c.length;
    let pairs = grid
        .points
        .par_iter()
        .map(|&g| {
            Ok((
                eval_s_n(l, g, c.omega_l, c.q_plus_l, &c.sigma_n)?,
                eval_phi_n(l, g, c.omega_l, c.q_minus_l, &c.phi_n)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (s, f) = pairs.into_iter().unzip();
    Ok(CharacteristicSamples {
        s,
        f,
        grid: grid.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_and_uniform_grids() {
        let g = make_gamma_grid(3, 0.1_f64, 1000.0, GammaDistribution::LogUniform).unwrap();
        let v: Vec<f64> = g.points.iter().map(|p| p.re).collect();
        assert_eq!(v[0], 0.1);
        assert!((v[1] - 10.0).abs() < 1e-13);
        assert_eq!(v[2], 1000.0);
        let g = make_gamma_grid(5, 1.0_f64, 5.0, GammaDistribution::Uniform).unwrap();
        let v: Vec<f64> = g.points.iter().map(|p| p.re).collect();
        assert_eq!(v, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(make_gamma_grid(5, 2.0_f64, 1.0, GammaDistribution::Uniform).is_err());
        assert!(make_gamma_grid(5, 0.0_f64, 1.0, GammaDistribution::Uniform).is_err());
    }

    #[test]
    fn custom_grid_dedups() {
        let p = vec![Cx::new(1.0, 0.0), Cx::new(1.0 + 1e-15, 0.0), Cx::new(2.0, 0.0)];
        let g = GammaGrid::custom(p).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.removed, 1);
        assert!(GammaGrid::custom(vec![Cx::new(1e-5, 0.0)]).is_err());
    }
}

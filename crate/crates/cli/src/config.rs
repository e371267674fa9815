//! Flat TOML experiment configuration.

use std::path::Path;

use nsbf_core::forward_oracle::{OdeTolerance, PotentialSpec, LOW_FREQUENCY_FLOOR};
use nsbf_core::inverse_engine::{GammaDistribution, InverseConfig, RecoveryOption, DEFAULT_MIN_SUCCESS};
use nsbf_core::numeric_kernel::{LstsqMethod, LstsqOptions};
use nsbf_core::potentials;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataMode {
    ProblemA,
    Weyl,
    TwoSpectra,
    Scattering,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoSpec {
    Uniform,
    Random,
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PivotedQr,
    Svd,
}

/// Which recovery options to run: "1", "2" or "both".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OptionSel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "both")]
    Both,
}

impl OptionSel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" => Some(Self::One),
            "2" => Some(Self::Two),
            "both" => Some(Self::Both),
            _ => None,
        }
    }

    pub fn options(self) -> Vec<RecoveryOption> {
        match self {
            Self::One => vec![RecoveryOption::Derivative],
            Self::Two => vec![RecoveryOption::Algebraic],
            Self::Both => vec![RecoveryOption::Derivative, RecoveryOption::Algebraic],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Builtin name, `const(re)` / `const(re, im)`, or an expression in `x`.
    pub potential: String,
    /// Required for expressions; builtins carry their own interval.
    pub length: Option<f64>,
    pub data_mode: DataMode,
    pub rho_spec: RhoSpec,
    pub rho_count: usize,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub rho_values: Vec<f64>,
    pub seed: Option<u64>,
    /// Problem-A coefficients as expressions in `rho`.
    pub a: String,
    pub b: String,
    /// Two-spectra mode: eigenvalues taken from each spectrum.
    pub eigen_count: usize,
    /// Robin parameter of the first spectrum; the second is Dirichlet.
    pub robin_h: f64,
    pub n: Option<usize>,
    pub n_first: Option<usize>,
    pub m: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub distribution: GammaDistribution,
    pub cutoff: f64,
    pub method: Method,
    pub equilibrate: bool,
    pub x_grid_size: usize,
    pub recovery_option: OptionSel,
    pub ode_tol: f64,
    /// Largest acceptable relative residual of any per-point solve.
    pub residual_threshold: f64,
    pub min_success: f64,
    pub plot: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            potential: "zero".into(),
            length: None,
            data_mode: DataMode::ProblemA,
            rho_spec: RhoSpec::Uniform,
            rho_count: 101,
            rho_lo: 0.1,
            rho_hi: 100.0,
            rho_values: Vec::new(),
            seed: None,
            a: "sin(rho)".into(),
            b: "cos(rho)".into(),
            eigen_count: 15,
            robin_h: 0.0,
            n: None,
            n_first: None,
            m: 700,
            gamma_min: 0.1,
            gamma_max: 1500.0,
            distribution: GammaDistribution::LogUniform,
            cutoff: 1e-12,
            method: Method::PivotedQr,
            equilibrate: false,
            x_grid_size: 203,
            recovery_option: OptionSel::Both,
            ode_tol: 1e-12,
            residual_threshold: 1e-2,
            min_success: DEFAULT_MIN_SUCCESS,
            plot: true,
        }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::BadInput(msg.into())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| bad(format!("config: {e}")))?;
        Ok(cfg)
    }

    /// Truncation order; Example 1 uses 12, everything else 18.
    pub fn order(&self) -> usize {
        self.n.unwrap_or(if self.potential == "example1" { 12 } else { 18 })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let n = self.order();
        if n == 0 || n > nsbf_core::nsbf_model::MAX_ORDER {
            return Err(bad(format!("n must be in 1..={}", nsbf_core::nsbf_model::MAX_ORDER)));
        }
        if let Some(l) = self.length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(bad("length must be positive and finite"));
            }
        }
        if self.data_mode != DataMode::TwoSpectra {
            match self.rho_spec {
                RhoSpec::Explicit => {
                    if self.rho_values.is_empty() {
                        return Err(bad("rho_spec = \"explicit\" needs rho_values"));
                    }
                }
                RhoSpec::Uniform | RhoSpec::Random => {
                    if self.rho_count < 2 {
                        return Err(bad("rho_count must be at least 2"));
                    }
                    if !(self.rho_lo.is_finite() && self.rho_hi.is_finite() && self.rho_lo < self.rho_hi) {
                        return Err(bad("need finite rho_lo < rho_hi"));
                    }
                    if self.rho_hi < LOW_FREQUENCY_FLOOR {
                        return Err(bad("rho range lies below the low-frequency floor"));
                    }
                }
            }
        } else if self.eigen_count == 0 {
            return Err(bad("eigen_count must be positive"));
        }
        if !(self.gamma_min > 0.0 && self.gamma_min < self.gamma_max && self.gamma_max.is_finite()) {
            return Err(bad("need 0 < gamma_min < gamma_max"));
        }
        if !(self.cutoff > 0.0 && self.cutoff < 1.0) {
            return Err(bad("cutoff must lie in (0, 1)"));
        }
        if self.x_grid_size < 9 {
            return Err(bad("x_grid_size must be at least 9"));
        }
        if !(self.ode_tol > 0.0 && self.ode_tol < 1e-3) {
            return Err(bad("ode_tol must lie in (0, 1e-3)"));
        }
        if !(self.residual_threshold > 0.0) {
            return Err(bad("residual_threshold must be positive"));
        }
        if !(self.min_success > 0.0 && self.min_success <= 1.0) {
            return Err(bad("min_success must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> OdeTolerance<f64> {
        OdeTolerance::uniform(self.ode_tol)
    }

    pub fn potential(&self) -> Result<PotentialSpec<f64>, CliError> {
        resolve_potential(&self.potential, self.length)
    }

    /// Spectral parameters for the data-generating modes other than two spectra.
    pub fn rhos(&self) -> Result<Vec<C>, CliError> {
        match self.rho_spec {
            RhoSpec::Explicit => {
                if let Some(r) = self.rho_values.iter().find(|r| !(r.abs() >= LOW_FREQUENCY_FLOOR)) {
                    return Err(bad(format!("rho = {r} is below the low-frequency floor {LOW_FREQUENCY_FLOOR}")));
                }
                Ok(self.rho_values.iter().map(|&r| C::new(r, 0.0)).collect())
            }
            RhoSpec::Uniform => {
                let n = self.rho_count;
                let h = (self.rho_hi - self.rho_lo) / (n - 1) as f64;
                let rhos: Vec<C> = (0..n).map(|k| C::new(self.rho_lo + h * k as f64, 0.0)).collect();
                if rhos.iter().any(|r| r.norm() < LOW_FREQUENCY_FLOOR) {
                    return Err(bad("uniform rho grid touches the low-frequency floor"));
                }
                Ok(rhos)
            }
            RhoSpec::Random => {
                let seed = self.seed.ok_or_else(|| bad("rho_spec = \"random\" needs a seed (config key or --seed)"))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(self.rho_count);
                while out.len() < self.rho_count {
                    let r: f64 = rng.gen_range(self.rho_lo..self.rho_hi);
                    if r.abs() >= LOW_FREQUENCY_FLOOR {
                        out.push(C::new(r, 0.0));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn coefficient_exprs(&self) -> Result<(Expr, Expr), CliError> {
        let a = Expr::parse(&self.a, "rho").map_err(|e| bad(format!("a: {e}")))?;
        let b = Expr::parse(&self.b, "rho").map_err(|e| bad(format!("b: {e}")))?;
        Ok((a, b))
    }

    pub fn inverse_config(&self) -> InverseConfig<f64> {
        let solver = LstsqOptions {
            cutoff: self.cutoff,
            equilibrate: self.equilibrate,
            method: match self.method {
                Method::PivotedQr => LstsqMethod::PivotedQr,
                Method::Svd => LstsqMethod::Svd,
            },
        };
        InverseConfig {
            n_first: self.n_first,
            n_main: self.order(),
            gamma_count: self.m,
            gamma_min: self.gamma_min,
            gamma_max: self.gamma_max,
            distribution: self.distribution,
            custom_gamma: None,
            first_solver: solver,
            main_solver: solver,
            grid_points: self.x_grid_size,
            min_success: self.min_success,
        }
    }
}

/// Builtin name, `const(...)`, or an expression in `x`.
pub fn resolve_potential(spec: &str, length: Option<f64>) -> Result<PotentialSpec<f64>, CliError> {
    let spec = spec.trim();
    if potentials::BUILTIN_NAMES.contains(&spec) {
        return potentials::builtin(spec, length.unwrap_or(1.0)).map_err(|e| bad(e.to_string()));
    }
    let l = length.unwrap_or(1.0);
    if let Some(inner) = spec.strip_prefix("const(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("bad constant '{s}'")));
        let c = match parts.as_slice() {
            [re] => C::new(num(re)?, 0.0),
            [re, im] => C::new(num(re)?, num(im)?),
            _ => return Err(bad("const takes one or two numbers")),
        };
        return PotentialSpec::constant(l, c).map_err(|e| bad(e.to_string()));
    }
    let length = length.ok_or_else(|| bad("expression potentials need 'length'"))?;
    let e = Expr::parse(spec, "x").map_err(|e| bad(format!("potential: {e}")))?;
    PotentialSpec::new(length, move |x: f64| e.eval(C::new(x, 0.0))).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = ExperimentConfig::from_toml("potential = \"example2\"\nrho_count = 11\n").unwrap();
        assert_eq!(cfg.order(), 18);
        assert_eq!(cfg.rho_count, 11);
        assert_eq!(cfg.m, 700);
        cfg.validate().unwrap();
        let ex1 = ExperimentConfig::from_toml("potential = \"example1\"\ndata_mode = \"two_spectra\"").unwrap();
        assert_eq!(ex1.order(), 12);
        assert_eq!(ex1.data_mode, DataMode::TwoSpectra);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(ExperimentConfig::from_toml("nonsense = 1").is_err());
        assert!(ExperimentConfig::from_toml("rho_count = \"many\"").is_err());
        let random = ExperimentConfig::from_toml("rho_spec = \"random\"").unwrap();
        random.validate().unwrap();
        assert!(random.rhos().is_err());
        let cut = ExperimentConfig::from_toml("cutoff = 2.0").unwrap();
        assert!(cut.validate().is_err());
    }

    #[test]
    fn random_rhos_are_seeded() {
        let mut cfg = ExperimentConfig {
            rho_spec: RhoSpec::Random,
            rho_count: 50,
            rho_lo: 0.0,
            rho_hi: 15.0,
            seed: Some(42),
            ..Default::default()
        };
        let a = cfg.rhos().unwrap();
        assert_eq!(a, cfg.rhos().unwrap());
        assert!(a.iter().all(|r| r.re >= LOW_FREQUENCY_FLOOR && r.re < 15.0));
        cfg.seed = Some(43);
        assert_ne!(a, cfg.rhos().unwrap());
    }

    #[test]
    fn potential_references() {
        let q = resolve_potential("const(2, -1)", Some(3.0)).unwrap();
        assert_eq!((q.length(), q.eval(1.0)), (3.0, C::new(2.0, -1.0)));
        let q = resolve_potential("x^2 + i", Some(2.0)).unwrap();
        assert_eq!(q.eval(2.0), C::new(4.0, 1.0));
        assert!(resolve_potential("x^2", None).is_err());
        assert!((resolve_potential("example1", None).unwrap().length() - std::f64::consts::PI).abs() < 1e-15);
    }
}

//! Conversion of Weyl-function, two-spectra and scattering data into
//! Problem-A samples, plus their file formats.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::forward_oracle::SpectralSample;
use crate::scalar::{is_finite, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylSample<T: Real> {
    pub rho: Cx<T>,
    pub m: Cx<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringSample<T: Real> {
    pub rho: Cx<T>,
    pub r: Cx<T>,
    pub t: Cx<T>,
}

/// Boundary form at `x = 0` for a two-spectra dataset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryForm<T: Real> {
    /// `y'(0) = h y(0)`.
    Robin(Cx<T>),
    /// `y(0) = 0`.
    Dirichlet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoSpectraData<T: Real> {
    /// Spectral parameters of the first spectrum (boundary form `h1`).
    pub mu: Vec<Cx<T>>,
    /// Spectral parameters of the second spectrum (boundary form `h2`).
    pub nu: Vec<Cx<T>>,
    pub h1: BoundaryForm<T>,
    pub h2: BoundaryForm<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoSpectraVariant {
    RobinRobin,
    RobinDirichlet,
}

fn zero<T: Real>() -> Cx<T> {
    Cx::new(T::zero(), T::zero())
}

fn one<T: Real>() -> Cx<T> {
    Cx::new(T::one(), T::zero())
}

/// `a = M(rho)`, `b = 1`, `ell = 0`.
pub fn from_weyl<T: Real>(samples: &[WeylSample<T>]) -> Result<Vec<SpectralSample<T>>> {
    samples
        .iter()
        .map(|s| {
            if !(is_finite(s.rho) && is_finite(s.m)) {
                return Err(invalid("Weyl sample has non-finite entries"));
            }
            SpectralSample::new(s.rho, s.m, one(), zero())
        })
        .collect()
}

/// Interleaves the two spectra as `mu_0, nu_0, mu_1, nu_1, ...` with
/// `ell = 0` throughout.
pub fn from_two_spectra<T: Real>(data: &TwoSpectraData<T>, variant: TwoSpectraVariant) -> Result<Vec<SpectralSample<T>>> {
    if data.mu.is_empty() || data.nu.is_empty() {
        return Err(invalid("both spectra must be nonempty"));
    }
    let h1 = match data.h1 {
        BoundaryForm::Robin(h) => h,
        BoundaryForm::Dirichlet => return Err(invalid("the first boundary form must be Robin")),
    };
    let nu_ab = match (variant, data.h2) {
        (TwoSpectraVariant::RobinRobin, BoundaryForm::Robin(h2)) => {
            if h2 == h1 {
                return Err(invalid("h1 and h2 must differ"));
            }
            (one(), h2)
        }
        (TwoSpectraVariant::RobinDirichlet, BoundaryForm::Dirichlet) => (zero(), one()),
        _ => return Err(invalid("second boundary form does not match the requested variant")),
    };
    let mut out = Vec::with_capacity(data.mu.len() + data.nu.len());
    let longest = data.mu.len().max(data.nu.len());
    for k in 0..longest {
        if let Some(&rho) = data.mu.get(k) {
            out.push(SpectralSample::new(rho, one(), h1, zero())?);
        }
        if let Some(&rho) = data.nu.get(k) {
            out.push(SpectralSample::new(rho, nu_ab.0, nu_ab.1, zero())?);
        }
    }
    Ok(out)
}

/// `a = 1 + R`, `b = -i rho (1 - R)`, `ell = T e^{-i rho L}`.
pub fn from_scattering<T: Real>(samples: &[ScatteringSample<T>], length: T) -> Result<Vec<SpectralSample<T>>> {
    let i = Cx::new(T::zero(), T::one());
    samples
        .iter()
        .map(|s| {
            if s.rho.norm() == T::zero() {
                return Err(invalid("scattering sample needs rho != 0"));
            }
            let a = one::<T>() + s.r;
            let b = -i * s.rho * (one::<T>() - s.r);
            let ell = s.t * (-i * s.rho * length).exp();
            SpectralSample::new(s.rho, a, b, ell)
        })
        .collect()
}

fn read_rows(path: &Path, columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| {
            headers
                .iter()
                .position(|h| h == *c)
                .ok_or_else(|| Error::Format(format!("{}: missing column '{c}'", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals = idx
            .iter()
            .map(|&j| {
                rec.get(j)
                    .unwrap_or("")
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("{}: row {}: {e}", path.display(), line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(vals);
    }
    Ok(rows)
}

fn c<T: Real>(re: f64, im: f64) -> Cx<T> {
    Cx::new(T::of(re), T::of(im))
}

/// CSV with columns `re_rho, im_rho, re_M, im_M`.
pub fn read_weyl_csv<T: Real>(path: &Path) -> Result<Vec<WeylSample<T>>> {
    Ok(read_rows(path, &["re_rho", "im_rho", "re_M", "im_M"])?
        .into_iter()
        .map(|r| WeylSample { rho: c(r[0], r[1]), m: c(r[2], r[3]) })
        .collect())
}

/// CSV with columns `re_rho, im_rho, re_R, im_R, re_T, im_T`.
pub fn read_scattering_csv<T: Real>(path: &Path) -> Result<Vec<ScatteringSample<T>>> {
    Ok(read_rows(path, &["re_rho", "im_rho", "re_R", "im_R", "re_T", "im_T"])?
        .into_iter()
        .map(|r| ScatteringSample { rho: c(r[0], r[1]), r: c(r[2], r[3]), t: c(r[4], r[5]) })
        .collect())
}

/// CSV with columns `re_rho, im_rho, re_a, im_a, re_b, im_b, re_ell, im_ell`.
pub fn read_samples_csv<T: Real>(path: &Path) -> Result<Vec<SpectralSample<T>>> {
    read_rows(path, &["re_rho", "im_rho", "re_a", "im_a", "re_b", "im_b", "re_ell", "im_ell"])?
        .into_iter()
        .map(|r| SpectralSample::new(c(r[0], r[1]), c(r[2], r[3]), c(r[4], r[5]), c(r[6], r[7])))
        .collect()
}

pub fn write_samples_csv<T: Real>(path: &Path, samples: &[SpectralSample<T>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["re_rho", "im_rho", "re_a", "im_a", "re_b", "im_b", "re_ell", "im_ell"])?;
    for s in samples {
        let vals = [s.rho, s.a, s.b, s.ell];
        w.write_record(
            vals.iter()
                .flat_map(|z| [z.re, z.im])
                .map(|v| format!("{:.17e}", v.as_f64())),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// A complex number written either as a plain real or as `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum JsonComplex {
    Real(f64),
    Pair([f64; 2]),
}

impl JsonComplex {
    fn to<T: Real>(self) -> Cx<T> {
        match self {
            Self::Real(v) => c(v, 0.0),
            Self::Pair([re, im]) => c(re, im),
        }
    }

    fn from<T: Real>(z: Cx<T>) -> Self {
        Self::Pair([z.re.as_f64(), z.im.as_f64()])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum JsonBoundary {
    Flag(String),
    Value(JsonComplex),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TwoSpectraDoc {
    pub mu: Vec<JsonComplex>,
    pub nu: Vec<JsonComplex>,
    pub h1: JsonBoundary,
    pub h2: JsonBoundary,
}

fn boundary<T: Real>(b: &JsonBoundary) -> Result<BoundaryForm<T>> {
    match b {
        JsonBoundary::Flag(s) if s.eq_ignore_ascii_case("dirichlet") => Ok(BoundaryForm::Dirichlet),
        JsonBoundary::Flag(s) => Err(Error::Format(format!("unknown boundary flag '{s}'"))),
        JsonBoundary::Value(v) => Ok(BoundaryForm::Robin(v.to())),
    }
}

impl<T: Real> TwoSpectraData<T> {
    /// Variant implied by the second boundary form.
    pub fn variant(&self) -> TwoSpectraVariant {
        match self.h2 {
            BoundaryForm::Dirichlet => TwoSpectraVariant::RobinDirichlet,
            BoundaryForm::Robin(_) => TwoSpectraVariant::RobinRobin,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TwoSpectraDoc = serde_json::from_str(text)?;
        Ok(Self {
            mu: doc.mu.iter().map(|z| z.to()).collect(),
            nu: doc.nu.iter().map(|z| z.to()).collect(),
            h1: boundary(&doc.h1)?,
            h2: boundary(&doc.h2)?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let b = |f: BoundaryForm<T>| match f {
            BoundaryForm::Dirichlet => JsonBoundary::Flag("dirichlet".into()),
            BoundaryForm::Robin(h) => JsonBoundary::Value(JsonComplex::from(h)),
        };
        let doc = TwoSpectraDoc {
            mu: self.mu.iter().map(|&z| JsonComplex::from(z)).collect(),
            nu: self.nu.iter().map(|&z| JsonComplex::from(z)).collect(),
            h1: b(self.h1),
            h2: b(self.h2),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

pub fn read_two_spectra_json<T: Real>(path: &Path) -> Result<TwoSpectraData<T>> {
    TwoSpectraData::from_json(&std::fs::read_to_string(path)?)
}

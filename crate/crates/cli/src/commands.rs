use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use nsbf_core::forward_oracle::{
    find_real_eigenvalues, integrate_solution, omega, scattering_coefficients, shift_spectrum, weyl_function,
    LeftBoundary, PotentialSpec, SpectralSample,
};
use nsbf_core::inverse_engine::{reconstruct, RecoveryOption};
use nsbf_core::problem_adapters::{
    from_scattering, from_two_spectra, from_weyl, read_samples_csv, write_samples_csv, BoundaryForm,
    ScatteringSample, TwoSpectraData, WeylSample,
};
use nsbf_core::Error;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DataMode, ExperimentConfig, OptionSel};
use crate::svg::{two_panel, Series};
use crate::{CliError, Common};

const SAMPLES_FILE: &str = "samples.csv";
const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
struct Tolerance {
    rtol: f64,
    atol: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    potential: String,
    length: f64,
    data_mode: DataMode,
    samples: usize,
    seed: Option<u64>,
    ode_tolerance: Tolerance,
    files: Vec<String>,
    notes: Vec<String>,
    config: ExperimentConfig,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::BadInput(msg.into())
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::BadInput(format!("{}: {e}", path.display()))
}

/// Errors raised while producing reference data.
fn oracle_err(context: String, e: Error) -> CliError {
    match e {
        Error::InvalidArgument(_) | Error::Format(_) => bad(format!("{context}: {e}")),
        _ => CliError::Oracle(format!("{context}: {e}")),
    }
}

/// Errors raised by the reconstruction.
fn solver_err(e: Error) -> CliError {
    match e {
        Error::Underdetermined { rows, unknowns } => bad(format!(
            "{rows} samples for {unknowns} unknowns; supply at least 2N + 3 samples or lower n (N <= {})",
            rows.saturating_sub(3) / 2
        )),
        Error::DegenerateSystem(_) | Error::ProfileFailure { .. } => CliError::Degraded(e.to_string()),
        _ => bad(e.to_string()),
    }
}

fn load_config(common: &Common) -> Result<Option<ExperimentConfig>, CliError> {
    let Some(path) = &common.config else { return Ok(None) };
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = common.seed {
        cfg.seed = Some(seed);
    }
    if let Some(opt) = &common.option {
        cfg.recovery_option = OptionSel::parse(opt).ok_or_else(|| bad(format!("bad --option '{opt}'")))?;
    }
    cfg.validate()?;
    Ok(Some(cfg))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| bad(e.to_string()))
}

/// Imaginary part must be constant for the two-spectra mode; returns it.
fn constant_imaginary_part(q: &PotentialSpec<f64>) -> Result<f64, CliError> {
    let im0 = q.eval(0.0).im;
    let l = q.length();
    let tol = 1e-12 * im0.abs().max(1.0);
    for k in 0..=256 {
        let x = l * k as f64 / 256.0;
        if (q.eval(x).im - im0).abs() > tol {
            return Err(bad("two_spectra mode needs a real potential plus a constant imaginary shift"));
        }
    }
    Ok(im0)
}

pub fn generate(common: &Common) -> Result<(), CliError> {
    let cfg = load_config(common)?.ok_or_else(|| bad("generate needs --config"))?;
    let q = cfg.potential()?;
    let tol = cfg.tolerance();
    let out = &common.out;
    ensure_dir(out)?;
    let mut files = vec![SAMPLES_FILE.to_string(), MANIFEST_FILE.to_string()];
    let mut notes = Vec::new();
    if cfg.potential == "example3" {
        notes.push("Gamma(x + pi) evaluated by a Lanczos approximation (g = 7, 9 terms), relative accuracy better than 1e-12".into());
    }

    let samples: Vec<SpectralSample<f64>> = match cfg.data_mode {
        DataMode::ProblemA => {
            let (a, b) = cfg.coefficient_exprs()?;
            let rhos = cfg.rhos()?;
            rhos.par_iter()
                .map(|&rho| {
                    let (ak, bk) = (a.eval(rho), b.eval(rho));
                    let ell = integrate_solution(&q, rho, ak, bk, &[], &tol)
                        .map_err(|e| oracle_err(format!("rho = {rho}"), e))?
                        .value_at_l;
                    SpectralSample::new(rho, ak, bk, ell).map_err(|e| bad(format!("rho = {rho}: {e}")))
                })
                .collect::<Result<_, _>>()?
        }
        DataMode::Weyl => {
            let rhos = cfg.rhos()?;
            let weyl: Vec<WeylSample<f64>> = rhos
                .par_iter()
                .map(|&rho| {
                    let m = weyl_function(&q, rho, &tol).map_err(|e| oracle_err(format!("rho = {rho}"), e))?;
                    Ok(WeylSample { rho, m })
                })
                .collect::<Result<_, CliError>>()?;
            let path = out.join("weyl.csv");
            write_pairs(&path, &["rho", "M"], weyl.iter().map(|w| vec![w.rho, w.m]))?;
            files.push("weyl.csv".into());
            from_weyl(&weyl).map_err(|e| bad(e.to_string()))?
        }
        DataMode::Scattering => {
            let rhos = cfg.rhos()?;
            let sc: Vec<ScatteringSample<f64>> = rhos
                .par_iter()
                .map(|&rho| {
                    let (r, t) =
                        scattering_coefficients(&q, rho, &tol).map_err(|e| oracle_err(format!("rho = {rho}"), e))?;
                    Ok(ScatteringSample { rho, r, t })
                })
                .collect::<Result<_, CliError>>()?;
            let path = out.join("scattering.csv");
            write_pairs(&path, &["rho", "R", "T"], sc.iter().map(|s| vec![s.rho, s.r, s.t]))?;
            files.push("scattering.csv".into());
            from_scattering(&sc, q.length()).map_err(|e| bad(e.to_string()))?
        }
        DataMode::TwoSpectra => {
            let im = constant_imaginary_part(&q)?;
            let shift = C::new(0.0, im);
            // shifted() subtracts, leaving the real part
            let real = q.shifted(shift);
            let find = |b| {
                find_real_eigenvalues(&real, b, cfg.eigen_count, &tol)
                    .map_err(|e| oracle_err("eigenvalue search".into(), e))
            };
            let nd = find(LeftBoundary::Robin(cfg.robin_h))?;
            let dd = find(LeftBoundary::Dirichlet)?;
            let data = TwoSpectraData {
                mu: shift_spectrum(&nd, shift),
                nu: shift_spectrum(&dd, shift),
                h1: BoundaryForm::Robin(C::new(cfg.robin_h, 0.0)),
                h2: BoundaryForm::Dirichlet,
            };
            write_text(&out.join("spectra.json"), &data.to_json().map_err(|e| bad(e.to_string()))?)?;
            files.push("spectra.json".into());
            notes.push(format!(
                "{} eigenvalues from each spectrum, shifted by {}i",
                cfg.eigen_count, im
            ));
            from_two_spectra(&data, data.variant()).map_err(|e| bad(e.to_string()))?
        }
    };

    let path = out.join(SAMPLES_FILE);
    write_samples_csv(&path, &samples).map_err(|e| io_err(&path, e))?;
    let manifest = Manifest {
        tool: "nsbf".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        potential: cfg.potential.clone(),
        length: q.length(),
        data_mode: cfg.data_mode,
        samples: samples.len(),
        seed: cfg.seed,
        ode_tolerance: Tolerance { rtol: tol.rtol, atol: tol.atol },
        files,
        notes,
        config: cfg,
    };
    write_text(&out.join(MANIFEST_FILE), &to_json(&manifest)?)?;
    println!("[generate] {} samples of {} written to {}", samples.len(), manifest.potential, out.display());
    Ok(())
}

fn write_pairs(path: &Path, names: &[&str], rows: impl Iterator<Item = Vec<C>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let header: Vec<String> = names.iter().flat_map(|n| [format!("re_{n}"), format!("im_{n}")]).collect();
    w.write_record(&header).map_err(|e| io_err(path, e))?;
    for row in rows {
        let rec: Vec<String> = row.iter().flat_map(|z| [format!("{:.17e}", z.re), format!("{:.17e}", z.im)]).collect();
        w.write_record(&rec).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Samples path plus the manifest next to it, if there is one.
fn locate_dataset(data: &Path) -> Result<(PathBuf, Option<Manifest>), CliError> {
    let (samples, dir) = if data.is_dir() {
        (data.join(SAMPLES_FILE), data.to_path_buf())
    } else {
        (data.to_path_buf(), data.parent().map(Path::to_path_buf).unwrap_or_default())
    };
    if !samples.is_file() {
        return Err(bad(format!("no dataset at {}", samples.display())));
    }
    let mpath = dir.join(MANIFEST_FILE);
    let manifest = if mpath.is_file() {
        let text = fs::read_to_string(&mpath).map_err(|e| io_err(&mpath, e))?;
        Some(serde_json::from_str(&text).map_err(|e| io_err(&mpath, e))?)
    } else {
        None
    };
    Ok((samples, manifest))
}

fn result_name(opt: RecoveryOption) -> String {
    format!("result_{}.csv", opt.label())
}

pub fn invert(common: &Common, data: Option<&Path>) -> Result<(), CliError> {
    let data = data.unwrap_or(&common.out);
    let (samples_path, manifest) = locate_dataset(data)?;
    let cfg = match (load_config(common)?, &manifest) {
        (Some(c), _) => c,
        (None, Some(m)) => {
            let mut c = m.config.clone();
            if let Some(opt) = &common.option {
                c.recovery_option = OptionSel::parse(opt).ok_or_else(|| bad(format!("bad --option '{opt}'")))?;
            }
            c
        }
        (None, None) => return Err(bad("invert needs --config or a manifest next to the dataset")),
    };
    let length = match (&manifest, cfg.length) {
        (Some(m), _) => m.length,
        (None, Some(l)) => l,
        (None, None) => cfg.potential()?.length(),
    };
    let samples: Vec<SpectralSample<f64>> =
        read_samples_csv(&samples_path).map_err(|e| io_err(&samples_path, e))?;
    info!("{} samples, L = {length}", samples.len());

    let out = &common.out;
    ensure_dir(out)?;
    let icfg = cfg.inverse_config();
    let rec = reconstruct(&samples, length, &icfg).map_err(solver_err)?;
    write_text(&out.join("endpoint.json"), &rec.endpoint.to_json().map_err(|e| bad(e.to_string()))?)?;

    let d = &rec.diagnostics;
    println!(
        "[invert] K = {}, N1 = {}, N = {}, omega(L) = {:.12e}, q(0) = {:.6e}, q(L) = {:.6e}",
        d.samples, d.n_first, d.n_main, rec.step1.omega_l, rec.step1.q0, rec.step1.q_l
    );
    for opt in cfg.recovery_option.options() {
        let result = rec.recover(opt).map_err(solver_err)?;
        let csv = out.join(result_name(opt));
        result.write_csv(&csv).map_err(|e| io_err(&csv, e))?;
        let diag = out.join(format!("diagnostics_{}.json", opt.label()));
        result.write_diagnostics(&diag).map_err(|e| io_err(&diag, e))?;
        if cfg.plot {
            let table = ResultTable { x: result.x_grid.clone(), q: result.q_hat.clone(), omega: result.omega_hat.clone() };
            let exact = cfg.potential().ok().filter(|q| (q.length() - length).abs() < 1e-12);
            write_plot(out, opt, &table, exact.as_ref())?;
        }
        println!("[invert] {} written to {}", opt.label(), csv.display());
    }

    for w in &d.warnings {
        eprintln!("warning: {w}");
    }
    // The first-system right-hand side nearly cancels for weak potentials,
    // so its residual is measured against the size of the free solution.
    let scale = samples
        .iter()
        .map(|s| (s.a.norm() + s.b.norm() / s.rho.norm()).powi(2))
        .sum::<f64>()
        .sqrt();
    let first = d.first_step.residual_norm / scale;
    let worst = d.max_relative_residual.max(first);
    if !(worst <= cfg.residual_threshold) {
        return Err(CliError::Degraded(format!(
            "relative residual {worst:.3e} exceeds residual_threshold {:.3e}",
            cfg.residual_threshold
        )));
    }
    Ok(())
}

struct ResultTable {
    x: Vec<f64>,
    q: Vec<C>,
    omega: Vec<C>,
}

fn read_result(path: &Path) -> Result<ResultTable, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let headers = rdr.headers().map_err(|e| io_err(path, e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("{}: missing column '{name}'", path.display())))
    };
    let idx = [col("x")?, col("re_q")?, col("im_q")?, col("re_omega")?, col("im_omega")?];
    let mut t = ResultTable { x: Vec::new(), q: Vec::new(), omega: Vec::new() };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let v: Vec<f64> = idx
            .iter()
            .map(|&i| rec.get(i).unwrap_or("").trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| io_err(path, e))?;
        t.x.push(v[0]);
        t.q.push(C::new(v[1], v[2]));
        t.omega.push(C::new(v[3], v[4]));
    }
    if t.x.len() < 2 {
        return Err(bad(format!("{}: too few rows", path.display())));
    }
    Ok(t)
}

/// Results present in `dir`, restricted to `--option` when given.
fn available_results(dir: &Path, option: Option<&str>) -> Result<Vec<(RecoveryOption, PathBuf)>, CliError> {
    let wanted = match option {
        Some(s) => OptionSel::parse(s).ok_or_else(|| bad(format!("bad --option '{s}'")))?,
        None => OptionSel::Both,
    };
    let found: Vec<_> = wanted
        .options()
        .into_iter()
        .map(|o| (o, dir.join(result_name(o))))
        .filter(|(_, p)| p.is_file())
        .collect();
    if found.is_empty() {
        return Err(bad(format!("no result_option*.csv in {}", dir.display())));
    }
    Ok(found)
}

#[derive(Serialize)]
struct Comparison {
    option: String,
    max_abs_error: f64,
    q0_error: f64,
    ql_error: f64,
    omega_l_error: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    reference: String,
    results: Vec<Comparison>,
}

pub fn verify(common: &Common, data: Option<&Path>, reference: Option<&Path>) -> Result<(), CliError> {
    let dir = data.unwrap_or(&common.out);
    let results = available_results(dir, common.option.as_deref())?;
    let mut report = VerifyReport { reference: String::new(), results: Vec::new() };

    if let Some(rpath) = reference {
        report.reference = rpath.display().to_string();
        let r = read_result(rpath)?;
        for (opt, path) in &results {
            let t = read_result(path)?;
            let scale = t.x.last().copied().unwrap_or(1.0).abs().max(1.0);
            if t.x.len() != r.x.len() || t.x.iter().zip(&r.x).any(|(a, b)| (a - b).abs() > 1e-12 * scale) {
                return Err(bad(format!("{}: x grid does not match the reference", path.display())));
            }
            let n = t.x.len() - 1;
            report.results.push(Comparison {
                option: opt.label().into(),
                max_abs_error: t.q.iter().zip(&r.q).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max),
                q0_error: (t.q[0] - r.q[0]).norm(),
                ql_error: (t.q[n] - r.q[n]).norm(),
                omega_l_error: (t.omega[n] - r.omega[n]).norm(),
            });
        }
    } else {
        let cfg = load_config(common)?.ok_or_else(|| bad("verify needs --config or --reference"))?;
        let q = cfg.potential()?;
        report.reference = cfg.potential.clone();
        let l = q.length();
        let omega_l = omega(&q, l);
        for (opt, path) in &results {
            let t = read_result(path)?;
            let n = t.x.len() - 1;
            if (t.x[n] - l).abs() > 1e-9 * l.max(1.0) {
                return Err(bad(format!("{}: grid ends at {} but the potential lives on [0, {l}]", path.display(), t.x[n])));
            }
            let exact: Vec<C> = t.x.iter().map(|&x| q.eval(x)).collect();
            if exact.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) || !omega_l.norm().is_finite() {
                return Err(CliError::Oracle(format!("reference potential '{}' is not finite on the grid", cfg.potential)));
            }
            report.results.push(Comparison {
                option: opt.label().into(),
                max_abs_error: t.q.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max),
                q0_error: (t.q[0] - exact[0]).norm(),
                ql_error: (t.q[n] - exact[n]).norm(),
                omega_l_error: (t.omega[n] - omega_l).norm(),
            });
        }
    }

    println!("{:<10}{:>14}{:>14}{:>14}{:>14}", "option", "max|dq|", "|dq(0)|", "|dq(L)|", "|domega(L)|");
    for c in &report.results {
        println!(
            "{:<10}{:>14.3e}{:>14.3e}{:>14.3e}{:>14.3e}",
            c.option, c.max_abs_error, c.q0_error, c.ql_error, c.omega_l_error
        );
    }
    let out = &common.out;
    ensure_dir(out)?;
    write_text(&out.join("verify.json"), &to_json(&report)?)
}

fn write_plot(dir: &Path, opt: RecoveryOption, t: &ResultTable, exact: Option<&PotentialSpec<f64>>) -> Result<(), CliError> {
    let part = |f: fn(C) -> f64, color, label, values: &[C]| Series {
        label,
        color,
        dashed: false,
        points: t.x.iter().zip(values).map(|(&x, &z)| (x, f(z))).collect(),
    };
    let mut re = vec![part(|z| z.re, "#1f77b4", "reconstructed", &t.q)];
    let mut im = vec![part(|z| z.im, "#1f77b4", "reconstructed", &t.q)];
    if let Some(q) = exact {
        // finer sampling so kinks in the exact potential show
        let l = q.length();
        let fine: Vec<(f64, C)> = (0..=400).map(|k| l * k as f64 / 400.0).map(|x| (x, q.eval(x))).collect();
        let dashed = |f: fn(C) -> f64| Series {
            label: "exact",
            color: "#d62728",
            dashed: true,
            points: fine.iter().map(|&(x, z)| (x, f(z))).collect(),
        };
        re.push(dashed(|z| z.re));
        im.push(dashed(|z| z.im));
    }
    let path = dir.join(format!("q_{}.svg", opt.label()));
    write_text(&path, &two_panel("q(x)", &re, &im))
}

pub fn plot(common: &Common, data: Option<&Path>) -> Result<(), CliError> {
    let dir = data.unwrap_or(&common.out);
    let results = available_results(dir, common.option.as_deref())?;
    let exact = match load_config(common)? {
        Some(cfg) => Some(cfg.potential()?),
        None => None,
    };
    ensure_dir(&common.out)?;
    for (opt, path) in results {
        let t = read_result(&path)?;
        write_plot(&common.out, opt, &t, exact.as_ref())?;
        println!("[plot] q_{}.svg written to {}", opt.label(), common.out.display());
    }
    Ok(())
}

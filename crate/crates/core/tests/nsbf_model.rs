use nsbf_core::forward_oracle::{generate_problem_data, phi_s_at_l, terminal_solution, OdeTolerance, PotentialSpec};
use nsbf_core::inverse_engine::solve_first_system;
use nsbf_core::nsbf_model::{eval_phi_n, eval_s_n, eval_t_n, EndpointCoefficients};
use nsbf_core::numeric_kernel::LstsqOptions;
use num_complex::Complex64 as C;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn span(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

/// Exact leading coefficients of `q = k` at `x`: `(omega, q-, q+)`.
fn constant_leading(k: C, x: f64) -> (C, C, C) {
    let w = k * x / 2.0;
    (w, -w * w / 2.0, k / 2.0 - w * w / 2.0)
}

fn weight(rho: C, x: f64) -> f64 {
    if rho.im.abs() < 1e-14 {
        (2.0 * x).sqrt()
    } else {
        ((2.0 * rho.im * x).sinh() / rho.im).sqrt()
    }
}

// With only the leading coefficients, phi_N and S_N for a constant potential
// must obey the remainder estimates |rho|^2 and |rho|^3 respectively.
#[test]
fn constant_potential_leading_terms_obey_remainder_shape() {
    let k = c(3.0, -1.5);
    let x = 0.8;
    let (w, qm, qp) = constant_leading(k, x);
    for im in [0.0, 0.5] {
        let scaled = |lo: f64, hi: f64| {
            span(lo, hi, 200).fold((0.0f64, 0.0f64), |(ep, es), r| {
                let rho = c(r, im);
                let kk = (rho * rho - k).sqrt();
                let phi = (kk * x).cos();
                let s = (kk * x).sin() / kk;
                let wt = weight(rho, x);
                let dphi = (eval_phi_n(x, rho, w, qm, &[]).unwrap() - phi).norm() * rho.norm().powi(2) / wt;
                let ds = (eval_s_n(x, rho, w, qp, &[]).unwrap() - s).norm() * rho.norm().powi(3) / wt;
                (ep.max(dphi), es.max(ds))
            })
        };
        let (p_lo, s_lo) = scaled(20.0, 100.0);
        let (p_hi, s_hi) = scaled(200.0, 1000.0);
        assert!(p_hi <= p_lo, "phi: {p_hi:e} > {p_lo:e}");
        assert!(s_hi <= s_lo, "S: {s_hi:e} > {s_lo:e}");
        assert!(p_lo.is_finite() && s_lo.is_finite());
    }
}

#[test]
fn terminal_series_mirrors_forward_solution() {
    let k = c(2.0, 1.0);
    let l = 1.5;
    let q = PotentialSpec::constant(l, k).unwrap();
    let tol = OdeTolerance::default();
    let xs = [0.3, 0.75, 1.2];
    for r in [40.0, 150.0, 600.0] {
        let rho = c(r, 0.0);
        let trace = terminal_solution(&q, rho, &xs, &tol).unwrap();
        for &(x, t, _) in &trace {
            let (wl, _, ql) = constant_leading(k, l - x);
            let approx = eval_t_n(x, l, rho, wl, ql, &[]).unwrap();
            let kk = (rho * rho - k).sqrt();
            let exact = -(kk * (l - x)).sin() / kk;
            assert!((t - exact).norm() < 1e-11, "forward T off at x={x} rho={r}: {:e}", (t - exact).norm());
            let scaled = (approx - exact).norm() * r.powi(3) / weight(rho, l - x);
            assert!(scaled < 5.0, "rho={r} x={x} scaled remainder {scaled:e}");
        }
    }
}

#[test]
fn t_series_vanishes_at_right_end() {
    let th = [c(0.3, 0.1), c(-0.2, 0.0)];
    let v = eval_t_n(2.0, 2.0, c(7.0, 0.3), c(1.0, 0.5), c(-0.4, 0.2), &th).unwrap();
    assert!(v.norm() < 1e-15);
    assert!(eval_t_n(2.1, 2.0, c(7.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), &th).is_err());
}

// Endpoint coefficients fitted from low-frequency data must reproduce the
// characteristic functions at much larger rho at least as well as at small rho.
#[test]
fn fitted_coefficients_do_not_deteriorate_at_large_rho() {
    let q = PotentialSpec::new(1.0, |x: f64| c(x.exp(), 1.0)).unwrap();
    let tol = OdeTolerance::uniform(1e-13);
    let rhos: Vec<C> = span(0.1, 60.0, 121).map(|r| c(r, 0.0)).collect();
    let data = generate_problem_data(&q, &rhos, |r| r.sin(), |r| r.cos(), &tol).unwrap();
    let (coef, _) = solve_first_system(&data, 1.0, 12, LstsqOptions::pivoted(1e-12)).unwrap();
    let worst = |lo: f64, hi: f64| {
        span(lo, hi, 40).fold(0.0f64, |m, r| {
            let rho = c(r, 0.0);
            let e = phi_s_at_l(&q, rho, &tol).unwrap();
            let dp = (coef.phi_at_l(rho).unwrap() - e.phi).norm();
            let ds = (coef.s_at_l(rho).unwrap() - e.s).norm();
            m.max(dp).max(ds)
        })
    };
    let small = worst(1.0, 10.0);
    let large = worst(100.0, 1000.0);
    assert!(small < 1e-6, "small-rho error {small:e}");
    assert!(large <= small.max(1e-10), "large {large:e} vs small {small:e}");
}

#[test]
fn endpoint_json_round_trip() {
    let coef = EndpointCoefficients {
        length: 2.5,
        omega_l: c(0.1, -0.2),
        q_minus_l: c(1.0, 0.0),
        q_plus_l: c(-3.0, 0.25),
        phi_n: vec![c(1e-3, 2e-3), c(-4e-4, 0.0)],
        sigma_n: vec![c(5e-5, -1e-5), c(0.0, 7e-6)],
    };
    let text = coef.to_json().unwrap();
    assert!(text.contains("omega_L") && text.contains("sigma_n"));
    let back = EndpointCoefficients::<f64>::from_json(&text).unwrap();
    assert_eq!(back, coef);
    let broken = text.replace("\"N\": 2", "\"N\": 3");
    assert!(EndpointCoefficients::<f64>::from_json(&broken).is_err());
}

#[test]
fn endpoint_values_from_leading_coefficients() {
    // q = k constant on [0, L]: q(0) = q(L) = k
    let k = c(1.7, -0.6);
    let l = 2.0;
    let (w, qm, qp) = constant_leading(k, l);
    let coef = EndpointCoefficients {
        length: l,
        omega_l: w,
        q_minus_l: qm,
        q_plus_l: qp,
        phi_n: vec![c(0.0, 0.0)],
        sigma_n: vec![c(0.0, 0.0)],
    };
    assert!((coef.q_at_zero() - k).norm() < 1e-15);
    assert!((coef.q_at_l() - k).norm() < 1e-14);
}

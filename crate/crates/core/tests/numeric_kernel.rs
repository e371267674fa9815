mod common;

use common::dd::{c1_maclaurin, c2_maclaurin, sph_jn_series, sph_jn_upward};
use nsbf_core::numeric_kernel::{
    combo_c1, combo_c2, lstsq_solve, spherical_bessel_j, spherical_bessel_sequence, DenseSystem,
    LstsqMethod, LstsqOptions,
};
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn rel_err(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

// (n, re z, im z, re j_n, im j_n), 40-digit reference values.
const J_REFERENCE: &[(usize, f64, f64, f64, f64)] = &[
    (4, 2.0, 1.0, -0.0022638833744548776, 0.023000864605461345),
    (0, 2.0, 1.0, 0.4634364484405575, -0.47624635374092559),
    (7, 0.7, -0.3, -6.8777170133688085e-8, -2.2770533701439325e-8),
    (37, 5.0, 0.5, -4.9449088963208864e-30, -2.7890499493442589e-30),
    (37, 40.0, 2.0, 0.049316841319902552, 0.0035716932133241549),
    (10, 1500.0, 0.0, 0.00066485889378581965, 0.0),
    (25, 4712.0, 3.0, -0.002028483171298684, -0.00066747822241063584),
    (2, 0.001, 0.0, 6.666666190476204e-8, 0.0),
    (64, 30.0, -5.0, -1.2707618254276683e-16, -8.1400206972753321e-18),
    (3, 10.0, 50.0, 1.7677708250387697e+19, 4.1656799257193088e+19),
    (12, 0.2, 45.0, 66634808973419287.0, -13735251625637964.0),
    (5, 3.1, 0.0, 0.018847707535421111, 0.0),
];

#[test]
fn bessel_matches_reference_values() {
    for &(n, zr, zi, vr, vi) in J_REFERENCE {
        let got = spherical_bessel_j(n, C::new(zr, zi)).unwrap();
        let err = rel_err(got, C::new(vr, vi));
        assert!(err < 1e-12, "n={n} z=({zr},{zi}) rel err {err:e}");
    }
}

#[test]
fn bessel_low_orders_closed_forms() {
    let pi = std::f64::consts::PI;
    let j1 = spherical_bessel_j(1, C::new(pi, 0.0)).unwrap();
    assert!((j1.re - 1.0 / pi).abs() < 1e-15 && j1.im == 0.0);
    assert!((1.0 / pi - 0.318310).abs() < 1e-6);
    let j0 = spherical_bessel_j(0, C::new(0.0, 2.0)).unwrap();
    assert!((j0.re - 2.0_f64.sinh() / 2.0).abs() < 1e-15);
    assert!((j0.re - 1.813430).abs() < 1e-6);
    assert_eq!(spherical_bessel_j(0, C::new(0.0, 0.0)).unwrap(), C::new(1.0, 0.0));
    assert_eq!(spherical_bessel_j(3, C::new(0.0, 0.0)).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn bessel_order_four_against_thirty_term_series() {
    // Plain 30-term Maclaurin sum in f64: z^n/(2n+1)!! sum (-z^2/2)^k/(k!(2n+3)..(2n+2k+1)).
    let z = C::new(2.0, 1.0);
    let n = 4usize;
    let mut pre = C::new(1.0, 0.0);
    for k in 1..=n {
        pre *= z / (2 * k + 1) as f64;
    }
    let w = -z * z / 2.0;
    let (mut term, mut sum) = (C::new(1.0, 0.0), C::new(1.0, 0.0));
    for k in 1..30usize {
        term *= w / ((k * (2 * n + 2 * k + 1)) as f64);
        sum += term;
    }
    let oracle = pre * sum;
    let got = spherical_bessel_j(n, z).unwrap();
    assert!(rel_err(got, oracle) < 1e-13);
}

/// Sweeps |z| over [1e-6, 5000] with |Im z| <= 50 and orders up to 64 and
/// compares against the double-double series where its cancellation is
/// harmless, or the double-double upward recurrence (orders below |z|).
#[test]
fn bessel_agrees_with_extended_precision_oracles() {
    let radii = [
        1e-6, 1e-3, 0.1, 0.49, 0.51, 1.0, 2.5, 5.0, 9.7, 16.0, 25.0, 30.0, 45.0, 80.0, 150.0,
        400.0, 1000.0, 2500.0, 5000.0,
    ];
    let phases = [0.0, 0.1, 0.5, 1.2, 1.5707963267948966, 2.3, 3.0, -0.4, -1.3];
    let orders = [0usize, 1, 2, 3, 5, 8, 13, 20, 24, 31, 36, 37, 45, 64];
    let mut checked = 0;
    let mut worst = 0.0f64;
    for &r in &radii {
        for &ph in &phases {
            let z = C::from_polar(r, ph);
            if z.im.abs() > 50.0 {
                continue;
            }
            let mut seq = vec![C::new(0.0, 0.0); 65];
            spherical_bessel_sequence(z, &mut seq).unwrap();
            for &n in &orders {
                // Series cancellation costs about exp(|z| - |Im z|); the
                // upward check amplifies the f64 seeds by exp(n^2 |Im z| / |z|^2).
                let series_loss = r - z.im.abs() + (r + 1.0).ln();
                let upward_growth = (n * n) as f64 * z.im.abs() / (r * r);
                let oracle = if series_loss <= 40.0 {
                    sph_jn_series(n, z)
                } else if (n as f64) < r && upward_growth <= 8.0 {
                    sph_jn_upward(n, z)
                } else {
                    continue;
                };
                if oracle.norm() < 1e-280 {
                    continue;
                }
                let single = spherical_bessel_j(n, z).unwrap();
                for got in [single, seq[n]] {
                    let err = rel_err(got, oracle);
                    worst = worst.max(err);
                    assert!(err < 1e-10, "n={n} z={z} rel err {err:e}");
                }
                checked += 1;
            }
        }
    }
    eprintln!("checked {checked} points, worst relative error {worst:e}");
    assert!(checked > 900, "only {checked} points checked");
}

// (re z, im z, re c1, im c1, re c2, im c2), 40-digit reference values.
const COMBO_REFERENCE: &[(f64, f64, f64, f64, f64, f64)] = &[
    (10.0, 0.0, 0.86261161161607792, 0.0, -0.77942193628562445, 0.0),
    (2.0, 1.0, 1.3244918835197972, 0.75117681061892815, -0.27899887775036402, -0.5365387963178705),
    (0.49, 0.05, 0.092996268940005261, 0.018723721152962147, -0.0074783898331451282, -0.002326070706139298),
    (0.51, 0.0, 0.10148594633290741, 0.0, -0.0086802846462084265, 0.0),
    (-3.0, 20.0, 238617813.62013812, -33525202.52460022, -24683559.509993659, -207288026.40654615),
    (0.001, 0.0, 3.9999996190476324e-7, 0.0, -6.6666661904762041e-11, 0.0),
    (300.0, 1.0, 0.034097569312892528, -1.1749534276553018, -1.5429542500670692, -0.014217302027996067),
];

#[test]
fn combos_match_reference_values() {
    for &(zr, zi, r1, i1, r2, i2) in COMBO_REFERENCE {
        let z = C::new(zr, zi);
        assert!(rel_err(combo_c1(z), C::new(r1, i1)) < 1e-12, "c1 at {z}");
        assert!(rel_err(combo_c2(z), C::new(r2, i2)) < 1e-12, "c2 at {z}");
    }
    let pi = std::f64::consts::PI;
    assert!((combo_c2(C::new(pi, 0.0)).re + 0.954930).abs() < 1e-6);
}

#[test]
fn combos_agree_with_maclaurin_and_direct_forms() {
    for i in 0..400 {
        let r = 0.005 + 1.495 * (i as f64) / 399.0;
        for &ph in &[0.0, 0.7, 1.5707963267948966, 2.5, -1.0] {
            let z = C::from_polar(r, ph);
            let (c1, c2) = (combo_c1(z), combo_c2(z));
            if r <= 0.5 || r <= 1.5 {
                // Maclaurin oracle on the small disc and through the overlap.
                assert!(rel_err(c1, c1_maclaurin(z)) < 1e-11, "c1 series z={z}");
                assert!(rel_err(c2, c2_maclaurin(z)) < 1e-11, "c2 series z={z}");
            }
            if r >= 1.0 {
                let j1 = z.sin() / (z * z) - z.cos() / z;
                let d1 = 3.0 * j1 / z - z.cos();
                let d2 = z.sin() - 3.0 * j1;
                assert!(rel_err(c1, d1) < 1e-11, "c1 direct z={z}");
                assert!(rel_err(c2, d2) < 1e-11, "c2 direct z={z}");
            }
        }
    }
}

proptest! {
    #[test]
    fn bessel_conjugation_symmetry(n in 0usize..=40, re in -200.0f64..200.0, im in -50.0f64..50.0) {
        let z = C::new(re, im);
        let a = spherical_bessel_j(n, z.conj()).unwrap();
        let b = spherical_bessel_j(n, z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-14 * b.norm());
        let real_arg = spherical_bessel_j(n, C::new(re, 0.0)).unwrap();
        prop_assert_eq!(real_arg.im, 0.0);
    }

    #[test]
    fn lstsq_is_locally_optimal(
        entries in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 6 * 3),
        rhs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 6),
        perturb in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 100 * 3),
    ) {
        let m: Vec<C> = entries.iter().map(|&(a, b)| C::new(a, b)).collect();
        let b: Vec<C> = rhs.iter().map(|&(a, b)| C::new(a, b)).collect();
        let sys = DenseSystem::from_parts(6, 3, m, b).unwrap();
        let sol = lstsq_solve(&sys, LstsqOptions::default()).unwrap();
        for chunk in perturb.chunks(3) {
            let trial: Vec<C> = sol.x.iter().zip(chunk)
                .map(|(x, &(a, b))| x + C::new(a, b) * 1e-3)
                .collect();
            prop_assert!(sol.residual_norm <= sys.residual_norm(&trial) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn lstsq_recovers_consistent_solution() {
    let a = [
        [C::new(1.0, 0.0), C::new(2.0, 1.0)],
        [C::new(0.5, -1.0), C::new(-1.0, 0.0)],
        [C::new(3.0, 0.0), C::new(0.0, 2.0)],
        [C::new(-2.0, 0.5), C::new(1.0, -1.0)],
    ];
    let x = [C::new(1.0, 0.0), C::new(0.0, -2.0)];
    let mut sys = DenseSystem::zeros(4, 2);
    for (i, row) in a.iter().enumerate() {
        sys.set(i, 0, row[0]);
        sys.set(i, 1, row[1]);
        sys.rhs_mut()[i] = row[0] * x[0] + row[1] * x[1];
    }
    let sol = lstsq_solve(&sys, LstsqOptions::default()).unwrap();
    for k in 0..2 {
        assert!((sol.x[k] - x[k]).norm() < 1e-12);
    }
    assert_eq!(sol.effective_rank, 2);
    assert!(sol.residual_norm < 1e-13);
}

#[test]
fn lstsq_rank_one_matches_pseudo_inverse() {
    // A = u v^H with u = (1, 2i, -1), v = (1, 3); pinv(A) = v u^H / (|u|^2 |v|^2).
    let u = [C::new(1.0, 0.0), C::new(0.0, 2.0), C::new(-1.0, 0.0)];
    let v = [C::new(1.0, 0.0), C::new(3.0, 0.0)];
    let b = [C::new(1.0, 1.0), C::new(0.0, -1.0), C::new(2.0, 0.5)];
    let mut sys = DenseSystem::zeros(3, 2);
    for i in 0..3 {
        for j in 0..2 {
            sys.set(i, j, u[i] * v[j].conj());
        }
        sys.rhs_mut()[i] = b[i];
    }
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let uhb: C = u.iter().zip(&b).map(|(ui, bi)| ui.conj() * bi).sum();
    let oracle: Vec<C> = v.iter().map(|vj| vj * uhb / (uu * vv)).collect();

    let opts = LstsqOptions { cutoff: 1e-12, equilibrate: false, method: LstsqMethod::Svd };
    let sol = lstsq_solve(&sys, opts).unwrap();
    assert_eq!(sol.effective_rank, 1);
    for j in 0..2 {
        assert!((sol.x[j] - oracle[j]).norm() < 1e-13, "{:?} vs {:?}", sol.x, oracle);
    }
    // With equilibration the residual is still minimal.
    let eq = lstsq_solve(&sys, LstsqOptions::default()).unwrap();
    assert!((eq.residual_norm - sol.residual_norm).abs() < 1e-12);
}

#[test]
fn lstsq_handles_wildly_scaled_columns() {
    // Columns spanning 1e-12 .. 1: equilibration keeps the tiny column.
    let m = 8;
    let mut sys = DenseSystem::zeros(m, 3);
    let x = [C::new(1.0, 2.0), C::new(-3.0, 0.5), C::new(1e9, -2e9)];
    for i in 0..m {
        let t = i as f64 / 7.0;
        let row = [C::new(1.0, 0.0), C::new(t, t * t), C::new(1e-12 * t.powi(3), 0.0)];
        for j in 0..3 {
            sys.set(i, j, row[j]);
        }
        sys.rhs_mut()[i] = row.iter().zip(&x).map(|(a, b)| a * b).sum();
    }
    let sol = lstsq_solve(&sys, LstsqOptions::default()).unwrap();
    for j in 0..3 {
        assert!(rel_err(sol.x[j], x[j]) < 1e-8, "{j}: {:?}", sol.x[j]);
    }
}

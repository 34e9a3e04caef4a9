use num_complex::Complex64;
use sg_nft::expansion::{build_expansion, default_grid, evaluate_series_terms, Limit, Series};
use sg_nft::fit::{geometric_samples, loglog_slope};
use sg_nft::potential::gauge;
use sg_nft::spectral::{asymptotic_scalars, spectral_ab, spectral_cd, Payload, SpectralOptions};
use sg_nft::{profiles, BoundaryData, InitialData, Side, SpectralPoint};

fn ab(init: &InitialData, k: f64, opts: &SpectralOptions) -> (Complex64, Complex64) {
    match spectral_ab(init, SpectralPoint::real(k).unwrap(), opts).unwrap().payload {
        Payload::Ab { a, b } => (a, b),
        _ => unreachable!(),
    }
}

fn c_at(init: &InitialData, bdry: &BoundaryData, k: f64, opts: &SpectralOptions) -> Complex64 {
    match spectral_cd(init, bdry, SpectralPoint::real(k).unwrap(), opts).unwrap().payload {
        Payload::Cd { c: Some(c), .. } => c,
        _ => unreachable!(),
    }
}

#[test]
fn large_k_remainders_of_a_and_b() {
    let (init, _) = profiles::generate_kink_data(2.0, 0.5, 1).unwrap();
    let opts = SpectralOptions::with_tol(1e-11);
    for m in [1usize, 2] {
        let table = build_expansion(Side::X, Limit::Infinity, &init, m, &default_grid(&init)).unwrap();
        let (mut ra, mut rb) = (vec![], vec![]);
        for k in [10.0, 20.0, 40.0, 80.0] {
            let (a, b) = ab(&init, k, &opts);
            let s = evaluate_series_terms(&table, Series::Primary, 0.0, Complex64::new(k, 0.0), m).unwrap();
            ra.push((k, (a - s.e22).norm()));
            rb.push((k, (b - s.e12).norm()));
        }
        let target = -(m as f64 + 1.0) + 0.15;
        let (sa, sb) = (loglog_slope(&ra).unwrap(), loglog_slope(&rb).unwrap());
        assert!(sa <= target && sb <= target, "m = {m}: slopes {sa}, {sb}");
    }
}

#[test]
fn explicit_coefficients_agree_with_the_tables() {
    let (init, bdry) = profiles::generate_kink_data(2.0, 0.5, -1).unwrap();
    let sc = asymptotic_scalars(&init, &bdry, 2).unwrap();
    let x = build_expansion(Side::X, Limit::Infinity, &init, 2, &default_grid(&init)).unwrap();
    let xh = build_expansion(Side::X, Limit::Zero, &init, 2, &default_grid(&init)).unwrap();
    let t = build_expansion(Side::T, Limit::Infinity, &bdry, 2, &default_grid(&bdry)).unwrap();
    let th = build_expansion(Side::T, Limit::Zero, &bdry, 2, &default_grid(&bdry)).unwrap();
    for (table, s) in [(&x, sc.x_infinity), (&xh, sc.x_zero), (&t, sc.t_infinity), (&th, sc.t_zero)] {
        assert!((table.x[1][0].e22 - s.diag1).norm() < 1e-7, "{:?}", table.limit);
        assert!((table.x[1][0].e12 - s.off1).norm() < 1e-7, "{:?}", table.limit);
        assert!((table.x[2][0].e12 - s.off2).norm() < 1e-7, "{:?}", table.limit);
    }
}

#[test]
fn small_k_remainder_and_gauge_overlap() {
    let (init, bdry) = profiles::generate_kink_data(2.0, 0.5, 1).unwrap();
    let opts = SpectralOptions::with_tol(1e-11);
    let sc = asymptotic_scalars(&init, &bdry, 1).unwrap();
    let g = gauge(&init, 0.0).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let pts: Vec<(f64, f64)> = [0.005, 0.01, 0.02, 0.04]
        .into_iter()
        .map(|k| {
            let (a, b) = ab(&init, k, &opts);
            let v = g.mul_column(&[sc.x_zero.off1 * k, one + sc.x_zero.diag1 * k]);
            (k, ((b - v[0]).norm_sqr() + (a - v[1]).norm_sqr()).sqrt())
        })
        .collect();
    let slope = loglog_slope(&pts).unwrap();
    assert!(slope >= 1.85, "{slope}");

    let direct = SpectralOptions { switch_radius: 0.4, ..opts };
    let hatted = SpectralOptions { switch_radius: 2.0, ..opts };
    for k in [0.5, 0.75, 1.0, 1.25, 1.5, -0.6, -1.4] {
        let (a1, b1) = ab(&init, k, &direct);
        let (a2, b2) = ab(&init, k, &hatted);
        assert!((a1 - a2).norm() <= 1e-6 && (b1 - b2).norm() <= 1e-6, "k = {k}");
    }
}

#[test]
fn c_vanishing_orders_for_data_compatible_to_order_two() {
    let (init, bdry) = profiles::kink_perturbed(2.0, 0.5, 1, 1.0, 1.0, 2).unwrap();
    let opts = SpectralOptions::with_tol(1e-13);
    let far: Vec<(f64, f64)> = geometric_samples(100.0, 300.0, 4)
        .into_iter()
        .map(|k| (k, c_at(&init, &bdry, k, &opts).norm()))
        .collect();
    let near: Vec<(f64, f64)> = geometric_samples(0.02, 0.16, 4)
        .into_iter()
        .map(|k| (k, c_at(&init, &bdry, k, &opts).norm()))
        .collect();
    let (sf, sn) = (loglog_slope(&far).unwrap(), loglog_slope(&near).unwrap());
    assert!(sf <= -2.0 + 0.2, "slope at infinity {sf}");
    assert!(sn >= 2.0 - 0.2, "slope at zero {sn}");
}

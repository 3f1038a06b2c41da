use std::f64::consts::PI;

use proptest::prelude::*;
use varmax::kernels::{
    elliptic_kernel, elliptic_multiplier, heat_truncation, periodic_kernel, periodic_kernel_fourier, periodic_kernel_lattice,
    schoenberg_density, spherical_heat, spherical_poisson,
};
use varmax::EllipticParams;

fn params(a: f64, b: f64) -> EllipticParams<f64> {
    EllipticParams::new(a, b, 1).unwrap()
}

/// Composite Simpson on [lo, hi] with n (even) panels.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let inner: f64 = (1..n).map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h)).sum();
    (f(lo) + inner + f(hi)) * h / 3.0
}

#[test]
fn closed_form_values() {
    assert!((elliptic_kernel(&params(1.0, 0.0), 1.0, 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert!((elliptic_kernel(&params(0.0, 1.0), 1.0, 0.0).unwrap() - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
    // b = 0 reduces to the Poisson kernel at time t/√a
    let p = elliptic_kernel(&params(4.0, 0.0), 1.0, 0.3).unwrap();
    assert!((p - 0.5 / (PI * (0.25 + 0.09))).abs() < 1e-14);
    assert!(EllipticParams::new(0.0, 0.0, 1).is_err());
    assert!(elliptic_multiplier(&params(1.0, 1.0), 0.0, 1.0).is_err());
}

#[test]
fn density_matches_direct_substitution() {
    let want = (0.5 - 1.0 / (16.0 * PI) - PI).exp();
    assert!((schoenberg_density(&params(1.0, 1.0), 1.0, 1.0).unwrap() - want).abs() < 1e-14);
    assert!((want - 0.06985).abs() < 1e-5);
    assert!(schoenberg_density(&params(1.0, 1.0), 1.0, 1e4).unwrap() < 1e-80);
    assert!(schoenberg_density(&params(0.0, 1.0), 1.0, 1.0).is_err());
}

#[test]
fn general_kernel_matches_fourier_inversion() {
    let p = params(1.0, 1.0);
    for x in [0.0, 0.5, 1.3] {
        let m = |xi: f64| elliptic_multiplier(&p, 1.0, xi).unwrap();
        let want = simpson(|xi| 2.0 * m(xi) * (2.0 * PI * x * xi).cos(), 0.0, 12.0, 24_000);
        let got = elliptic_kernel(&p, 1.0, x).unwrap();
        assert!((got - want).abs() < 1e-6, "x={x}: {got} vs {want}");
    }
}

#[test]
fn poisson_multiplier_and_gauss_limit() {
    for xi in [0.0, 0.3, 2.0] {
        let m = elliptic_multiplier(&params(1.0, 0.0), 0.7, xi).unwrap();
        assert!((m - (-2.0 * PI * 0.7 * xi).exp()).abs() < 1e-15);
    }
    let m = elliptic_multiplier(&params(1e-6, 1.0), 1.0, 1.0).unwrap();
    assert!((m - (-4.0 * PI * PI).exp()).abs() < 1e-4);
}

#[test]
fn nearly_degenerate_parameters_approach_the_closed_forms() {
    for x in [0.0, 0.5, 2.0] {
        let poisson = elliptic_kernel(&params(1.0, 1e-12), 1.0, x).unwrap();
        assert!((poisson - 1.0 / (PI * (1.0 + x * x))).abs() < 1e-4, "x={x}");
        let heat = elliptic_kernel(&params(1e-12, 1.0), 1.0, x).unwrap();
        assert!((heat - (-x * x / 4.0).exp() / (4.0 * PI).sqrt()).abs() < 1e-4, "x={x}");
    }
}

#[test]
fn large_time_decay() {
    for (a, b) in [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (2.0, 0.5)] {
        let peaks: Vec<f64> = (0..6).map(|k| elliptic_kernel(&params(a, b), 10f64.powi(k), 0.0).unwrap()).collect();
        assert!(peaks.windows(2).all(|w| w[1] < w[0]), "({a},{b}): {peaks:?}");
        assert!(peaks[5] < 1e-2);
    }
}

#[test]
fn periodic_representations_agree_at_the_seam() {
    let p = params(1.0, 1.0);
    let (l, f) = (periodic_kernel_lattice(&p, 0.3, 0.25).unwrap(), periodic_kernel_fourier(&p, 0.3, 0.25).unwrap());
    assert!((l - f).abs() < 1e-8, "{l} vs {f}");
    let peak = periodic_kernel(&p, 0.3, 0.0).unwrap();
    for i in 0..50 {
        let v = periodic_kernel(&p, 0.3, i as f64 / 50.0).unwrap();
        assert!(v >= 0.0 && v <= peak);
    }
}

#[test]
fn sphere_kernels() {
    let sigma2 = 4.0 * PI;
    assert!((spherical_poisson(0.2, 0.0, 2).unwrap() - 1.0 / sigma2).abs() < 1e-15);
    assert!(spherical_poisson(0.2, 1.0, 2).is_err());
    for rho in [0.3, 0.9] {
        let mass = 2.0 * PI * simpson(|th: f64| spherical_poisson(th.cos(), rho, 2).unwrap() * th.sin(), 0.0, PI, 20_000);
        assert!((mass - 1.0).abs() < 1e-6, "rho={rho}: {mass}");
    }
    let n = heat_truncation(50.0, 2, 1e-12).unwrap();
    for c in [-1.0, 0.0, 1.0] {
        assert!((spherical_heat(c, 50.0, 2, n, 1e-12).unwrap() - 1.0 / sigma2).abs() < 1e-12);
    }
    let n = heat_truncation(0.5, 2, 1e-12).unwrap();
    let values: Vec<f64> = (0..=40).map(|i| spherical_heat((PI * i as f64 / 40.0).cos(), 0.5, 2, n, 1e-12).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
    // too short a truncation for the requested tail is refused
    assert!(spherical_heat(1.0, 1e-3, 2, 2, 1e-12).is_err());
}

proptest! {
    #[test]
    fn multiplier_semigroup(a in 0.0f64..3.0, b in 0.0f64..3.0, t1 in 0.01f64..5.0, t2 in 0.01f64..5.0, xi in 0.0f64..4.0) {
        prop_assume!(a + b > 1e-3);
        let p = params(a, b);
        let prod = elliptic_multiplier(&p, t1, xi).unwrap() * elliptic_multiplier(&p, t2, xi).unwrap();
        let joint = elliptic_multiplier(&p, t1 + t2, xi).unwrap();
        prop_assert!((prod - joint).abs() <= 1e-12);
        prop_assert!(joint > 0.0 && joint <= 1.0);
    }

    #[test]
    fn kernel_nonnegative_and_radially_decreasing(a in 0.0f64..3.0, b in 0.0f64..3.0, t in 0.05f64..5.0, d in 1usize..4) {
        prop_assume!(a + b > 1e-2);
        let p = EllipticParams::new(a, b, d).unwrap();
        let radii = [0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0];
        let vals: Vec<f64> = radii.iter().map(|&r| elliptic_kernel(&p, t, r).unwrap()).collect();
        prop_assert!(vals.iter().all(|&v| v >= 0.0));
        for w in vals.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-9) + 1e-15, "{vals:?}");
        }
    }
}

use std::f64::consts::PI;

use serde::Serialize;

use super::CheckOutcome;
use crate::error::Result;
use crate::kernels::{
    elliptic_kernel, elliptic_kernel_schoenberg, elliptic_multiplier, periodic_kernel, spherical_heat, spherical_poisson,
    EllipticParams,
};
use crate::numerics::{integrate_adaptive, QuadratureSpec};
use crate::scalar::sphere_area;

/// Parameter grid for [`check_kernel_identities`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityConfig {
    pub pairs: Vec<(f64, f64)>,
    pub times: Vec<f64>,
    pub dims: Vec<usize>,
    /// Radii ρ of the sphere Poisson kernel and times of the sphere heat kernel.
    pub sphere_rho: Vec<f64>,
    pub sphere_times: Vec<f64>,
    pub sphere_dims: Vec<usize>,
    pub closed_form_tol: f64,
    pub normalization_tol: f64,
    pub gauss_limit_tol: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self {
            pairs: vec![(1.0, 1.0), (2.0, 0.5), (1.0, 0.0), (0.0, 1.0)],
            times: vec![0.1, 1.0, 10.0],
            dims: vec![1, 2],
            sphere_rho: vec![0.1, 0.5, 0.9],
            sphere_times: vec![0.1, 1.0, 10.0],
            sphere_dims: vec![2, 3],
            closed_form_tol: 1e-8,
            normalization_tol: 1e-6,
            gauss_limit_tol: 1e-4,
        }
    }
}

fn quad() -> QuadratureSpec<f64> {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-11)
}

fn pair_label(a: f64, b: f64) -> String {
    format!("({a},{b})")
}

fn max_rel_error(points: &[f64], got: impl Fn(f64) -> Result<f64>, want: impl Fn(f64) -> f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in points {
        let w = want(x);
        worst = worst.max((got(x)? - w).abs() / w.abs());
    }
    Ok(worst)
}

/// ∫_{ℝ^d} φ dx = |S^{d−1}| ∫₀^∞ φ(r) r^{d−1} dr, split at the kernel's scale.
fn euclidean_mass(p: &EllipticParams<f64>, t: f64) -> Result<f64> {
    let d = p.d;
    // the kernel's spatial scale: √(bt) when diffusive, t/√a in the Poisson regime
    let scale = if p.a > 0.0 { t / p.a.sqrt() } else { 0.0 }.max((p.b * t).sqrt()).max(1e-3);
    let f = |r: f64| elliptic_kernel(p, t, r).unwrap_or(f64::NAN) * r.powi(d as i32 - 1);
    let spec = quad().with_radius(scale);
    let near = integrate_adaptive(f, 0.0, scale, &spec)?;
    let far = integrate_adaptive(f, scale, f64::INFINITY, &spec)?;
    let shell = if d == 1 { 2.0 } else { sphere_area::<f64>(d - 1) };
    Ok(shell * (near + far))
}

/// σ_{d−1} ∫₀^π K(cos θ) sin^{d−1}θ dθ.
fn sphere_mass(d: usize, k: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let f = |th: f64| k(th.cos()).unwrap_or(f64::NAN) * th.sin().powi(d as i32 - 1);
    let half = integrate_adaptive(&f, 0.0, PI / 2.0, &quad())? + integrate_adaptive(&f, PI / 2.0, PI, &quad())?;
    Ok(sphere_area::<f64>(d - 1) * half)
}

/// Closed forms, normalizations, radial decrease, the Gauss limit and the
/// torus semigroup, each as an outcome |error| ≤ tol.
pub fn check_kernel_identities(config: &IdentityConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let err = |name: &str, e: f64, tol: f64| CheckOutcome::new(name, e, 0.0, tol);

    for &(a, b) in &config.pairs {
        let p = EllipticParams::new(a, b, 1)?;
        for &t in &config.times {
            let m0 = elliptic_multiplier(&p, t, 0.0)?;
            out.push(err("kernels/multiplier-at-zero", (m0 - 1.0).abs(), 0.0).with("pair", pair_label(a, b)).with("t", t));
        }
    }

    // Twenty radii in [0, 4.75] at t = 1, d = 1.
    let xs: Vec<f64> = (0..20).map(|i| 0.25 * i as f64).collect();
    let poisson = EllipticParams::new(1.0, 0.0, 1)?;
    let cauchy = |x: f64| 1.0 / (PI * (1.0 + x * x));
    let e = max_rel_error(&xs, |x| elliptic_kernel(&poisson, 1.0, x), cauchy)?;
    out.push(err("kernels/poisson-closed-form", e, config.closed_form_tol).with("points", xs.len()));
    let e = max_rel_error(&xs, |x| elliptic_kernel_schoenberg(&poisson, 1.0, x), cauchy)?;
    out.push(err("kernels/poisson-schoenberg", e, config.closed_form_tol).with("points", xs.len()));

    let gauss = EllipticParams::new(0.0, 1.0, 1)?;
    let heat = |x: f64| (-x * x / 4.0).exp() / (4.0 * PI).sqrt();
    let e = max_rel_error(&xs, |x| elliptic_kernel(&gauss, 1.0, x), heat)?;
    out.push(err("kernels/gauss-closed-form", e, config.closed_form_tol).with("points", xs.len()));
    // φ(x) = 2∫₀^∞ φ̂(ξ) cos(2πxξ) dξ, against the multiplier itself.
    let e = max_rel_error(
        &xs[..12],
        |x| {
            let f = |xi: f64| 2.0 * elliptic_multiplier(&gauss, 1.0, xi).unwrap_or(f64::NAN) * (2.0 * PI * x * xi).cos();
            integrate_adaptive(f, 0.0, 3.0, &quad())
        },
        heat,
    )?;
    out.push(err("kernels/gauss-fourier-inversion", e, config.closed_form_tol).with("points", 12));

    for &(a, b) in &config.pairs {
        for &d in &config.dims {
            let p = EllipticParams::new(a, b, d)?;
            for &t in &config.times {
                let mass = euclidean_mass(&p, t)?;
                out.push(
                    err("kernels/normalization", (mass - 1.0).abs(), config.normalization_tol)
                        .with("pair", pair_label(a, b))
                        .with("d", d)
                        .with("t", t),
                );
            }
            let radii = [0.0, 0.1, 0.3, 1.0, 3.0];
            let mut rise = 0.0f64;
            for w in radii.windows(2) {
                rise = rise.max(elliptic_kernel(&p, 1.0, w[1])? - elliptic_kernel(&p, 1.0, w[0])?);
            }
            out.push(err("kernels/radial-decrease", rise, 0.0).with("pair", pair_label(a, b)).with("d", d));
        }
    }

    for &(a, b) in &config.pairs {
        let p = EllipticParams::new(a, b, 1)?;
        for &t in &config.times {
            let f = |x: f64| periodic_kernel(&p, t, x).unwrap_or(f64::NAN);
            // Ψ is even with its peak at 0; integrate each half separately.
            let mass = integrate_adaptive(f, 0.0, 0.5, &quad())? + integrate_adaptive(f, 0.5, 1.0, &quad())?;
            out.push(
                err("kernels/torus-normalization", (mass - 1.0).abs(), config.normalization_tol)
                    .with("pair", pair_label(a, b))
                    .with("t", t),
            );
        }
    }

    for &d in &config.sphere_dims {
        for &rho in &config.sphere_rho {
            let mass = sphere_mass(d, |c| spherical_poisson(c, rho, d))?;
            out.push(
                err("kernels/sphere-poisson-normalization", (mass - 1.0).abs(), config.normalization_tol)
                    .with("d", d)
                    .with("rho", rho),
            );
        }
        for &t in &config.sphere_times {
            let n = crate::kernels::heat_truncation(t, d, 1e-14)?;
            let mass = sphere_mass(d, |c| spherical_heat(c, t, d, n, 1e-14))?;
            out.push(
                err("kernels/sphere-heat-normalization", (mass - 1.0).abs(), config.normalization_tol)
                    .with("d", d)
                    .with("t", t)
                    .with("truncation", n),
            );
        }
    }

    let near_heat = EllipticParams::new(1e-6, 1.0, 1)?;
    for xi in [0.5, 1.0, 2.0] {
        let m = elliptic_multiplier(&near_heat, 1.0, xi)?;
        let e = (m - (-(2.0 * PI * xi).powi(2)).exp()).abs();
        out.push(err("kernels/gauss-limit", e, config.gauss_limit_tol).with("a", 1e-6).with("xi", xi).with("t", 1.0));
    }

    // Ψ(·, s) ∗ Ψ(·, t) = Ψ(·, s + t) on 𝕋.
    let p = EllipticParams::new(1.0, 1.0, 1)?;
    let (s, t) = (0.2, 0.3);
    let mut worst = 0.0f64;
    for x in [0.0, 0.15, 0.5, 0.8] {
        let f = |y: f64| periodic_kernel(&p, s, x - y).unwrap_or(f64::NAN) * periodic_kernel(&p, t, y).unwrap_or(f64::NAN);
        let conv = integrate_adaptive(f, 0.0, 1.0, &quad())?;
        let want = periodic_kernel(&p, s + t, x)?;
        worst = worst.max((conv - want).abs() / want);
    }
    out.push(err("kernels/torus-semigroup", worst, config.closed_form_tol).with("s", s).with("t", t));
    Ok(out)
}

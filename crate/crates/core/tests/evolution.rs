use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varmax::evolution::{
    evolve_line, evolve_torus, evolve_zonal_sphere, poisson_halfplane, zonal_interpolant, LineFamily, LinePropagator,
    Propagator, SphereFamily, TorusInterpolation, TorusPropagator, ZonalPropagator,
};
use varmax::grid::{Domain, GridFunction};
use varmax::kernels::{EllipticParams, KernelSpec};
use varmax::numerics::{integrate_adaptive, legendre_all, QuadratureSpec};

fn elliptic(a: f64, b: f64) -> KernelSpec<f64> {
    KernelSpec::Elliptic(EllipticParams::new(a, b, 1).unwrap())
}

fn heat_profile(x: f64, s: f64) -> f64 {
    (-x * x / (4.0 * s)).exp() / (4.0 * PI * s).sqrt()
}

fn poisson_profile(x: f64, t: f64) -> f64 {
    t / (PI * (x * x + t * t))
}

/// Random nonnegative piecewise-linear values on `n` nodes with `segments`
/// kinks, zero at both ends.
fn pl_values(rng: &mut ChaCha8Rng, n: usize, segments: usize) -> Vec<f64> {
    let mut knots: Vec<usize> = (0..segments - 1).map(|_| rng.gen_range(1..n - 1)).collect();
    knots.push(0);
    knots.push(n - 1);
    knots.sort();
    knots.dedup();
    let heights: Vec<f64> = knots
        .iter()
        .map(|&k| if k == 0 || k == n - 1 { 0.0 } else { rng.gen_range(0.0..1.0) })
        .collect();
    (0..n)
        .map(|i| {
            let s = knots.partition_point(|&k| k <= i).min(knots.len() - 1).max(1);
            let (k0, k1) = (knots[s - 1], knots[s]);
            let w = (i - k0) as f64 / (k1 - k0) as f64;
            heights[s - 1] * (1.0 - w) + heights[s] * w
        })
        .collect()
}

fn lipschitz(v: &[f64], h: &[f64]) -> f64 {
    v.windows(2).zip(h).map(|(w, h)| (w[1] - w[0]).abs() / h).fold(0.0, f64::max)
}

#[test]
fn line_constant_datum_is_reproduced_at_the_centre() {
    let d = Domain::<f64>::Line { x_min: -50.0, x_max: 50.0, n: 1001 };
    let u0 = GridFunction::new(d, vec![2.5; 1001]).unwrap();
    for spec in [elliptic(0.0, 1.0), elliptic(1.0, 1.0)] {
        let u = evolve_line(&u0, &spec, 1.0).unwrap();
        assert!((u.values()[500] - 2.5).abs() < 1e-4, "{spec:?}: {}", u.values()[500]);
    }
}

#[test]
fn line_heat_semigroup() {
    let d = Domain::<f64>::Line { x_min: -10.0, x_max: 10.0, n: 4001 };
    let u0 = GridFunction::from_fn(d, |x| heat_profile(x, 1.0)).unwrap();
    let u = evolve_line(&u0, &elliptic(0.0, 1.0), 1.0).unwrap();
    for (x, v) in u.nodes().iter().zip(u.values()) {
        assert!((v - heat_profile(*x, 2.0)).abs() < 1e-6, "x={x}");
    }
}

#[test]
fn halfplane_poisson_semigroup_at_selected_points() {
    let d = Domain::<f64>::Line { x_min: -100.0, x_max: 100.0, n: 40001 };
    let u0 = GridFunction::from_fn(d, |x| poisson_profile(x, 1.0)).unwrap();
    for y in [0.0, 0.3, 1.0, 2.5, 7.0] {
        let v = poisson_halfplane(&u0, y, 1.0).unwrap();
        assert!((v - poisson_profile(y, 2.0)).abs() < 1e-6, "y={y}: {v}");
    }
}

#[test]
fn halfplane_constant_and_decay() {
    let d = Domain::<f64>::Line { x_min: -2000.0, x_max: 2000.0, n: 4001 };
    let u0 = GridFunction::new(d.clone(), vec![0.7; 4001]).unwrap();
    assert!((poisson_halfplane(&u0, 0.0, 1.0).unwrap() - 0.7).abs() < 1e-3 * 0.7);
    let bump = GridFunction::from_fn(d, |x| (1.0 - x.abs()).max(0.0)).unwrap();
    let mut last = f64::INFINITY;
    for t in [1.0, 10.0, 100.0, 1000.0, 1e4] {
        let v = poisson_halfplane(&bump, 0.0, t).unwrap();
        assert!(v < last);
        last = v;
    }
    assert!(last < 1e-4);
}

#[test]
fn line_poisson_grid_matches_halfplane_points() {
    let d = Domain::<f64>::Line { x_min: -3.0, x_max: 3.0, n: 301 };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u0 = GridFunction::new(d, pl_values(&mut rng, 301, 6)).unwrap();
    let u = evolve_line(&u0, &elliptic(1.0, 0.0), 0.37).unwrap();
    for (x, v) in u.nodes().iter().zip(u.values()) {
        assert!((v - poisson_halfplane(&u0, *x, 0.37).unwrap()).abs() < 1e-13);
    }
}

#[test]
fn line_matches_quadrature_of_the_interpolant() {
    let d = Domain::<f64>::Line { x_min: -1.0, x_max: 1.0, n: 41 };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let vals = pl_values(&mut rng, 41, 5);
    let u0 = GridFunction::new(d, vals.clone()).unwrap();
    let h = 0.05;
    let interp = |y: f64| -> f64 {
        let s = (y + 1.0) / h;
        let j = s.floor();
        let w = s - j;
        let at = |k: f64| if k < 0.0 || k > 40.0 { 0.0 } else { vals[k as usize] };
        at(j) * (1.0 - w) + at(j + 1.0) * w
    };
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-11);
    for (a, b) in [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0)] {
        let p = EllipticParams::new(a, b, 1).unwrap();
        let t = 0.2;
        let u = evolve_line(&u0, &KernelSpec::Elliptic(p), t).unwrap();
        for i in [0, 7, 20, 33, 40] {
            let x = -1.0 + h * i as f64;
            let mut direct = 0.0;
            for k in 0..42 {
                let (lo, hi) = (-1.05 + h * k as f64, -1.0 + h * k as f64);
                direct += integrate_adaptive(
                    |y| varmax::kernels::elliptic_kernel(&p, t, x - y).unwrap() * interp(y),
                    lo,
                    hi,
                    &spec,
                )
                .unwrap();
            }
            assert!((u.values()[i] - direct).abs() < 1e-9, "(a,b)=({a},{b}) i={i}: {} vs {direct}", u.values()[i]);
        }
    }
}

#[test]
fn propagator_point_evaluation_matches_table() {
    let d = Domain::<f64>::Line { x_min: -1.0, x_max: 1.0, n: 81 };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let vals = pl_values(&mut rng, 81, 7);
    let p = LinePropagator::new(&d, LineFamily::HalfPlanePoisson, vec![-1.5, 0.0, 2.0]).unwrap();
    let prep = p.prepare(&vals).unwrap();
    for t in [0.003, 0.1, 4.0] {
        let table = p.table(t).unwrap();
        let mut out = vec![vec![]; 3];
        p.apply_all(&table, &prep, &mut out);
        for ch in 0..3 {
            for i in [0, 13, 40, 80] {
                let v = p.apply_at(&prep, ch, i, t).unwrap();
                assert!((v - out[ch][i]).abs() < 1e-13, "ch={ch} i={i} t={t}");
            }
        }
    }
}

#[test]
fn torus_constant_and_single_mode() {
    let d = Domain::<f64>::Torus { n: 64 };
    let one = GridFunction::new(d.clone(), vec![1.0; 64]).unwrap();
    let mode = GridFunction::from_fn(d, |x| 1.0 + (2.0 * PI * x).cos()).unwrap();
    for (a, b) in [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (2.0, 0.5)] {
        let p = EllipticParams::new(a, b, 1).unwrap();
        for t in [0.01, 0.5, 3.0] {
            let u = evolve_torus(&one, &p, t).unwrap();
            assert!(u.values().iter().all(|v| (v - 1.0).abs() < 1e-14));
            let u = evolve_torus(&mode, &p, t).unwrap();
            let damp = (-t * p.exponent(1.0)).exp();
            for (x, v) in u.nodes().iter().zip(u.values()) {
                assert!((v - (1.0 + damp * (2.0 * PI * x).cos())).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn torus_pl_symbol_matches_direct_periodized_convolution() {
    // The piecewise-linear symbol evolves the periodic hat interpolant exactly;
    // compare against quadrature of Ψ(x − y) against that interpolant.
    let n = 16;
    let d = Domain::<f64>::Torus { n };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let p = EllipticParams::new(1.0, 1.0, 1).unwrap();
    let prop = TorusPropagator::new(&d, p, TorusInterpolation::PiecewiseLinear).unwrap();
    let prep = prop.prepare(&vals).unwrap();
    let h = 1.0 / n as f64;
    let interp = |y: f64| {
        let s = y.rem_euclid(1.0) / h;
        let j = s.floor() as usize % n;
        let w = s - s.floor();
        vals[j] * (1.0 - w) + vals[(j + 1) % n] * w
    };
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-11);
    let t = 0.05;
    for i in [0, 5, 11] {
        let x = i as f64 * h;
        let mut direct = 0.0;
        for k in 0..n {
            direct += integrate_adaptive(
                |y| varmax::kernels::periodic_kernel(&p, t, (x - y).rem_euclid(1.0)).unwrap() * interp(y),
                k as f64 * h,
                (k + 1) as f64 * h,
                &spec,
            )
            .unwrap();
        }
        let got = prop.apply_at(&prep, 0, i, t).unwrap();
        assert!((got - direct).abs() < 1e-8, "i={i}: {got} vs {direct}");
    }
}

#[test]
fn torus_flattens_at_large_times() {
    let d = Domain::<f64>::Torus { n: 128 };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u0 = GridFunction::new(d, (0..128).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap();
    let p = EllipticParams::new(1.0, 1.0, 1).unwrap();
    let mut last = f64::INFINITY;
    for t in [0.1, 1.0, 10.0, 100.0] {
        let u = evolve_torus(&u0, &p, t).unwrap();
        let osc = u.max() - u.min();
        assert!(osc <= last + 1e-15);
        last = osc;
    }
    assert!(last < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn torus_semigroup(seed in any::<u64>(), t1 in 0.001f64..1.0, t2 in 0.001f64..1.0) {
        let d = Domain::<f64>::Torus { n: 96 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u0 = GridFunction::new(d, (0..96).map(|_| rng.gen_range(0.0..2.0)).collect()).unwrap();
        let p = EllipticParams::new(1.0, 1.0, 1).unwrap();
        let two = evolve_torus(&evolve_torus(&u0, &p, t1).unwrap(), &p, t2).unwrap();
        let one = evolve_torus(&u0, &p, t1 + t2).unwrap();
        for (a, b) in two.values().iter().zip(one.values()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn lipschitz_contraction_and_maximum_principle(seed in any::<u64>(), t in 0.001f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Line.
        let d = Domain::<f64>::Line { x_min: -1.0, x_max: 1.0, n: 101 };
        let vals = pl_values(&mut rng, 101, 6);
        let u0 = GridFunction::new(d, vals.clone()).unwrap();
        let hs = vec![0.02; 100];
        for spec in [elliptic(1.0, 1.0), elliptic(1.0, 0.0), elliptic(0.0, 1.0)] {
            let u = evolve_line(&u0, &spec, t).unwrap();
            prop_assert!(lipschitz(u.values(), &hs) <= lipschitz(&vals, &hs) * (1.0 + 1e-6));
            prop_assert!(u.min() >= -1e-15 && u.max() <= u0.max() * (1.0 + 1e-12));
        }
        // Torus, piecewise-linear symbol.
        let n = 64;
        let d = Domain::<f64>::Torus { n };
        let tv: Vec<f64> = pl_values(&mut rng, n + 1, 5)[..n].to_vec();
        let prop = TorusPropagator::new(&d, EllipticParams::new(1.0, 1.0, 1).unwrap(), TorusInterpolation::PiecewiseLinear).unwrap();
        let prep = prop.prepare(&tv).unwrap();
        let mut out = vec![vec![]];
        prop.apply_all(&prop.table(t).unwrap(), &prep, &mut out);
        let mut cyc = out[0].clone();
        cyc.push(out[0][0]);
        let mut cyc0 = tv.clone();
        cyc0.push(tv[0]);
        let hs = vec![1.0 / n as f64; n];
        prop_assert!(lipschitz(&cyc, &hs) <= lipschitz(&cyc0, &hs) * (1.0 + 1e-6) + 1e-12);
        let (lo, hi) = tv.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        prop_assert!(out[0].iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
    }
}

#[test]
fn zonal_constant_is_preserved() {
    let d = Domain::<f64>::ZonalSphere { n: 64, d: 2 };
    let one = GridFunction::new(d.clone(), vec![1.0; 64]).unwrap();
    for spec in [KernelSpec::<f64>::SphericalPoisson { d: 2 }, KernelSpec::SphericalHeat { d: 2, truncation: 8 }] {
        for time in [0.1f64, 0.5, 0.9] {
            let u = evolve_zonal_sphere(&one, &spec, time).unwrap();
            let err = u.values().iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
            assert!(err < 1e-6, "{spec:?} {time}: {err}");
        }
    }
    for fam in [SphereFamily::Poisson, SphereFamily::Heat] {
        let prop = ZonalPropagator::new(&d, fam, 1e-2).unwrap();
        let prep = prop.prepare(&[1.0; 64]).unwrap();
        for t in [1e-2f64, 0.1, 5.0] {
            let mut out = vec![vec![]];
            prop.apply_all(&prop.table(t).unwrap(), &prep, &mut out);
            assert!(out[0].iter().all(|v| (v - 1.0).abs() < 1e-9), "{fam:?} t={t}");
        }
    }
}

#[test]
fn zonal_degree_one_harmonic() {
    let d = Domain::<f64>::ZonalSphere { n: 64, d: 2 };
    let u0 = GridFunction::from_fn(d, |th| th.cos()).unwrap();
    // |cos θ| is what gets evolved; use 1 + cos θ ≥ 0 instead and subtract the constant.
    let u0 = u0.map(|v| 1.0 + v);
    for t in [0.05f64, 0.3, 1.0] {
        let u = evolve_zonal_sphere(&u0, &KernelSpec::SphericalHeat { d: 2, truncation: 8 }, t).unwrap();
        for (th, v) in u.nodes().iter().zip(u.values()) {
            assert!((v - 1.0 - (-2.0 * t).exp() * th.cos()).abs() < 1e-6, "t={t} θ={th}");
        }
    }
    for rho in [0.2f64, 0.5, 0.8] {
        let u = evolve_zonal_sphere(&u0, &KernelSpec::SphericalPoisson { d: 2 }, rho).unwrap();
        for (th, v) in u.nodes().iter().zip(u.values()) {
            assert!((v - 1.0 - rho * th.cos()).abs() < 1e-6, "ρ={rho} θ={th}");
        }
    }
}

#[test]
fn zonal_spectral_is_exact_for_the_interpolant() {
    let n = 24;
    let d = Domain::<f64>::ZonalSphere { n, d: 2 };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u0 = GridFunction::new(d.clone(), (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap();
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-11);
    let theta = u0.nodes();
    let mut breaks = vec![0.0];
    breaks.extend(theta.iter().copied());
    breaks.push(PI);
    let coeff = |l: usize| -> f64 {
        let mut s = 0.0;
        for w in breaks.windows(2) {
            s += integrate_adaptive(
                |th: f64| zonal_interpolant(&u0, th).unwrap() * legendre_all(l, th.cos())[l] * th.sin(),
                w[0],
                w[1],
                &spec,
            )
            .unwrap();
        }
        s * (2 * l + 1) as f64 / 2.0
    };
    let t = 0.02;
    let lmax = 60;
    let c: Vec<f64> = (0..=lmax).map(coeff).collect();
    let prop = ZonalPropagator::new(&d, SphereFamily::Heat, t).unwrap();
    let prep = prop.prepare(u0.values()).unwrap();
    for i in [0, 5, 12, 23] {
        let p = legendre_all(lmax, theta[i].cos());
        let want: f64 = (0..=lmax).map(|l| (-t * (l * (l + 1)) as f64).exp() * c[l] * p[l]).sum();
        let got = prop.apply_at(&prep, 0, i, t).unwrap();
        assert!((got - want).abs() < 1e-9, "i={i}: {got} vs {want}");
    }
}

#[test]
fn zonal_spectral_agrees_with_direct_quadrature_on_smooth_data() {
    let d = Domain::<f64>::ZonalSphere { n: 64, d: 2 };
    let u0 = GridFunction::from_fn(d.clone(), |th| (-(th - 1.0).powi(2) * 4.0).exp()).unwrap();
    let prop = ZonalPropagator::new(&d, SphereFamily::Poisson, 0.05).unwrap();
    let prep = prop.prepare(u0.values()).unwrap();
    for rho in [0.3f64, 0.7] {
        let direct = evolve_zonal_sphere(&u0, &KernelSpec::SphericalPoisson { d: 2 }, rho).unwrap();
        let mut out = vec![vec![]];
        prop.apply_all(&prop.table(-rho.ln()).unwrap(), &prep, &mut out);
        for (a, b) in out[0].iter().zip(direct.values()) {
            assert!((a - b).abs() < 2e-3, "ρ={rho}: {a} vs {b}");
        }
    }
}

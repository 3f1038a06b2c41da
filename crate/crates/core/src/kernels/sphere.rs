use crate::error::{Error, Result};
use crate::numerics::GegenbauerEval;
use crate::scalar::{lit, sphere_area, Real};

/// Smallest series truncation the heat kernel is ever evaluated with.
pub const HEAT_MIN_TRUNCATION: usize = 8;

/// 𝒫(ω·η, ρ) = (1 − ρ²) / (σ_d (ρ² − 2ρ ω·η + 1)^{(d+1)/2}), the Poisson
/// kernel of the unit ball of ℝ^{d+1}.
///
/// The exponent is (d+1)/2, the one for which ∫_{S^d} 𝒫 dσ = 1; for d = 1
/// this is the familiar (1 − ρ²)/(2π(1 − 2ρ cos θ + ρ²)).
pub fn spherical_poisson<T: Real>(cos_angle: T, rho: T, d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::invalid("d", "sphere dimension must be at least 1"));
    }
    if cos_angle.abs() > T::one() || cos_angle.is_nan() {
        return Err(Error::OutsideUnitInterval { value: cos_angle.to_f64_lossy() });
    }
    if !(rho >= T::zero() && rho < T::one()) {
        return Err(Error::invalid("rho", "need 0 ≤ ρ < 1"));
    }
    let half = T::from_usize_exact(d + 1) / lit(2.0);
    // ρ² − 2ρc + 1 = (1 − ρ)² + 2ρ(1 − c), free of cancellation near c = 1.
    let base = (T::one() - rho) * (T::one() - rho) + lit::<T>(2.0) * rho * (T::one() - cos_angle);
    Ok((T::one() - rho * rho) / (sphere_area::<T>(d) * base.powf(half)))
}

/// Bound on the n-th term of the heat series: e^{−tn(n+d−1)}·((n+λ)/λ)·C_n^λ(1).
fn heat_term_bound<T: Real>(ev: &GegenbauerEval<T>, t: T, d: usize, n: usize) -> T {
    let lambda = ev.order_lambda;
    let nf = T::from_usize_exact(n);
    let growth = (nf + lambda) / lambda * ev.at_one(n);
    (-t * nf * (nf + T::from_usize_exact(d - 1))).exp() * growth
}

/// Smallest N ≥ 8 whose series term bound is below `tail_tol`.
pub fn heat_truncation<T: Real>(t: T, d: usize, tail_tol: T) -> Result<usize> {
    if d < 2 {
        return Err(Error::invalid("d", "the Gegenbauer heat series needs d ≥ 2"));
    }
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::invalid("t", "time must be positive and finite"));
    }
    if !(tail_tol > T::zero()) {
        return Err(Error::invalid("tail_tol", "must be positive"));
    }
    let ev = GegenbauerEval::for_sphere(d, usize::MAX)?;
    let mut n = HEAT_MIN_TRUNCATION;
    while heat_term_bound(&ev, t, d, n) >= tail_tol {
        n += 1;
        if n > 1_000_000 {
            return Err(Error::invalid("t", "time too small for a truncated heat series"));
        }
    }
    Ok(n)
}

/// 𝒦(ω·η, t) = σ_d^{−1} Σ_{n=0}^{N} e^{−tn(n+d−1)} ((n+λ)/λ) C_n^λ(ω·η), λ = (d−1)/2.
///
/// The σ_d^{−1} factor makes ∫_{S^d} 𝒦 dσ = 1. Fails if `truncation` is below
/// the N that [`heat_truncation`] demands for `tail_tol`; slightly negative
/// values above −`tail_tol` are clamped to 0.
pub fn spherical_heat<T: Real>(cos_angle: T, t: T, d: usize, truncation: usize, tail_tol: T) -> Result<T> {
    let needed = heat_truncation(t, d, tail_tol)?;
    if truncation < needed {
        return Err(Error::InsufficientTruncation { given: truncation, needed });
    }
    let ev = GegenbauerEval::for_sphere(d, truncation)?;
    let c = ev.eval_all(cos_angle)?;
    let lambda = ev.order_lambda;
    let shift = T::from_usize_exact(d - 1);
    let mut sum = T::zero();
    for (n, &cn) in c.iter().enumerate() {
        let nf = T::from_usize_exact(n);
        let damp = (-t * nf * (nf + shift)).exp();
        if damp == T::zero() {
            break;
        }
        sum = sum + damp * (nf + lambda) / lambda * cn;
    }
    let value = sum / sphere_area::<T>(d);
    if value < T::zero() {
        if value > -tail_tol {
            return Ok(T::zero());
        }
        return Err(Error::NegativeTruncation { value: value.to_f64_lossy(), tail_tol: tail_tol.to_f64_lossy() });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, QuadratureSpec};
    use std::f64::consts::PI;

    fn zonal_integral(f: impl Fn(f64) -> f64) -> f64 {
        let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-11);
        2.0 * PI * integrate_adaptive(|th: f64| f(th.cos()) * th.sin(), 0.0, PI, &spec).unwrap()
    }

    #[test]
    fn poisson_values() {
        for d in 1..5 {
            let v = spherical_poisson(0.3f64, 0.0, d).unwrap();
            assert!((v - 1.0 / sphere_area::<f64>(d)).abs() < 1e-15);
        }
        // (1 − ρ²)/(2π(1 − ρ)²) at ρ = 1/2 on the circle.
        let v = spherical_poisson(1.0f64, 0.5, 1).unwrap();
        assert!((v - 3.0 / (2.0 * PI)).abs() < 1e-14);
        let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-12);
        let m = integrate_adaptive(|th: f64| spherical_poisson(th.cos(), 0.8, 1).unwrap(), -PI, PI, &spec).unwrap();
        assert!((m - 1.0).abs() < 1e-10);
        assert!(spherical_poisson(0.0f64, 1.0, 2).is_err());
        assert!(spherical_poisson(1.5f64, 0.5, 2).is_err());
    }

    #[test]
    fn poisson_normalized_on_s2() {
        for rho in [0.0, 0.3, 0.9] {
            let m = zonal_integral(|c| spherical_poisson(c, rho, 2).unwrap());
            assert!((m - 1.0).abs() < 1e-9, "ρ={rho}: {m}");
        }
    }

    #[test]
    fn heat_normalized_on_s2() {
        for t in [0.1, 1.0, 10.0] {
            let n = heat_truncation(t, 2, 1e-10).unwrap();
            let m = zonal_integral(|c| spherical_heat(c, t, 2, n, 1e-10).unwrap());
            assert!((m - 1.0).abs() < 1e-6, "t={t}: {m}");
        }
    }

    #[test]
    fn heat_large_time_is_uniform() {
        let n = heat_truncation(30.0, 2, 1e-10).unwrap();
        assert_eq!(n, HEAT_MIN_TRUNCATION);
        for c in [-1.0, 0.0, 1.0] {
            let v = spherical_heat(c, 30.0, 2, n, 1e-10).unwrap();
            assert!((v - 1.0 / (4.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn heat_decreases_with_angle() {
        let n = heat_truncation(0.5, 2, 1e-10).unwrap();
        let vals: Vec<f64> = (0..=60).map(|i| spherical_heat((PI * i as f64 / 60.0).cos(), 0.5, 2, n, 1e-10).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn heat_rejects_short_truncation() {
        let needed = heat_truncation(0.01, 2, 1e-10).unwrap();
        assert!(needed > HEAT_MIN_TRUNCATION);
        assert_eq!(
            spherical_heat(0.5f64, 0.01, 2, needed - 1, 1e-10).unwrap_err(),
            Error::InsufficientTruncation { given: needed - 1, needed }
        );
    }

    #[test]
    fn heat_in_higher_dimension_is_normalized() {
        // On S³ the zonal measure is σ₂·sin²θ dθ.
        let t = 0.3;
        let n = heat_truncation(t, 3, 1e-12).unwrap();
        let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-11);
        let m = 4.0 * PI
            * integrate_adaptive(|th: f64| spherical_heat(th.cos(), t, 3, n, 1e-12).unwrap() * th.sin().powi(2), 0.0, PI, &spec)
                .unwrap();
        assert!((m - 1.0).abs() < 1e-8, "{m}");
    }
}

use super::{elliptic_multiplier, EllipticParams, LineKernel};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

fn check<T: Real>(params: &EllipticParams<T>, t: T) -> Result<()> {
    params.validate()?;
    if params.d != 1 {
        return Err(Error::invalid("d", "periodic kernels are implemented on the circle 𝕋 only"));
    }
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::invalid("t", "time must be positive and finite"));
    }
    Ok(())
}

/// Ψ_{a,b}(x, t) on 𝕋 = ℝ/ℤ.
///
/// Uses the Fourier series when φ̂(1, t) < 1/2 and the lattice sum otherwise.
pub fn periodic_kernel<T: Real>(params: &EllipticParams<T>, t: T, x: T) -> Result<T> {
    check(params, t)?;
    if elliptic_multiplier(params, t, T::one())? < lit(0.5) {
        periodic_kernel_fourier(params, t, x)
    } else {
        periodic_kernel_lattice(params, t, x)
    }
}

/// 1 + 2 Σ_{k≥1} φ̂(k, t) cos(2πkx), stopped once the terms drop below 1e-17.
pub fn periodic_kernel_fourier<T: Real>(params: &EllipticParams<T>, t: T, x: T) -> Result<T> {
    check(params, t)?;
    let two_pi_x = lit::<T>(2.0) * T::PI() * x;
    let cutoff = lit::<T>(1e-17).max(T::epsilon() * T::epsilon());
    let mut sum = T::one();
    let mut k = 1usize;
    loop {
        let kf = T::from_usize_exact(k);
        let m = (-t * params.exponent(kf)).exp();
        if m < cutoff {
            break;
        }
        sum = sum + lit::<T>(2.0) * m * (two_pi_x * kf).cos();
        k += 1;
        if k > 10_000_000 {
            return Err(Error::NonConvergence { estimate: sum.to_f64_lossy(), error_bound: m.to_f64_lossy() });
        }
    }
    Ok(sum)
}

/// Σ_n φ(x + n, t), summed outward until terms fall below 1e-16, capped at
/// 4096 images per side; the rest is added as ∫_{N+½}^∞ φ(y ± x) dy.
pub fn periodic_kernel_lattice<T: Real>(params: &EllipticParams<T>, t: T, x: T) -> Result<T> {
    check(params, t)?;
    let k = LineKernel::new(params, t)?;
    let x = x - x.floor();
    let mut sum = k.value(x);
    let mut n = 1usize;
    let cap = 4096;
    loop {
        let nf = T::from_usize_exact(n);
        let a = k.value(x + nf);
        let b = k.value(x - nf);
        sum = sum + a + b;
        if a + b < lit(1e-16) || n == cap {
            break;
        }
        n += 1;
    }
    let edge = T::from_usize_exact(n) + lit(0.5);
    sum = sum + k.tail_mass(edge + x) + k.tail_mass(edge - x);
    Ok(sum)
}

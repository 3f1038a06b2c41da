//! Floating-point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// A real scalar the kernels, evolutions and maximal functions can run on.
///
/// Implemented for `f32` and `f64`. The only transcendental not covered by
/// [`num_traits::Float`] is the complementary error function, which the
/// Gaussian hat convolutions need.
pub trait Real:
    Float + FloatConst + FromPrimitive + FftNum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    fn erfc(self) -> Self;

    /// Converts an `f64` literal; every literal used in the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f64 {
    #[inline]
    fn erfc(self) -> f64 {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> f32 {
        libm::erfcf(self)
    }
}

/// Shorthand for [`Real::lit`].
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// Γ(k/2) for a positive integer `k`, by the half-integer recurrence.
pub fn gamma_half<T: Real>(k: usize) -> T {
    assert!(k > 0, "gamma_half needs k > 0");
    let mut acc = if k % 2 == 0 { T::one() } else { T::PI().sqrt() };
    let mut j = if k % 2 == 0 { 2 } else { 1 };
    while j < k {
        acc = acc * T::from_usize_exact(j) / lit(2.0);
        j += 2;
    }
    acc
}

/// Surface area of the unit sphere S^d ⊂ ℝ^{d+1}: 2π^{(d+1)/2} / Γ((d+1)/2).
pub fn sphere_area<T: Real>(d: usize) -> T {
    let half = T::from_usize_exact(d + 1) / lit(2.0);
    lit::<T>(2.0) * T::PI().powf(half) / gamma_half::<T>(d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half::<f64>(1) - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half::<f64>(2), 1.0);
        assert!((gamma_half::<f64>(3) - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half::<f64>(8), 6.0);
    }

    #[test]
    fn sphere_areas() {
        let pi = std::f64::consts::PI;
        assert!((sphere_area::<f64>(1) - 2.0 * pi).abs() < 1e-14);
        assert!((sphere_area::<f64>(2) - 4.0 * pi).abs() < 1e-14);
        assert!((sphere_area::<f64>(3) - 2.0 * pi * pi).abs() < 1e-13);
    }
}

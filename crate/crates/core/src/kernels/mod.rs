//! Convolution kernels: the elliptic family φ_{a,b} on ℝ^d, its periodization
//! on 𝕋, and the Poisson and heat kernels of the sphere S^d.

mod elliptic;
mod line;
mod periodic;
mod sphere;

pub use elliptic::{elliptic_kernel, elliptic_kernel_schoenberg, elliptic_multiplier, schoenberg_density};
pub use line::LineKernel;
pub use periodic::{periodic_kernel, periodic_kernel_fourier, periodic_kernel_lattice};
pub use sphere::{heat_truncation, spherical_heat, spherical_poisson, HEAT_MIN_TRUNCATION};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Parameters of the equation a·u_tt − b·u_t + Δu = 0 on ℝ^d × (0, ∞). The
/// Fourier multiplier is exp(−t·s(|ξ|)) with s(ξ) = (−b + √(b² + 16aπ²ξ²)) / (2a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParams<T> {
    pub a: T,
    pub b: T,
    pub d: usize,
}

/// Which closed form, if any, `φ_{a,b}` reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// b = 0: Poisson kernel at time t/√a.
    Poisson,
    /// a = 0: Gauss kernel at time t/b.
    Heat,
    /// a, b > 0: Schoenberg mixture of Gaussians.
    Mixed,
}

impl<T: Real> EllipticParams<T> {
    pub fn new(a: T, b: T, d: usize) -> Result<Self> {
        let p = Self { a, b, d };
        p.validate()?;
        Ok(p)
    }

    pub fn poisson(d: usize) -> Self {
        Self { a: T::one(), b: T::zero(), d }
    }

    pub fn heat(d: usize) -> Self {
        Self { a: T::zero(), b: T::one(), d }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a >= T::zero() && self.a.is_finite()) {
            return Err(Error::invalid("a", "must be finite and ≥ 0"));
        }
        if !(self.b >= T::zero() && self.b.is_finite()) {
            return Err(Error::invalid("b", "must be finite and ≥ 0"));
        }
        if self.a == T::zero() && self.b == T::zero() {
            return Err(Error::invalid("a/b", "(a, b) = (0, 0) defines no kernel"));
        }
        if self.d == 0 {
            return Err(Error::invalid("d", "dimension must be at least 1"));
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        if self.b == T::zero() {
            Regime::Poisson
        } else if self.a == T::zero() {
            Regime::Heat
        } else {
            Regime::Mixed
        }
    }

    /// Time scales like length² (heat) rather than length.
    pub fn is_diffusive(&self) -> bool {
        self.regime() == Regime::Heat
    }

    /// s(ξ) in the cancellation-free form 8π²ξ² / (b + √(b² + 16aπ²ξ²)).
    pub fn exponent(&self, xi: T) -> T {
        if xi == T::zero() {
            return T::zero();
        }
        let pi2 = T::PI() * T::PI();
        let root = (self.b * self.b + lit::<T>(16.0) * self.a * pi2 * xi * xi).sqrt();
        lit::<T>(8.0) * pi2 * xi * xi / (self.b + root)
    }
}

/// The operator families whose maximal functions the crate computes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec<T> {
    Elliptic(EllipticParams<T>),
    /// Poisson extension into the unit ball, parameter ρ ∈ [0, 1).
    SphericalPoisson { d: usize },
    /// Heat semigroup on S^d; `truncation` is the largest series degree.
    SphericalHeat { d: usize, truncation: usize },
    /// Harmonic extension to the upper half-plane, sup over the cone |y − x| ≤ αt.
    NonTangentialPoisson { aperture: T },
}

impl<T: Real> KernelSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Elliptic(p) => p.validate(),
            KernelSpec::SphericalPoisson { d } => {
                if d == 0 {
                    return Err(Error::invalid("d", "sphere dimension must be at least 1"));
                }
                Ok(())
            }
            KernelSpec::SphericalHeat { d, truncation } => {
                if d < 2 {
                    return Err(Error::invalid("d", "the Gegenbauer heat series needs d ≥ 2"));
                }
                if truncation < 1 {
                    return Err(Error::invalid("truncation", "must be at least 1"));
                }
                Ok(())
            }
            KernelSpec::NonTangentialPoisson { aperture } => {
                if !(aperture >= T::zero() && aperture.is_finite()) {
                    return Err(Error::invalid("aperture", "must be finite and ≥ 0"));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            KernelSpec::Elliptic(p) => format!("elliptic(a={}, b={}, d={})", p.a, p.b, p.d),
            KernelSpec::SphericalPoisson { d } => format!("spherical-poisson(d={d})"),
            KernelSpec::SphericalHeat { d, truncation } => format!("spherical-heat(d={d}, N={truncation})"),
            KernelSpec::NonTangentialPoisson { aperture } => format!("nontangential-poisson(alpha={aperture})"),
        }
    }

    pub fn is_diffusive(&self) -> bool {
        match self {
            KernelSpec::Elliptic(p) => p.is_diffusive(),
            KernelSpec::SphericalHeat { .. } => true,
            _ => false,
        }
    }
}

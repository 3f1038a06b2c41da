use super::elliptic::LogIntegrand;
use super::{EllipticParams, Regime};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// The one-dimensional kernel φ_{a,b}(·, t) in a form with closed-form
/// antiderivatives, so convolutions with piecewise-linear data are exact.
///
/// The mixed regime is a finite Gaussian mixture: trapezoid nodes in
/// s = ln λ of the Schoenberg integral, each node a Gaussian of variance
/// λ/(2π). The integrand is analytic in a strip around the real s-axis, so
/// the trapezoid error is far below round-off.
#[derive(Debug, Clone, PartialEq)]
pub enum LineKernel<T> {
    Poisson { t: T },
    Gauss { sigma: T },
    Mixture { sigma: Vec<T>, weight: Vec<T> },
}

impl<T: Real> LineKernel<T> {
    pub fn new(params: &EllipticParams<T>, t: T) -> Result<Self> {
        params.validate()?;
        if params.d != 1 {
            return Err(Error::invalid("d", "line kernels are one-dimensional"));
        }
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::invalid("t", "time must be positive and finite"));
        }
        Ok(match params.regime() {
            Regime::Poisson => LineKernel::Poisson { t: t / params.a.sqrt() },
            Regime::Heat => LineKernel::Gauss { sigma: (lit::<T>(2.0) * t / params.b).sqrt() },
            Regime::Mixed => Self::mixture(params, t),
        })
    }

    /// The harmonic extension kernel t/(π(x² + t²)).
    pub fn poisson(t: T) -> Self {
        LineKernel::Poisson { t }
    }

    fn mixture(params: &EllipticParams<T>, t: T) -> Self {
        let log = LogIntegrand::new(params, t, T::zero(), 1);
        let (s0, width) = log.peak();
        let step = lit::<T>(0.25).min(lit::<T>(0.5) * width);
        let l0 = log.at_s(s0);
        let floor = l0 - lit(40.0);
        let mut nodes = vec![s0];
        for dir in [-T::one(), T::one()] {
            let mut k = 1usize;
            loop {
                let s = s0 + dir * step * T::from_usize_exact(k);
                if log.at_s(s) < floor {
                    break;
                }
                nodes.push(s);
                k += 1;
            }
        }
        nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let two_pi = lit::<T>(2.0) * T::PI();
        let sigma = nodes.iter().map(|&s| (s.exp() / two_pi).sqrt()).collect();
        let weight = nodes.iter().map(|&s| step * log.at_s(s).exp()).collect();
        LineKernel::Mixture { sigma, weight }
    }

    /// ∫ K dx; 1 up to the mixture's quadrature error.
    pub fn mass(&self) -> T {
        match self {
            LineKernel::Mixture { weight, .. } => weight.iter().fold(T::zero(), |s, &w| s + w),
            _ => T::one(),
        }
    }

    pub fn value(&self, x: T) -> T {
        match self {
            LineKernel::Poisson { t } => *t / (T::PI() * (x * x + *t * *t)),
            LineKernel::Gauss { sigma } => gauss_density(x, *sigma),
            LineKernel::Mixture { sigma, weight } => {
                sigma.iter().zip(weight).fold(T::zero(), |s, (&sg, &w)| s + w * gauss_density(x, sg))
            }
        }
    }

    /// ∫_x^∞ K(y) dy for x ≥ 0.
    pub fn tail_mass(&self, x: T) -> T {
        let x = x.abs();
        match self {
            LineKernel::Poisson { t } => (*t / x).atan() / T::PI(),
            LineKernel::Gauss { sigma } => gauss_tail(x, *sigma),
            LineKernel::Mixture { sigma, weight } => {
                sigma.iter().zip(weight).fold(T::zero(), |s, (&sg, &w)| s + w * gauss_tail(x, sg))
            }
        }
    }

    /// Even function R with R'' = K − mass·δ₀. The kink at 0 carries the mass,
    /// so R stays bounded (or logarithmic, for Poisson) and second
    /// differences of R do not cancel catastrophically when the kernel is
    /// narrow.
    pub fn ramp(&self, x: T) -> T {
        let x = x.abs();
        match self {
            LineKernel::Poisson { t } => {
                let t = *t;
                let atan_term = if x == T::zero() { T::zero() } else { x * (t / x).atan() };
                -(atan_term + t / lit(2.0) * (x * x + t * t).ln()) / T::PI()
            }
            LineKernel::Gauss { sigma } => gauss_ramp(x, *sigma),
            LineKernel::Mixture { sigma, weight } => {
                sigma.iter().zip(weight).fold(T::zero(), |s, (&sg, &w)| s + w * gauss_ramp(x, sg))
            }
        }
    }

    /// Convolution weights W(kh + shift), k = −m..=m, of the kernel against
    /// the hat function of half-width h: W = K * hat_h. Returned as a vector
    /// indexed by k + m.
    pub fn hat_weights(&self, h: T, m: usize, shift: T) -> Vec<T> {
        let ramps: Vec<T> = (0..2 * m + 3)
            .map(|j| {
                let k = T::from_usize_exact(j) - T::from_usize_exact(m + 1);
                self.ramp(k * h + shift)
            })
            .collect();
        let mass = self.mass();
        let two = lit::<T>(2.0);
        (0..2 * m + 1)
            .map(|j| {
                let k = T::from_usize_exact(j) - T::from_usize_exact(m);
                let z = k * h + shift;
                let hat = (T::one() - z.abs() / h).max(T::zero());
                hat * mass + (ramps[j + 2] - two * ramps[j + 1] + ramps[j]) / h
            })
            .collect()
    }

    /// Single weight W(z) = (K * hat_h)(z).
    pub fn hat_weight(&self, h: T, z: T) -> T {
        let hat = (T::one() - z.abs() / h).max(T::zero());
        hat * self.mass() + (self.ramp(z + h) - lit::<T>(2.0) * self.ramp(z) + self.ramp(z - h)) / h
    }
}

fn gauss_density<T: Real>(x: T, sigma: T) -> T {
    let z = x / sigma;
    (-(z * z) / lit(2.0)).exp() / (sigma * (lit::<T>(2.0) * T::PI()).sqrt())
}

fn gauss_tail<T: Real>(x: T, sigma: T) -> T {
    (x / (sigma * T::SQRT_2())).erfc() / lit(2.0)
}

/// σφ(x/σ) − x·Q(x/σ) for x ≥ 0, Q the standard normal tail.
fn gauss_ramp<T: Real>(x: T, sigma: T) -> T {
    sigma * gauss_density(x, sigma) * sigma - x * gauss_tail(x, sigma)
}

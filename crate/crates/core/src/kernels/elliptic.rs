use super::{EllipticParams, Regime};
use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, QuadratureSpec};
use crate::scalar::{gamma_half, lit, Real};

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::invalid("t", "time must be positive and finite"));
    }
    Ok(())
}

/// φ̂_{a,b}(ξ, t) = exp(−t·s(|ξ|)), with the a = 0 case exp(−(t/b)(2π|ξ|)²).
pub fn elliptic_multiplier<T: Real>(params: &EllipticParams<T>, t: T, xi_norm: T) -> Result<T> {
    params.validate()?;
    check_time(t)?;
    Ok((-t * params.exponent(xi_norm.abs())).exp())
}

/// Density w(λ) of the mixing measure μ_{a,b,t} in
/// φ_{a,b}(x, t) = ∫₀^∞ λ^{−d/2} e^{−π|x|²/λ} w(λ) dλ.
///
/// Evaluated as (t/√a)·λ^{−3/2}·exp(−(λb − 4πt)²/(16πaλ)), which equals
/// e^{tb/2a}(t/√a)e^{−λb²/16πa}e^{−πt²/aλ}λ^{−3/2} without the overflowing factor.
pub fn schoenberg_density<T: Real>(params: &EllipticParams<T>, t: T, lambda: T) -> Result<T> {
    params.validate()?;
    if params.a == T::zero() {
        return Err(Error::invalid("a", "the mixing density needs a > 0; a = 0 is the Gauss kernel"));
    }
    check_time(t)?;
    if !(lambda > T::zero()) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    let log = LogIntegrand::new(params, t, T::zero(), 3);
    Ok(log.at_lambda(lambda))
}

/// Log of the Schoenberg integrand λ^{−κ}·exp(−(λb−4πt)²/(16πaλ) − πr²/λ)·(t/√a)
/// in the variable s = ln λ. Concave in s.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogIntegrand<T> {
    a: T,
    b: T,
    t: T,
    r2: T,
    /// Power of λ^{-1/2} after the dλ = λ ds Jacobian is or is not included.
    kappa: T,
    ln_pref: T,
}

impl<T: Real> LogIntegrand<T> {
    /// `half_power` is the total exponent of λ^{−1/2}: 3 for the bare density,
    /// d + 1 for the kernel integrand in s (density·λ^{−d/2}·λ).
    pub(crate) fn new(params: &EllipticParams<T>, t: T, r: T, half_power: usize) -> Self {
        Self {
            a: params.a,
            b: params.b,
            t,
            r2: r * r,
            kappa: T::from_usize_exact(half_power) / lit(2.0),
            ln_pref: (t / params.a.sqrt()).ln(),
        }
    }

    pub(crate) fn at_s(&self, s: T) -> T {
        self.at_offset(s, T::zero())
    }

    /// L(s₀ + v). For b > 0 the factor λb − 4πt is formed as 4πt·expm1(s − s_c),
    /// s_c = ln(4πt/b), so that rounding near the peak is smooth in v.
    pub(crate) fn at_offset(&self, s0: T, v: T) -> T {
        let four_pi_t = lit::<T>(4.0) * T::PI() * self.t;
        let s = s0 + v;
        let lambda = s.exp();
        let q = if self.b > T::zero() {
            let sc = (four_pi_t / self.b).ln();
            four_pi_t * ((s0 - sc) + v).exp_m1()
        } else {
            -four_pi_t
        };
        self.ln_pref
            - self.kappa * s
            - q * q / (lit::<T>(16.0) * T::PI() * self.a * lambda)
            - T::PI() * self.r2 / lambda
    }

    pub(crate) fn at_lambda(&self, lambda: T) -> T {
        self.at_s(lambda.ln()).exp()
    }

    /// (s*, σ): maximizer of the log integrand and its curvature width.
    pub(crate) fn peak(&self) -> (T, T) {
        let pi = T::PI();
        let a_coef = self.b * self.b / (lit::<T>(16.0) * pi * self.a);
        let c_coef = pi * self.t * self.t / self.a + pi * self.r2;
        let k = self.kappa;
        let lambda = lit::<T>(2.0) * c_coef / (k + (k * k + lit::<T>(4.0) * a_coef * c_coef).sqrt());
        let curvature = a_coef * lambda + c_coef / lambda;
        (lambda.ln(), T::one() / curvature.sqrt())
    }

    /// ∫ exp(L(s)) ds over ℝ, split at the peak into two half-lines.
    pub(crate) fn integrate(&self) -> Result<T> {
        let (s0, width) = self.peak();
        let l0 = self.at_s(s0);
        if l0 < lit(-745.0) {
            return Ok(T::zero());
        }
        let spec = QuadratureSpec::default()
            .with_tolerances(lit::<T>(1e-15).max(T::epsilon() * lit(8.0)) * width, lit::<T>(1e-11).max(T::epsilon() * lit(64.0)))
            .with_radius(width);
        let right = integrate_adaptive(|v| (self.at_offset(s0, v) - l0).exp(), T::zero(), T::infinity(), &spec)?;
        let left = integrate_adaptive(|v| (self.at_offset(s0, -v) - l0).exp(), T::zero(), T::infinity(), &spec)?;
        Ok(l0.exp() * (left + right))
    }
}

/// φ_{a,b}(x, t) at |x| = `x_norm`.
///
/// b = 0 is the Poisson kernel at time t/√a, a = 0 the Gauss kernel at time
/// t/b; otherwise the Schoenberg integral is evaluated by adaptive quadrature.
pub fn elliptic_kernel<T: Real>(params: &EllipticParams<T>, t: T, x_norm: T) -> Result<T> {
    params.validate()?;
    check_time(t)?;
    let r = x_norm.abs();
    let d = params.d;
    match params.regime() {
        Regime::Poisson => Ok(poisson_closed_form(d, t / params.a.sqrt(), r)),
        Regime::Heat => Ok(heat_closed_form(d, t / params.b, r)),
        Regime::Mixed => LogIntegrand::new(params, t, r, d + 1).integrate(),
    }
}

/// The Schoenberg quadrature path regardless of regime; needs a > 0.
pub fn elliptic_kernel_schoenberg<T: Real>(params: &EllipticParams<T>, t: T, x_norm: T) -> Result<T> {
    params.validate()?;
    if params.a == T::zero() {
        return Err(Error::invalid("a", "the Schoenberg representation needs a > 0"));
    }
    check_time(t)?;
    LogIntegrand::new(params, t, x_norm.abs(), params.d + 1).integrate()
}

/// Γ((d+1)/2) π^{−(d+1)/2} τ / (r² + τ²)^{(d+1)/2}.
pub(crate) fn poisson_closed_form<T: Real>(d: usize, tau: T, r: T) -> T {
    let half = T::from_usize_exact(d + 1) / lit(2.0);
    let c = gamma_half::<T>(d + 1) / T::PI().powf(half);
    c * tau / (r * r + tau * tau).powf(half)
}

/// (4πs)^{−d/2} e^{−r²/4s}.
pub(crate) fn heat_closed_form<T: Real>(d: usize, s: T, r: T) -> T {
    let four = lit::<T>(4.0);
    (four * T::PI() * s).powf(-T::from_usize_exact(d) / lit(2.0)) * (-r * r / (four * s)).exp()
}

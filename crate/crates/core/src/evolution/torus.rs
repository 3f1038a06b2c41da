use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::Propagator;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::kernels::EllipticParams;
use crate::numerics::Dft;
use crate::scalar::{lit, Real};

/// How the samples on 𝕋 are extended to a function before evolving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TorusInterpolation {
    /// The trigonometric interpolant; exact for trigonometric polynomials.
    #[default]
    Trigonometric,
    /// The periodic piecewise-linear interpolant. Its Fourier coefficients
    /// are the DFT coefficients times sinc²(πk/n), with every alias k + qn
    /// evolving under its own multiplier.
    PiecewiseLinear,
}

/// Fourier-multiplier evolution on 𝕋 = ℝ/ℤ.
pub struct TorusPropagator<T: Real> {
    params: EllipticParams<T>,
    n: usize,
    interpolation: TorusInterpolation,
    inverse: Arc<dyn Fft<T>>,
    forward: Arc<dyn Fft<T>>,
    /// cos and sin of 2πm/n.
    twiddle: Vec<(T, T)>,
}

impl<T: Real> TorusPropagator<T> {
    pub fn new(domain: &Domain<T>, params: EllipticParams<T>, interpolation: TorusInterpolation) -> Result<Self> {
        domain.validate()?;
        params.validate()?;
        let Domain::Torus { n } = *domain else {
            return Err(Error::IncompatibleDomain { kernel: "torus multiplier".into(), domain: domain.name() });
        };
        if params.d != 1 {
            return Err(Error::invalid("d", "torus evolutions are implemented on 𝕋¹"));
        }
        let mut planner = FftPlanner::new();
        let two_pi = lit::<T>(2.0) * T::PI();
        let twiddle = (0..n)
            .map(|m| {
                let a = two_pi * T::from_usize_exact(m) / T::from_usize_exact(n);
                (a.cos(), a.sin())
            })
            .collect();
        Ok(Self {
            params,
            n,
            interpolation,
            inverse: planner.plan_fft_inverse(n),
            forward: planner.plan_fft_forward(n),
            twiddle,
        })
    }

    /// Frequency of FFT slot r in −⌊n/2⌋..⌈n/2⌉−1.
    fn frequency(&self, r: usize) -> i64 {
        let n = self.n;
        if r < n.div_ceil(2) {
            r as i64
        } else {
            r as i64 - n as i64
        }
    }

    fn multiplier(&self, t: T, k: i64) -> T {
        (-t * self.params.exponent(T::from_i64(k.abs()).unwrap())).exp()
    }

    /// Evolution symbol of FFT slot r.
    fn symbol(&self, t: T, r: usize) -> T {
        let k = self.frequency(r);
        match self.interpolation {
            TorusInterpolation::Trigonometric => self.multiplier(t, k),
            TorusInterpolation::PiecewiseLinear => {
                if k == 0 {
                    return T::one();
                }
                let n = self.n as i64;
                let x = T::from_i64(k).unwrap() / T::from_i64(n).unwrap();
                let sin2 = (T::PI() * x).sin().powi(2);
                let sinc2 = |q: i64| {
                    let y = T::PI() * (x + T::from_i64(q).unwrap());
                    sin2 / (y * y)
                };
                let cutoff = lit::<T>(1e-18);
                let mut sum = sinc2(0) * self.multiplier(t, k);
                for dir in [1i64, -1] {
                    let mut q = dir;
                    loop {
                        let m = self.multiplier(t, k + q * n);
                        sum = sum + sinc2(q) * m;
                        if m < cutoff || q.abs() > 1_000_000 {
                            break;
                        }
                        q += dir;
                    }
                }
                sum
            }
        }
    }
}

impl<T: Real> Propagator<T> for TorusPropagator<T> {
    /// DFT coefficients (normalized by 1/n) in FFT order.
    type Prepared = Vec<Complex<T>>;
    /// Symbol per FFT slot.
    type Table = Vec<T>;

    fn len(&self) -> usize {
        self.n
    }

    fn prepare(&self, u0: &[T]) -> Result<Vec<Complex<T>>> {
        if u0.len() != self.n {
            return Err(Error::invalid("u0", format!("expected {} samples, got {}", self.n, u0.len())));
        }
        let mut buf: Vec<Complex<T>> = u0.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        let scale = T::one() / T::from_usize_exact(self.n);
        Ok(buf.into_iter().map(|c| c * scale).collect())
    }

    fn table(&self, t: T) -> Result<Vec<T>> {
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::invalid("t", "time must be positive and finite"));
        }
        Ok((0..self.n).map(|r| self.symbol(t, r)).collect())
    }

    fn apply_all(&self, table: &Vec<T>, prep: &Vec<Complex<T>>, out: &mut [Vec<T>]) {
        let mut buf: Vec<Complex<T>> = prep.iter().zip(table).map(|(&c, &a)| c * a).collect();
        self.inverse.process(&mut buf);
        let o = &mut out[0];
        o.clear();
        o.extend(buf.iter().map(|c| c.re));
    }

    fn apply_at(&self, prep: &Vec<Complex<T>>, _channel: usize, i: usize, t: T) -> Result<T> {
        let mut s = T::zero();
        for (r, c) in prep.iter().enumerate() {
            let a = self.symbol(t, r);
            let (cs, sn) = self.twiddle[(r * i) % self.n];
            s = s + a * (c.re * cs - c.im * sn);
        }
        Ok(s)
    }

    fn limit(&self, prep: &Vec<Complex<T>>) -> T {
        prep[0].re
    }
}

/// Ψ_{a,b}(·, t) * |u₀| on 𝕋: DFT, multiply mode k by φ̂(|k|, t), inverse DFT.
pub fn evolve_torus<T: Real>(u0: &GridFunction<T>, params: &EllipticParams<T>, t: T) -> Result<GridFunction<T>> {
    params.validate()?;
    let Domain::Torus { n } = *u0.domain() else {
        return Err(Error::IncompatibleDomain { kernel: "torus multiplier".into(), domain: u0.domain().name() });
    };
    if params.d != 1 {
        return Err(Error::invalid("d", "torus evolutions are implemented on 𝕋¹"));
    }
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::invalid("t", "time must be positive and finite"));
    }
    let dft = Dft::new(n)?;
    let abs: Vec<T> = u0.values().iter().map(|v| v.abs()).collect();
    let mut c = dft.forward(&abs)?;
    c.apply(|k| (-t * params.exponent(T::from_i64(k.abs()).unwrap())).exp());
    u0.with_values(dft.inverse(&c)?)
}

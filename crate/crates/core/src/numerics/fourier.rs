//! Discrete Fourier transform with centered frequency indexing.
//!
//! Coefficients are normalized so that c_k = (1/n) Σ_j v_j e^{−2πijk/n}; a
//! constant vector maps to its value at k = 0.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fourier coefficients for frequencies −⌊n/2⌋, …, ⌈n/2⌉−1, in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FourierCoefficients<T> {
    pub fn from_centered(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_frequency(&self) -> i64 {
        -((self.coeffs.len() / 2) as i64)
    }

    pub fn max_frequency(&self) -> i64 {
        self.min_frequency() + self.coeffs.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> Option<Complex<T>> {
        let idx = k - self.min_frequency();
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize).copied()
    }

    /// `(frequency, coefficient)` pairs in ascending frequency.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        let k0 = self.min_frequency();
        self.coeffs.iter().enumerate().map(move |(i, &c)| (k0 + i as i64, c))
    }

    /// Multiplies coefficient k by `m(k)`.
    pub fn apply(&mut self, m: impl Fn(i64) -> T) {
        let k0 = self.min_frequency();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            *c = *c * m(k0 + i as i64);
        }
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.coeffs
    }
}

/// Planned forward and inverse transforms of a fixed length, reusable across calls.
pub struct Dft<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> Dft<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut planner = FftPlanner::new();
        Ok(Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, values: &[T]) -> Result<FourierCoefficients<T>> {
        if values.len() != self.n {
            return Err(Error::invalid("values", format!("expected length {}, got {}", self.n, values.len())));
        }
        let mut buf: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward.process(&mut buf);
        let scale = T::one() / T::from_usize_exact(self.n);
        // FFT order is 0, 1, …, ⌈n/2⌉−1, −⌊n/2⌋, …, −1; rotate to centered order.
        let split = self.n.div_ceil(2);
        let coeffs = buf[split..].iter().chain(buf[..split].iter()).map(|&c| c * scale).collect();
        Ok(FourierCoefficients { coeffs })
    }

    /// Real part of the synthesized signal.
    pub fn inverse(&self, coeffs: &FourierCoefficients<T>) -> Result<Vec<T>> {
        if coeffs.len() != self.n {
            return Err(Error::invalid("coeffs", format!("expected length {}, got {}", self.n, coeffs.len())));
        }
        let half = self.n / 2;
        let mut buf: Vec<Complex<T>> =
            coeffs.coeffs[half..].iter().chain(coeffs.coeffs[..half].iter()).copied().collect();
        self.inverse.process(&mut buf);
        Ok(buf.into_iter().map(|c| c.re).collect())
    }
}

pub fn dft_forward<T: Real>(values: &[T]) -> Result<FourierCoefficients<T>> {
    Dft::new(values.len())?.forward(values)
}

pub fn dft_inverse<T: Real>(coeffs: &FourierCoefficients<T>) -> Result<Vec<T>> {
    Dft::new(coeffs.len())?.inverse(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_maps_to_zero_mode() {
        let c = dft_forward(&[2.5f64; 7]).unwrap();
        assert_eq!(c.min_frequency(), -3);
        assert_eq!(c.max_frequency(), 3);
        for (k, z) in c.iter() {
            let want = if k == 0 { 2.5 } else { 0.0 };
            assert!((z.re - want).abs() < 1e-14 && z.im.abs() < 1e-14, "k={k} {z}");
        }
    }

    #[test]
    fn single_cosine_splits_between_plus_and_minus_one() {
        let n = 16;
        let v: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect();
        let c = dft_forward(&v).unwrap();
        assert_eq!(c.min_frequency(), -8);
        assert_eq!(c.max_frequency(), 7);
        for (k, z) in c.iter() {
            let want = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert!((z.re - want).abs() < 1e-14 && z.im.abs() < 1e-14, "k={k} {z}");
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(dft_forward::<f64>(&[]).unwrap_err(), Error::EmptyInput);
        assert!(FourierCoefficients::<f64>::from_centered(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_identity(seed in any::<u64>(), n in 1usize..200) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let back = dft_inverse(&dft_forward(&v).unwrap()).unwrap();
            let scale = v.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
            for (a, b) in v.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
    }
}

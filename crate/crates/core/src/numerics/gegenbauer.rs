use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Gegenbauer polynomials C_n^λ, degrees 0..=`degree_cap`.
///
/// Evaluated by the three-term recurrence
/// n·C_n = 2x(n+λ−1)·C_{n−1} − (n+2λ−2)·C_{n−2}, C_0 = 1, C_1 = 2λx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerEval<T> {
    pub order_lambda: T,
    pub degree_cap: usize,
}

impl<T: Real> GegenbauerEval<T> {
    pub fn new(order_lambda: T, degree_cap: usize) -> Result<Self> {
        if !(order_lambda > T::zero() && order_lambda.is_finite()) {
            return Err(Error::invalid("order_lambda", "must be positive"));
        }
        Ok(Self { order_lambda, degree_cap })
    }

    /// The order λ = (d−1)/2 attached to the sphere S^d.
    pub fn for_sphere(d: usize, degree_cap: usize) -> Result<Self> {
        Self::new(T::from_usize_exact(d.saturating_sub(1)) / lit(2.0), degree_cap)
    }

    pub fn eval(&self, n: usize, x: T) -> Result<T> {
        if n > self.degree_cap {
            return Err(Error::DegreeOutOfRange { degree: n, cap: self.degree_cap });
        }
        check_unit(x)?;
        Ok(*self.recur(n, x).last().unwrap())
    }

    /// C_0^λ(x), …, C_N^λ(x) with N = `degree_cap`.
    pub fn eval_all(&self, x: T) -> Result<Vec<T>> {
        check_unit(x)?;
        Ok(self.recur(self.degree_cap, x))
    }

    /// C_n^λ(1) = Γ(n+2λ) / (Γ(2λ)·n!), as a running product.
    pub fn at_one(&self, n: usize) -> T {
        let two_lambda = self.order_lambda * lit(2.0);
        (0..n).fold(T::one(), |acc, k| {
            let k = T::from_usize_exact(k);
            acc * (two_lambda + k) / (k + T::one())
        })
    }

    fn recur(&self, n_max: usize, x: T) -> Vec<T> {
        let lambda = self.order_lambda;
        let two = lit::<T>(2.0);
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(T::one());
        if n_max >= 1 {
            out.push(two * lambda * x);
        }
        for n in 2..=n_max {
            let nf = T::from_usize_exact(n);
            let next = (two * x * (nf + lambda - T::one()) * out[n - 1] - (nf + two * lambda - two) * out[n - 2]) / nf;
            out.push(next);
        }
        out
    }
}

fn check_unit<T: Real>(x: T) -> Result<()> {
    if x.abs() > T::one() || x.is_nan() {
        return Err(Error::OutsideUnitInterval { value: x.to_f64_lossy() });
    }
    Ok(())
}

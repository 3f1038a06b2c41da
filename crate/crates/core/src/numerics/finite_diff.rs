use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::scalar::{lit, Real};

/// (f_{i+1} − 2f_i + f_{i−1}) / h² on a uniform grid, 1 ≤ i ≤ n−2.
pub fn second_difference<T: Real>(f: &GridFunction<T>, i: usize) -> Result<T> {
    let h = f.spacing().ok_or(Error::NonUniformGrid { domain: f.domain().name() })?;
    let n = f.len();
    if i == 0 || i + 1 >= n {
        return Err(Error::NotInterior { index: i, len: n });
    }
    let v = f.values();
    Ok((v[i + 1] - lit::<T>(2.0) * v[i] + v[i - 1]) / (h * h))
}

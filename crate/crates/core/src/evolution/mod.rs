//! u(·, t) = kernel(·, t) * |u₀| on the line, the circle and the zonal sphere.
//!
//! The [`Propagator`] trait splits every evolution into a data-independent
//! table per time (weights, symbols or multipliers) and a per-datum
//! preparation, so one table serves many data.

mod line;
mod sphere;
mod torus;

pub use line::{evolve_line, poisson_halfplane, LineFamily, LinePropagator};
pub use sphere::{evolve_zonal_sphere, zonal_interpolant, SphereFamily, ZonalPropagator, ZONAL_DEGREE_CAP};
pub use torus::{evolve_torus, TorusInterpolation, TorusPropagator};

use crate::error::Result;
use crate::scalar::Real;

/// A linear evolution u₀ ↦ u(·, t) on a fixed grid.
///
/// A propagator may expose several *channels*: evaluation rays sharing one
/// datum, such as the two edges of a cone. Channel values are indexed by
/// `[channel][point]`.
pub trait Propagator<T: Real>: Send + Sync {
    /// Data-dependent precomputation (support, transforms, coefficients).
    type Prepared;
    /// Data-independent state for one time.
    type Table;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn channels(&self) -> usize {
        1
    }

    /// `u0` is taken as given; callers pass |u₀|.
    fn prepare(&self, u0: &[T]) -> Result<Self::Prepared>;

    fn table(&self, t: T) -> Result<Self::Table>;

    /// Fills `out[channel][i]` with u at every grid point.
    fn apply_all(&self, table: &Self::Table, prep: &Self::Prepared, out: &mut [Vec<T>]);

    /// u at one grid point and one time, without a cached table.
    fn apply_at(&self, prep: &Self::Prepared, channel: usize, i: usize, t: T) -> Result<T>;

    /// lim_{t→∞} u(x, t), the same at every point.
    fn limit(&self, prep: &Self::Prepared) -> T;
}

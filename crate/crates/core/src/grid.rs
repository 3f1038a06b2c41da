//! Sampled data: the spatial grids a datum lives on and the time grid that
//! discretizes the supremum parameter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::scalar::{lit, Real};

/// Where the samples of a [`GridFunction`] sit.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain<T> {
    /// `n` equispaced nodes on `[x_min, x_max]`; the datum is zero outside.
    Line { x_min: T, x_max: T, n: usize },
    /// `n` equispaced nodes `j/n` on the unit circle ℝ/ℤ.
    Torus { n: usize },
    /// Zonal data on S^d: `n` colatitudes θ_i = arccos(x_i), with x_i the
    /// Gauss–Legendre nodes, listed by increasing θ.
    ZonalSphere { n: usize, d: usize },
}

impl<T: Real> Domain<T> {
    pub fn len(&self) -> usize {
        match *self {
            Domain::Line { n, .. } | Domain::Torus { n } | Domain::ZonalSphere { n, .. } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Line { .. } => "line",
            Domain::Torus { .. } => "torus",
            Domain::ZonalSphere { .. } => "zonal-sphere",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n < 3 {
            return Err(Error::invalid("n", format!("grid needs at least 3 points, got {n}")));
        }
        match *self {
            Domain::Line { x_min, x_max, .. } => {
                if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
                    return Err(Error::invalid("x_min/x_max", "need finite x_min < x_max"));
                }
            }
            Domain::ZonalSphere { d, .. } => {
                if d < 1 {
                    return Err(Error::invalid("d", "sphere dimension must be at least 1"));
                }
            }
            Domain::Torus { .. } => {}
        }
        Ok(())
    }

    /// Node spacing for the uniform grids; `None` on the sphere.
    pub fn spacing(&self) -> Option<T> {
        match *self {
            Domain::Line { x_min, x_max, n } => Some((x_max - x_min) / T::from_usize_exact(n - 1)),
            Domain::Torus { n } => Some(T::one() / T::from_usize_exact(n)),
            Domain::ZonalSphere { .. } => None,
        }
    }

    /// Node coordinates: x on the line and torus, colatitude θ on the sphere.
    pub fn nodes(&self) -> Vec<T> {
        match *self {
            Domain::Line { x_min, n, .. } => {
                let h = self.spacing().unwrap();
                (0..n).map(|j| x_min + h * T::from_usize_exact(j)).collect()
            }
            Domain::Torus { n } => {
                let h = self.spacing().unwrap();
                (0..n).map(|j| h * T::from_usize_exact(j)).collect()
            }
            Domain::ZonalSphere { n, .. } => {
                // Gauss–Legendre nodes come out ascending in x = cos θ, i.e. descending in θ.
                let (x, _) = gauss_legendre::<T>(n);
                x.iter().rev().map(|&c| c.acos()).collect()
            }
        }
    }

    /// Length of the domain in its own coordinate: the interval, the circle, or π.
    pub fn length(&self) -> T {
        match *self {
            Domain::Line { x_min, x_max, .. } => x_max - x_min,
            Domain::Torus { .. } => T::one(),
            Domain::ZonalSphere { .. } => T::PI(),
        }
    }

    /// Typical node gap, used to scale default time grids.
    pub fn typical_spacing(&self) -> T {
        self.spacing().unwrap_or_else(|| T::PI() / T::from_usize_exact(self.len()))
    }
}

/// A real-valued datum or result sampled on a [`Domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    domain: Domain<T>,
    values: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(domain: Domain<T>, values: Vec<T>) -> Result<Self> {
        domain.validate()?;
        if values.len() != domain.len() {
            return Err(Error::invalid(
                "values",
                format!("expected {} samples, got {}", domain.len(), values.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("sample {i} is not finite")));
        }
        Ok(Self { domain, values })
    }

    /// Samples `f` at the nodes of `domain`.
    pub fn from_fn(domain: Domain<T>, f: impl Fn(T) -> T) -> Result<Self> {
        domain.validate()?;
        let values = domain.nodes().into_iter().map(f).collect();
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn nodes(&self) -> Vec<T> {
        self.domain.nodes()
    }

    pub fn spacing(&self) -> Option<T> {
        self.domain.spacing()
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { domain: self.domain.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Same domain, new samples.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(self.domain.clone(), values)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

/// Log-spaced nodes discretizing the supremum over t > 0 (or over τ = −ln ρ
/// for the spherical Poisson extension).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid<T> {
    pub t_min: T,
    pub t_max: T,
    pub n_t: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_min: T, t_max: T, n_t: usize) -> Result<Self> {
        let grid = Self { t_min, t_max, n_t };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > T::zero() && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(Error::invalid("time grid", "need 0 < t_min < t_max < ∞"));
        }
        if self.n_t < 2 {
            return Err(Error::invalid("n_t", "need at least two time nodes"));
        }
        Ok(())
    }

    /// Default grid: t_min = h/10 and t_max = 10·L with 200 nodes. For
    /// parabolic kernels (`diffusive`) both ends are squared, since the time
    /// of the heat flow scales like length².
    pub fn default_for(domain: &Domain<T>, diffusive: bool) -> Self {
        let lo = domain.typical_spacing() / lit(10.0);
        let hi = domain.length() * lit(10.0);
        let (t_min, t_max) = if diffusive { (lo * lo, hi * hi) } else { (lo, hi) };
        Self { t_min, t_max, n_t: 200 }
    }

    pub fn nodes(&self) -> Vec<T> {
        let (a, b) = (self.t_min.ln(), self.t_max.ln());
        let last = T::from_usize_exact(self.n_t - 1);
        (0..self.n_t)
            .map(|k| {
                if k + 1 == self.n_t {
                    self.t_max
                } else {
                    (a + (b - a) * T::from_usize_exact(k) / last).exp()
                }
            })
            .collect()
    }

    /// Logarithmic step between consecutive nodes.
    pub fn log_step(&self) -> T {
        (self.t_max / self.t_min).ln() / T::from_usize_exact(self.n_t - 1)
    }

    /// The grid with every gap bisected; contains all original nodes.
    pub fn refined(&self) -> Self {
        Self { n_t: 2 * self.n_t - 1, ..*self }
    }
}

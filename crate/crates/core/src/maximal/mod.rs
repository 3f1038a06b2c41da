//! Maximal functions u*(x) = sup_t u(x, t) on a time grid, and the
//! detachment set A = {u* > |u₀|}.
//!
//! The supremum always includes two limit candidates that no finite grid
//! reaches: the datum itself (t → 0) and the large-time limit (t → ∞).

mod plan;

pub use plan::MaximalPlan;

use crate::error::{Error, Result};
use crate::evolution::{
    LineFamily, LinePropagator, SphereFamily, TorusInterpolation, TorusPropagator, ZonalPropagator,
};
use crate::grid::{Domain, GridFunction, TimeGrid};
use crate::kernels::{EllipticParams, KernelSpec};
use crate::scalar::{lit, Real};

/// Where the supremum at a point is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgSup<T> {
    /// The datum, i.e. t → 0⁺.
    Datum,
    /// A finite time (for the spherical Poisson extension, τ = −ln ρ).
    Finite(T),
    /// The t → ∞ limit.
    Limit,
}

impl<T: Real> ArgSup<T> {
    /// The time as a number: 0 for the datum, ∞ for the limit.
    pub fn time(&self) -> T {
        match *self {
            ArgSup::Datum => T::zero(),
            ArgSup::Finite(t) => t,
            ArgSup::Limit => T::infinity(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalOptions<T> {
    /// A point is detached when u* − |u₀| > detach_tol·(1 + |u₀|).
    pub detach_tol: T,
    /// Refine grid maxima by a local polynomial in log t.
    pub refine: bool,
    /// Relative margin below the best grid value within which other local
    /// maxima are refined too.
    pub margin: T,
    pub max_candidates: usize,
    /// Cone points per side for the non-tangential operator.
    pub y_res: usize,
    pub torus_interpolation: TorusInterpolation,
}

impl<T: Real> Default for MaximalOptions<T> {
    fn default() -> Self {
        Self {
            detach_tol: lit(1e-9),
            refine: true,
            margin: lit(2e-3),
            max_candidates: 3,
            y_res: 16,
            torus_interpolation: TorusInterpolation::Trigonometric,
        }
    }
}

impl<T: Real> MaximalOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.detach_tol > T::zero() && self.detach_tol.is_finite()) {
            return Err(Error::invalid("detach_tol", "must be positive and finite"));
        }
        if !(self.margin >= T::zero()) {
            return Err(Error::invalid("margin", "must be ≥ 0"));
        }
        if self.y_res < 1 {
            return Err(Error::invalid("y_res", "need at least one cone point per side"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalResult<T> {
    /// The datum actually evolved, |u₀|.
    pub u0: GridFunction<T>,
    pub u_star: GridFunction<T>,
    pub arg_sup: Vec<ArgSup<T>>,
    pub detachment_mask: Vec<bool>,
    /// Inclusive index runs of the mask; on the torus a run that wraps has
    /// start > end.
    pub components: Vec<(usize, usize)>,
    pub detach_tol: T,
}

impl<T: Real> MaximalResult<T> {
    /// Indices of a component in order, following the wrap on the torus.
    pub fn component_indices(&self, (start, end): (usize, usize)) -> Vec<usize> {
        let n = self.u_star.len();
        if start <= end {
            (start..=end).collect()
        } else {
            (start..n).chain(0..=end).collect()
        }
    }
}

fn detachment_mask<T: Real>(u0: &[T], u_star: &[T], tol: T) -> Vec<bool> {
    u0.iter().zip(u_star).map(|(&a, &s)| s - a > tol * (T::one() + a.abs())).collect()
}

/// Maximal runs of `true`; with `cyclic`, a run through the last index
/// continues at index 0.
fn components_of(mask: &[bool], cyclic: bool) -> Vec<(usize, usize)> {
    let n = mask.len();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < n {
        if mask[i] {
            let start = i;
            while i + 1 < n && mask[i + 1] {
                i += 1;
            }
            runs.push((start, i));
        }
        i += 1;
    }
    if cyclic && runs.len() > 1 {
        let (first, last) = (runs[0], runs[runs.len() - 1]);
        if first.0 == 0 && last.1 == n - 1 {
            runs.pop();
            runs[0] = (last.0, first.1);
        }
    }
    runs
}

/// The maximal runs of the detachment mask of `res`.
pub fn detachment_components<T: Real>(res: &MaximalResult<T>) -> Vec<(usize, usize)> {
    components_of(&res.detachment_mask, matches!(res.u0.domain(), Domain::Torus { .. }))
}

/// A maximal-function plan for any supported (domain, kernel) pair.
pub enum MaximalEngine<T: Real> {
    Line(MaximalPlan<T, LinePropagator<T>>),
    Torus(MaximalPlan<T, TorusPropagator<T>>),
    Zonal(MaximalPlan<T, ZonalPropagator<T>>),
}

impl<T: Real> MaximalEngine<T> {
    /// Elliptic kernels on the line and the torus, the non-tangential cone
    /// on the line, and the spherical Poisson or heat flow on zonal S².
    /// On the torus, `SphericalPoisson { d: 1 }` is the circle's Poisson
    /// extension with time rescaled to the (1, 0) family.
    pub fn new(domain: &Domain<T>, spec: &KernelSpec<T>, tg: &TimeGrid<T>, options: MaximalOptions<T>) -> Result<Self> {
        spec.validate()?;
        domain.validate()?;
        options.validate()?;
        let incompatible = || Error::IncompatibleDomain { kernel: spec.name(), domain: domain.name() };
        match (domain, spec) {
            (Domain::Line { .. }, KernelSpec::NonTangentialPoisson { aperture }) => {
                let prop = LinePropagator::new(domain, LineFamily::HalfPlanePoisson, cone_slopes(*aperture, options.y_res))?;
                Ok(MaximalEngine::Line(MaximalPlan::new(prop, *tg, options, false)?))
            }
            (Domain::Line { .. }, _) => {
                let prop = LinePropagator::new(domain, LineFamily::from_spec(spec)?, vec![T::zero()])?;
                Ok(MaximalEngine::Line(MaximalPlan::new(prop, *tg, options, false)?))
            }
            (Domain::Torus { .. }, KernelSpec::Elliptic(p)) => {
                let prop = TorusPropagator::new(domain, *p, options.torus_interpolation)?;
                Ok(MaximalEngine::Torus(MaximalPlan::new(prop, *tg, options, true)?))
            }
            (Domain::Torus { .. }, KernelSpec::SphericalPoisson { d: 1 }) => {
                let prop = TorusPropagator::new(domain, EllipticParams::poisson(1), options.torus_interpolation)?;
                Ok(MaximalEngine::Torus(MaximalPlan::new(prop, *tg, options, true)?))
            }
            (Domain::ZonalSphere { .. }, _) => {
                let family = SphereFamily::from_spec(spec)?;
                let prop = ZonalPropagator::new(domain, family, tg.t_min)?;
                Ok(MaximalEngine::Zonal(MaximalPlan::new(prop, *tg, options, false)?))
            }
            _ => Err(incompatible()),
        }
    }

    pub fn run(&self, u0: &GridFunction<T>) -> Result<MaximalResult<T>> {
        match self {
            MaximalEngine::Line(p) => p.run(u0),
            MaximalEngine::Torus(p) => p.run(u0),
            MaximalEngine::Zonal(p) => p.run(u0),
        }
    }
}

/// Channel slopes kα/y_res, k = −y_res..=y_res: the evaluation point
/// x + (kα/y_res)·t sweeps the cone |y − x| ≤ αt at every time.
fn cone_slopes<T: Real>(aperture: T, y_res: usize) -> Vec<T> {
    if aperture == T::zero() {
        return vec![T::zero()];
    }
    let r = y_res as i64;
    (-r..=r).map(|k| aperture * T::from_i64(k).unwrap() / T::from_usize_exact(y_res)).collect()
}

/// u*(x) = max(|u₀(x)|, sup over the grid times of (kernel_t * |u₀|)(x)).
pub fn maximal_centered<T: Real>(
    u0: &GridFunction<T>,
    spec: &KernelSpec<T>,
    tg: &TimeGrid<T>,
    detach_tol: T,
) -> Result<MaximalResult<T>> {
    let options = MaximalOptions { detach_tol, ..Default::default() };
    MaximalEngine::new(u0.domain(), spec, tg, options)?.run(u0)
}

/// u*(x) = sup over the discretized cone {(y, t) : |y − x| ≤ αt} of the
/// harmonic extension of |u₀|, with 2·y_res + 1 points across the cone.
pub fn maximal_nontangential<T: Real>(
    u0: &GridFunction<T>,
    aperture: T,
    tg: &TimeGrid<T>,
    y_res: usize,
    detach_tol: T,
) -> Result<MaximalResult<T>> {
    let options = MaximalOptions { detach_tol, y_res, ..Default::default() };
    MaximalEngine::new(u0.domain(), &KernelSpec::NonTangentialPoisson { aperture }, tg, options)?.run(u0)
}

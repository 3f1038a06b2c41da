use super::Propagator;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::kernels::{EllipticParams, KernelSpec, LineKernel};
use crate::scalar::Real;

/// Which one-dimensional kernel a [`LinePropagator`] convolves with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineFamily<T> {
    Elliptic(EllipticParams<T>),
    /// t/(π(x² + t²)), the harmonic extension to the upper half-plane.
    HalfPlanePoisson,
}

impl<T: Real> LineFamily<T> {
    pub fn from_spec(spec: &KernelSpec<T>) -> Result<Self> {
        spec.validate()?;
        match *spec {
            KernelSpec::Elliptic(p) if p.d == 1 => Ok(LineFamily::Elliptic(p)),
            KernelSpec::NonTangentialPoisson { .. } => Ok(LineFamily::HalfPlanePoisson),
            _ => Err(Error::IncompatibleDomain { kernel: spec.name(), domain: "line" }),
        }
    }

    pub fn kernel(&self, t: T) -> Result<LineKernel<T>> {
        match self {
            LineFamily::Elliptic(p) => LineKernel::new(p, t),
            LineFamily::HalfPlanePoisson => {
                if !(t > T::zero() && t.is_finite()) {
                    return Err(Error::invalid("t", "time must be positive and finite"));
                }
                Ok(LineKernel::poisson(t))
            }
        }
    }
}

/// Exact convolution of the piecewise-linear interpolant of the samples
/// (zero outside the grid, with the end hats reaching one spacing beyond it).
///
/// u(x_i + c·t, t) = Σ_j u_j W_t((i−j)h + c·t), where W_t = K_t * hat_h and
/// c runs over the channel slopes: `[0]` for the vertical ray, `[−α, α]`
/// for the edges of a cone of aperture α.
#[derive(Debug, Clone)]
pub struct LinePropagator<T> {
    family: LineFamily<T>,
    n: usize,
    h: T,
    slopes: Vec<T>,
}

/// Indices of the first and last nonzero sample, with the values.
#[derive(Debug, Clone)]
pub struct LineDatum<T> {
    values: Vec<T>,
    support: Option<(usize, usize)>,
}

impl<T: Real> LinePropagator<T> {
    pub fn new(domain: &Domain<T>, family: LineFamily<T>, slopes: Vec<T>) -> Result<Self> {
        domain.validate()?;
        let Domain::Line { n, .. } = *domain else {
            return Err(Error::IncompatibleDomain { kernel: "line convolution".into(), domain: domain.name() });
        };
        if slopes.is_empty() {
            return Err(Error::invalid("slopes", "need at least one channel"));
        }
        Ok(Self { family, n, h: domain.spacing().unwrap(), slopes })
    }

    pub fn spacing(&self) -> T {
        self.h
    }
}

impl<T: Real> Propagator<T> for LinePropagator<T> {
    type Prepared = LineDatum<T>;
    /// Per channel, W at offsets k = −(n−1)..=(n−1), indexed by k + n − 1.
    type Table = Vec<Vec<T>>;

    fn len(&self) -> usize {
        self.n
    }

    fn channels(&self) -> usize {
        self.slopes.len()
    }

    fn prepare(&self, u0: &[T]) -> Result<LineDatum<T>> {
        if u0.len() != self.n {
            return Err(Error::invalid("u0", format!("expected {} samples, got {}", self.n, u0.len())));
        }
        let first = u0.iter().position(|&v| v != T::zero());
        let last = u0.iter().rposition(|&v| v != T::zero());
        Ok(LineDatum { values: u0.to_vec(), support: first.zip(last) })
    }

    fn table(&self, t: T) -> Result<Vec<Vec<T>>> {
        let k = self.family.kernel(t)?;
        Ok(self.slopes.iter().map(|&c| k.hat_weights(self.h, self.n - 1, c * t)).collect())
    }

    fn apply_all(&self, table: &Vec<Vec<T>>, prep: &LineDatum<T>, out: &mut [Vec<T>]) {
        let n = self.n;
        for (w, o) in table.iter().zip(out.iter_mut()) {
            o.clear();
            o.resize(n, T::zero());
            let Some((lo, hi)) = prep.support else { continue };
            for (i, oi) in o.iter_mut().enumerate() {
                let mut s = T::zero();
                for j in lo..=hi {
                    s = s + prep.values[j] * w[i + n - 1 - j];
                }
                *oi = s;
            }
        }
    }

    fn apply_at(&self, prep: &LineDatum<T>, channel: usize, i: usize, t: T) -> Result<T> {
        let Some((lo, hi)) = prep.support else { return Ok(T::zero()) };
        let k = self.family.kernel(t)?;
        let shift = self.slopes[channel] * t;
        let h = self.h;
        // Ramp values at (i − j)h + shift + mh for j ∈ [lo, hi], m ∈ {−1, 0, 1}.
        let base = i as i64 - hi as i64 - 1;
        let count = hi - lo + 3;
        let ramps: Vec<T> = (0..count).map(|m| k.ramp(T::from_i64(base + m as i64).unwrap() * h + shift)).collect();
        let mass = k.mass();
        let two = T::one() + T::one();
        let mut s = T::zero();
        for j in lo..=hi {
            let v = prep.values[j];
            if v == T::zero() {
                continue;
            }
            // z = (i − j)h + shift sits at ramps index hi + 1 − j.
            let idx = hi + 1 - j;
            let z = T::from_i64(i as i64 - j as i64).unwrap() * h + shift;
            let hat = (T::one() - z.abs() / h).max(T::zero());
            let w = hat * mass + (ramps[idx + 1] - two * ramps[idx] + ramps[idx - 1]) / h;
            s = s + v * w;
        }
        Ok(s)
    }

    fn limit(&self, _prep: &LineDatum<T>) -> T {
        T::zero()
    }
}

/// u(·, t) = φ_{a,b}(·, t) * |u₀| on the grid of `u0`.
pub fn evolve_line<T: Real>(u0: &GridFunction<T>, spec: &KernelSpec<T>, t: T) -> Result<GridFunction<T>> {
    let family = LineFamily::from_spec(spec)?;
    let prop = LinePropagator::new(u0.domain(), family, vec![T::zero()])?;
    let abs: Vec<T> = u0.values().iter().map(|v| v.abs()).collect();
    let prep = prop.prepare(&abs)?;
    let table = prop.table(t)?;
    let mut out = vec![Vec::new()];
    prop.apply_all(&table, &prep, &mut out);
    u0.with_values(out.pop().unwrap())
}

/// The harmonic extension P(·, t) * |u₀| at the point (y, t).
pub fn poisson_halfplane<T: Real>(u0: &GridFunction<T>, y: T, t: T) -> Result<T> {
    let Domain::Line { x_min, .. } = *u0.domain() else {
        return Err(Error::IncompatibleDomain { kernel: "half-plane Poisson".into(), domain: u0.domain().name() });
    };
    if !y.is_finite() {
        return Err(Error::invalid("y", "must be finite"));
    }
    let k = LineFamily::<T>::HalfPlanePoisson.kernel(t)?;
    let h = u0.spacing().unwrap();
    let mut s = T::zero();
    for (j, v) in u0.values().iter().enumerate() {
        if *v != T::zero() {
            let xj = x_min + h * T::from_usize_exact(j);
            s = s + v.abs() * k.hat_weight(h, y - xj);
        }
    }
    Ok(s)
}

use std::collections::HashMap;

use super::Propagator;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::kernels::{heat_truncation, spherical_heat, spherical_poisson, KernelSpec};
use crate::numerics::{gauss_legendre, legendre_all};
use crate::scalar::{lit, Real};

/// Largest Legendre degree the spectral zonal engine will build.
pub const ZONAL_DEGREE_CAP: usize = 16_384;

/// Tail tolerance of the truncated heat series used by the direct quadrature.
const HEAT_TAIL_TOL: f64 = 1e-10;

/// Evolution family on S². For the Poisson extension the time variable is
/// τ = −ln ρ, so that ρ → 1 is τ → 0 and the centre of the ball is τ = ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereFamily {
    Poisson,
    Heat,
}

impl SphereFamily {
    pub fn from_spec<T: Real>(spec: &KernelSpec<T>) -> Result<Self> {
        spec.validate()?;
        match *spec {
            KernelSpec::SphericalPoisson { d: 2 } => Ok(SphereFamily::Poisson),
            KernelSpec::SphericalHeat { d: 2, .. } => Ok(SphereFamily::Heat),
            _ => Err(Error::IncompatibleDomain { kernel: spec.name(), domain: "zonal-sphere(d=2)" }),
        }
    }

    /// Multiplier of the degree-n zonal harmonic.
    fn multiplier<T: Real>(self, t: T, n: usize) -> T {
        let nf = T::from_usize_exact(n);
        match self {
            SphereFamily::Poisson => (-t * nf).exp(),
            SphereFamily::Heat => (-t * nf * (nf + T::one())).exp(),
        }
    }

    /// Degree beyond which every multiplier at times ≥ `t_min` is below ~1e-16.
    fn degree_for<T: Real>(self, t_min: T) -> T {
        let budget = lit::<T>(37.0);
        match self {
            SphereFamily::Poisson => (budget + (T::one() / t_min).ln().max(T::zero())) / t_min,
            SphereFamily::Heat => (budget / t_min).sqrt(),
        }
    }
}

/// The datum on S² as a function of colatitude: piecewise linear between
/// the grid colatitudes and constant on the two polar caps.
fn interpolate<T: Real>(theta: &[T], values: &[T], x: T) -> T {
    let n = theta.len();
    if x <= theta[0] {
        return values[0];
    }
    if x >= theta[n - 1] {
        return values[n - 1];
    }
    let k = theta.partition_point(|&th| th <= x) - 1;
    let w = (x - theta[k]) / (theta[k + 1] - theta[k]);
    values[k] * (T::one() - w) + values[k + 1] * w
}

/// Legendre-spectral evolution of zonal data on S².
///
/// The datum is the colatitude interpolant of [`interpolate`]; its Legendre
/// coefficients are exact linear functionals of the samples, tabulated once
/// per grid. Degrees are truncated where the multiplier at the smallest time
/// drops below round-off.
pub struct ZonalPropagator<T> {
    family: SphereFamily,
    n: usize,
    degree: usize,
    /// moments[j][ℓ] = (2ℓ+1)/2 ∫ hat_j(θ) P_ℓ(cos θ) sin θ dθ.
    moments: Vec<Vec<T>>,
    /// legendre[i][ℓ] = P_ℓ(cos θ_i).
    legendre: Vec<Vec<T>>,
}

impl<T: Real> ZonalPropagator<T> {
    pub fn new(domain: &Domain<T>, family: SphereFamily, t_min: T) -> Result<Self> {
        domain.validate()?;
        let Domain::ZonalSphere { n, d } = *domain else {
            return Err(Error::IncompatibleDomain { kernel: "zonal spectral".into(), domain: domain.name() });
        };
        if d != 2 {
            return Err(Error::invalid("d", "the spectral zonal engine works on S²"));
        }
        if !(t_min > T::zero() && t_min.is_finite()) {
            return Err(Error::invalid("t_min", "must be positive and finite"));
        }
        let want = family.degree_for(t_min);
        if want > T::from_usize_exact(ZONAL_DEGREE_CAP) {
            return Err(Error::invalid(
                "t_min",
                format!("needs Legendre degree above {ZONAL_DEGREE_CAP}; raise the smallest time"),
            ));
        }
        let degree = want.ceil().to_usize().unwrap().max(8);
        let theta = domain.nodes();
        let moments = hat_moments(&theta, degree);
        let legendre = theta.iter().map(|&th| legendre_all(degree, th.cos())).collect();
        Ok(Self { family, n, degree, moments, legendre })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn multipliers(&self, t: T) -> Vec<T> {
        let cutoff = lit::<T>(1e-18);
        let mut m = Vec::with_capacity(self.degree + 1);
        for l in 0..=self.degree {
            let v = self.family.multiplier(t, l);
            if v < cutoff {
                break;
            }
            m.push(v);
        }
        m
    }
}

fn hat_moments<T: Real>(theta: &[T], degree: usize) -> Vec<Vec<T>> {
    let n = theta.len();
    let mut h = vec![vec![T::zero(); degree + 1]; n];
    // Polar caps: ∫_{x₀}^{1} P_ℓ dx and ∫_{−1}^{x₁} P_ℓ dx in x = cos θ, via
    // (2ℓ+1)P_ℓ = (P_{ℓ+1} − P_{ℓ−1})'.
    let cap = |x: T, north: bool| -> Vec<T> {
        let p = legendre_all(degree + 1, x);
        (0..=degree)
            .map(|l| {
                let v = if l == 0 {
                    if north {
                        T::one() - x
                    } else {
                        x + T::one()
                    }
                } else {
                    let diff = (p[l + 1] - p[l - 1]) / T::from_usize_exact(2 * l + 1);
                    if north {
                        -diff
                    } else {
                        diff
                    }
                };
                v
            })
            .collect()
    };
    let north = cap(theta[0].cos(), true);
    let south = cap(theta[n - 1].cos(), false);
    for l in 0..=degree {
        h[0][l] = h[0][l] + north[l];
        h[n - 1][l] = h[n - 1][l] + south[l];
    }
    let mut rules: HashMap<usize, (Vec<T>, Vec<T>)> = HashMap::new();
    for k in 0..n - 1 {
        let (a, b) = (theta[k], theta[k + 1]);
        let width = b - a;
        let phase = T::from_usize_exact(degree + 1) * width / lit(2.0);
        let g = phase.ceil().to_usize().unwrap() + 16;
        let (xs, ws) = rules.entry(g).or_insert_with(|| gauss_legendre(g));
        let half = width / lit(2.0);
        let mid = (a + b) / lit(2.0);
        for (&xi, &wi) in xs.iter().zip(ws.iter()) {
            let th = mid + half * xi;
            let w = wi * half * th.sin();
            let right = (th - a) / width;
            let left = T::one() - right;
            let p = legendre_all(degree, th.cos());
            let (wl, wr) = (w * left, w * right);
            for (l, &pl) in p.iter().enumerate() {
                h[k][l] = h[k][l] + wl * pl;
                h[k + 1][l] = h[k + 1][l] + wr * pl;
            }
        }
    }
    for row in h.iter_mut() {
        for (l, v) in row.iter_mut().enumerate() {
            *v = *v * (T::from_usize_exact(2 * l + 1) / lit(2.0));
        }
    }
    h
}

impl<T: Real> Propagator<T> for ZonalPropagator<T> {
    /// Legendre coefficients c_ℓ with u₀ = Σ c_ℓ P_ℓ(cos θ).
    type Prepared = Vec<T>;
    /// Multipliers for degrees 0..len, truncated where they underflow.
    type Table = Vec<T>;

    fn len(&self) -> usize {
        self.n
    }

    fn prepare(&self, u0: &[T]) -> Result<Vec<T>> {
        if u0.len() != self.n {
            return Err(Error::invalid("u0", format!("expected {} samples, got {}", self.n, u0.len())));
        }
        let mut c = vec![T::zero(); self.degree + 1];
        for (row, &v) in self.moments.iter().zip(u0) {
            if v == T::zero() {
                continue;
            }
            for (cl, &m) in c.iter_mut().zip(row) {
                *cl = *cl + v * m;
            }
        }
        Ok(c)
    }

    fn table(&self, t: T) -> Result<Vec<T>> {
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::invalid("t", "time must be positive and finite"));
        }
        Ok(self.multipliers(t))
    }

    fn apply_all(&self, table: &Vec<T>, prep: &Vec<T>, out: &mut [Vec<T>]) {
        let mc: Vec<T> = table.iter().zip(prep).map(|(&m, &c)| m * c).collect();
        let o = &mut out[0];
        o.clear();
        o.extend(self.legendre.iter().map(|p| mc.iter().zip(p).fold(T::zero(), |s, (&a, &b)| s + a * b)));
    }

    fn apply_at(&self, prep: &Vec<T>, _channel: usize, i: usize, t: T) -> Result<T> {
        let m = self.table(t)?;
        let p = &self.legendre[i];
        Ok(m.iter().zip(prep).zip(p).fold(T::zero(), |s, ((&a, &c), &b)| s + a * c * b))
    }

    fn limit(&self, prep: &Vec<T>) -> T {
        prep[0]
    }
}

/// u(θ) = ∫_{S²} kernel(ω·η) |u₀(η)| dσ(η) for zonal u₀, by Gauss–Legendre
/// in cos θ′ times the trapezoid rule in azimuth (128 nodes, more for
/// kernels narrower than ~0.25 rad).
///
/// The Gauss–Legendre nodes are the grid's own colatitudes, so the datum is
/// used at its samples without interpolation. `time` is ρ ∈ [0, 1) for the
/// Poisson kernel and t > 0 for the heat kernel.
pub fn evolve_zonal_sphere<T: Real>(u0: &GridFunction<T>, spec: &KernelSpec<T>, time: T) -> Result<GridFunction<T>> {
    let family = SphereFamily::from_spec(spec)?;
    let Domain::ZonalSphere { n, d } = *u0.domain() else {
        return Err(Error::IncompatibleDomain { kernel: spec.name(), domain: u0.domain().name() });
    };
    if d != 2 {
        return Err(Error::IncompatibleDomain { kernel: spec.name(), domain: "zonal-sphere(d≠2)" });
    }
    let tail_tol = lit::<T>(HEAT_TAIL_TOL);
    let truncation = match (*spec, family) {
        (KernelSpec::SphericalHeat { truncation, .. }, SphereFamily::Heat) => {
            truncation.max(heat_truncation(time, 2, tail_tol)?)
        }
        _ => 0,
    };
    let kernel = |c: T| -> Result<T> {
        let c = c.max(-T::one()).min(T::one());
        match family {
            SphereFamily::Poisson => spherical_poisson(c, time, 2),
            SphereFamily::Heat => spherical_heat(c, time, 2, truncation, tail_tol),
        }
    };
    kernel(T::one())?;
    // Quadrature errors decay like exp(−n·w), w the kernel's angular width.
    let width = match family {
        SphereFamily::Poisson => T::one() - time,
        SphereFamily::Heat => time.sqrt(),
    };
    let theta = u0.nodes();
    // The grid colatitudes are Gauss–Legendre nodes in cos θ (descending θ ↔
    // ascending cos θ). Sharp kernels get a finer rule, with the datum carried
    // over by its degree-(n−1) Legendre interpolant.
    let m = (lit::<T>(12.0) / width).ceil().to_usize().unwrap_or(usize::MAX).clamp(n, 4096);
    let abs: Vec<T> = u0.values().iter().map(|v| v.abs()).collect();
    let src: Vec<(T, T, T)> = if m == n {
        let (_, ws) = gauss_legendre::<T>(n);
        theta.iter().zip(ws.iter().rev()).zip(&abs).map(|((&th, &w), &v)| (th.cos(), th.sin(), w * v)).collect()
    } else {
        let (xg, wg) = gauss_legendre::<T>(n);
        let mut coeff = vec![T::zero(); n];
        for ((&x, &w), &v) in xg.iter().zip(&wg).zip(abs.iter().rev()) {
            for (l, p) in legendre_all(n - 1, x).into_iter().enumerate() {
                coeff[l] = coeff[l] + w * v * p;
            }
        }
        for (l, c) in coeff.iter_mut().enumerate() {
            *c = *c * T::from_usize_exact(2 * l + 1) / lit(2.0);
        }
        let (xs, ws) = gauss_legendre::<T>(m);
        xs.iter()
            .zip(&ws)
            .map(|(&x, &w)| {
                let v = legendre_all(n - 1, x).iter().zip(&coeff).fold(T::zero(), |s, (&p, &c)| s + p * c);
                (x, (T::one() - x * x).max(T::zero()).sqrt(), w * v)
            })
            .collect()
    };
    let n_phi = (lit::<T>(30.0) / width).ceil().to_usize().unwrap_or(usize::MAX).clamp(128, 1 << 16);
    let dphi = lit::<T>(2.0) * T::PI() / T::from_usize_exact(n_phi);
    let cos_phi: Vec<T> = (0..n_phi).map(|b| (dphi * T::from_usize_exact(b)).cos()).collect();
    let mut out = Vec::with_capacity(n);
    for &th in &theta {
        let (ct, st) = (th.cos(), th.sin());
        let mut s = T::zero();
        for &(x, sx, wu) in &src {
            if wu == T::zero() {
                continue;
            }
            let mut ring = T::zero();
            for &cp in &cos_phi {
                ring = ring + kernel(ct * x + st * sx * cp)?;
            }
            s = s + wu * ring * dphi;
        }
        out.push(s);
    }
    u0.with_values(out)
}

/// The colatitude interpolant the spectral engine evolves, at θ.
pub fn zonal_interpolant<T: Real>(u0: &GridFunction<T>, theta: T) -> Result<T> {
    if !matches!(u0.domain(), Domain::ZonalSphere { .. }) {
        return Err(Error::IncompatibleDomain { kernel: "zonal interpolant".into(), domain: u0.domain().name() });
    }
    Ok(interpolate(&u0.nodes(), u0.values(), theta))
}

//! Discrete variation functionals on sampled grids.
//!
//! All derivatives are forward differences, so the ℓ¹ gradient norm of a
//! line grid telescopes to exactly its total variation. The torus adds the
//! wrap-around difference. Zonal data on S^d are differenced in colatitude
//! with no wrap, and the L^p norms carry the surface measure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::scalar::{sphere_area, Real};

/// The gradient norms the paper's inequalities are stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GradNorm {
    L1,
    L2,
    LInf,
}

impl GradNorm {
    /// Parses p ∈ {1, 2, ∞}.
    pub fn from_p(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(GradNorm::L1)
        } else if p == 2.0 {
            Ok(GradNorm::L2)
        } else if p == f64::INFINITY {
            Ok(GradNorm::LInf)
        } else {
            Err(Error::invalid("p", format!("gradient norms are implemented for p ∈ {{1, 2, ∞}}, got {p}")))
        }
    }

    pub fn p(&self) -> f64 {
        match self {
            GradNorm::L1 => 1.0,
            GradNorm::L2 => 2.0,
            GradNorm::LInf => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationReport<T> {
    pub total_variation: T,
    pub grad_l1: T,
    pub grad_l2: T,
    pub grad_linf: T,
    pub lipschitz: T,
}

impl<T: Real> VariationReport<T> {
    pub fn of(f: &GridFunction<T>) -> Self {
        let s = Slopes::of(f);
        Self {
            total_variation: total_variation(f),
            grad_l1: s.norm(GradNorm::L1),
            grad_l2: s.norm(GradNorm::L2),
            grad_linf: s.norm(GradNorm::LInf),
            lipschitz: s.norm(GradNorm::LInf),
        }
    }

    pub fn grad_norm(&self, p: GradNorm) -> T {
        match p {
            GradNorm::L1 => self.grad_l1,
            GradNorm::L2 => self.grad_l2,
            GradNorm::LInf => self.grad_linf,
        }
    }
}

/// Forward-difference slopes with the measure of each cell.
struct Slopes<T> {
    slope: Vec<T>,
    weight: Vec<T>,
}

impl<T: Real> Slopes<T> {
    fn of(f: &GridFunction<T>) -> Self {
        let v = f.values();
        let n = v.len();
        match *f.domain() {
            Domain::Line { .. } | Domain::Torus { .. } => {
                let h = f.spacing().unwrap();
                let cells = if matches!(f.domain(), Domain::Torus { .. }) { n } else { n - 1 };
                let slope = (0..cells).map(|i| (v[(i + 1) % n] - v[i]) / h).collect();
                Self { slope, weight: vec![h; cells] }
            }
            Domain::ZonalSphere { d, .. } => {
                // Cell [θ_i, θ_{i+1}] carries |S^{d−1}| ∫ sin^{d−1}θ dθ.
                let th = f.nodes();
                let ring = sphere_area::<T>(d - 1);
                let slope = (0..n - 1).map(|i| (v[i + 1] - v[i]) / (th[i + 1] - th[i])).collect();
                let weight = (0..n - 1).map(|i| ring * sin_power_integral(d - 1, th[i], th[i + 1])).collect();
                Self { slope, weight }
            }
        }
    }

    fn norm(&self, p: GradNorm) -> T {
        let it = self.slope.iter().zip(&self.weight);
        match p {
            GradNorm::L1 => it.fold(T::zero(), |s, (&g, &w)| s + g.abs() * w),
            GradNorm::L2 => it.fold(T::zero(), |s, (&g, &w)| s + g * g * w).sqrt(),
            GradNorm::LInf => self.slope.iter().fold(T::zero(), |m, g| m.max(g.abs())),
        }
    }
}

/// ∫_a^b sin^k θ dθ, by the reduction formula.
fn sin_power_integral<T: Real>(k: usize, a: T, b: T) -> T {
    match k {
        0 => b - a,
        1 => a.cos() - b.cos(),
        _ => {
            let kf = T::from_usize_exact(k);
            let edge = |x: T| -x.sin().powi(k as i32 - 1) * x.cos() / kf;
            edge(b) - edge(a) + (kf - T::one()) / kf * sin_power_integral(k - 2, a, b)
        }
    }
}

/// Σ |f_{i+1} − f_i|, plus |f_0 − f_{n−1}| on the torus.
pub fn total_variation<T: Real>(f: &GridFunction<T>) -> T {
    let v = f.values();
    let mut s = v.windows(2).fold(T::zero(), |s, w| s + (w[1] - w[0]).abs());
    if let Domain::Torus { .. } = f.domain() {
        s = s + (v[0] - v[v.len() - 1]).abs();
    }
    s
}

/// (Σ |Δf_i / h_i|^p w_i)^{1/p} over forward differences; w_i = h_i on the
/// line and torus, the surface measure of the band on the sphere. p = ∞
/// gives the largest slope.
pub fn grad_lp_norm<T: Real>(f: &GridFunction<T>, p: f64) -> Result<T> {
    Ok(Slopes::of(f).norm(GradNorm::from_p(p)?))
}

/// max |Δf_i| / h_i over adjacent samples; exact for the piecewise-linear
/// interpolant.
pub fn lipschitz_constant<T: Real>(f: &GridFunction<T>) -> T {
    Slopes::of(f).norm(GradNorm::LInf)
}

/// A line grid padded with one zero sample on each side.
///
/// A line datum is the piecewise-linear interpolant of its samples, zero
/// from one spacing beyond the grid, so the variation and gradient norms of
/// the padded grid are exactly those of the datum on ℝ. For any function
/// that vanishes at ±∞, `total_variation` of the padding is a lower bound
/// for its variation on ℝ.
pub fn zero_extended<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    let Domain::Line { x_min, x_max, n } = *f.domain() else {
        return Err(Error::IncompatibleDomain { kernel: "zero extension".into(), domain: f.domain().name() });
    };
    let h = f.spacing().unwrap();
    let mut v = Vec::with_capacity(n + 2);
    v.push(T::zero());
    v.extend_from_slice(f.values());
    v.push(T::zero());
    GridFunction::new(Domain::Line { x_min: x_min - h, x_max: x_max + h, n: n + 2 }, v)
}

//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Tolerances and limits for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Length scale R of the map x = a + R·u/(1−u) used on half-infinite ranges.
    /// Pick it near where the integrand has most of its mass.
    pub truncation_radius: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            abs_tol: lit::<T>(1e-10).max(eps * lit(64.0)),
            rel_tol: lit::<T>(1e-8).max(eps * lit(64.0)),
            max_subdivisions: 2000,
            truncation_radius: T::one(),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn with_radius(mut self, r: T) -> Self {
        self.truncation_radius = r;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: T, rel_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) {
            return Err(Error::invalid("abs_tol", "must be positive"));
        }
        if !(self.rel_tol > T::zero()) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        if !(self.truncation_radius > T::zero() && self.truncation_radius.is_finite()) {
            return Err(Error::invalid("truncation_radius", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Upper integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> From<T> for Upper<T> {
    fn from(b: T) -> Self {
        if b.is_infinite() && b > T::zero() {
            Upper::Infinite
        } else {
            Upper::Finite(b)
        }
    }
}

/// Result of an adaptive integration with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error_estimate: T,
    pub subdivisions: usize,
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Piece<T> {}
impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn kronrod<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) / lit(2.0);
    let center = (a + b) / lit(2.0);
    let fc = f(center);
    let mut kron = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kron = kron + pair * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * lit(WG[j / 2]);
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// ∫_a^b f(x) dx, with `b` possibly +∞.
///
/// Fails with [`Error::NonConvergence`] when `max_subdivisions` bisections do
/// not bring the summed error estimate under `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<T: Real>(
    f: impl FnMut(T) -> T,
    a: T,
    b: impl Into<Upper<T>>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    integrate_adaptive_detailed(f, a, b, spec).map(|q| q.value)
}

pub fn integrate_adaptive_detailed<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: impl Into<Upper<T>>,
    spec: &QuadratureSpec<T>,
) -> Result<Quadrature<T>> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::invalid("a", "lower limit must be finite"));
    }
    match b.into() {
        Upper::Finite(b) => {
            if !b.is_finite() {
                return Err(Error::invalid("b", "upper limit must be finite or +∞"));
            }
            if b < a {
                let q = adapt(&mut f, b, a, spec)?;
                return Ok(Quadrature { value: -q.value, ..q });
            }
            adapt(&mut f, a, b, spec)
        }
        Upper::Infinite => {
            let r = spec.truncation_radius;
            let mut g = |u: T| {
                let one_minus = T::one() - u;
                let x = a + r * u / one_minus;
                if !x.is_finite() {
                    return T::zero();
                }
                let v = f(x) * r / (one_minus * one_minus);
                if v.is_finite() {
                    v
                } else {
                    T::zero()
                }
            };
            adapt(&mut g, T::zero(), T::one(), spec)
        }
    }
}

fn adapt<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature { value: T::zero(), error_estimate: T::zero(), subdivisions: 0 });
    }
    let (v, e) = kronrod(f, a, b);
    let mut total = v;
    let mut total_err = e;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut subdivisions = 0;
    let tiny = T::epsilon() * lit(64.0);
    // Pieces too short to split further; their error is frozen into the total.
    let mut frozen_err = T::zero();
    let mut frozen_val = T::zero();

    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            return Ok(Quadrature { value: total, error_estimate: total_err, subdivisions });
        }
        if subdivisions >= spec.max_subdivisions {
            break;
        }
        let Some(piece) = heap.pop() else { break };
        let mid = (piece.a + piece.b) / lit(2.0);
        if (piece.b - piece.a) <= tiny * (piece.a.abs() + piece.b.abs()) || mid <= piece.a || mid >= piece.b {
            frozen_err = frozen_err + piece.error;
            frozen_val = frozen_val + piece.value;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = kronrod(f, piece.a, mid);
        let (v2, e2) = kronrod(f, mid, piece.b);
        total = total - piece.value + v1 + v2;
        total_err = total_err - piece.error + e1 + e2;
        heap.push(Piece { a: piece.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: piece.b, value: v2, error: e2 });
        subdivisions += 1;
        // Recompute the running error now and then; the incremental sum drifts.
        if subdivisions % 64 == 0 {
            total_err = heap.iter().fold(frozen_err, |s, p| s + p.error);
            total = heap.iter().fold(frozen_val, |s, p| s + p.value);
        }
    }
    let total_err = heap.iter().fold(frozen_err, |s, p| s + p.error);
    let total = heap.iter().fold(frozen_val, |s, p| s + p.value);
    if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        return Ok(Quadrature { value: total, error_estimate: total_err, subdivisions });
    }
    Err(Error::NonConvergence { estimate: total.to_f64_lossy(), error_bound: total_err.to_f64_lossy() })
}

use super::{components_of, ArgSup, MaximalOptions, MaximalResult};
use crate::error::{Error, Result};
use crate::evolution::Propagator;
use crate::grid::{GridFunction, TimeGrid};
use crate::numerics::maximize_bracketed;
use crate::scalar::{lit, Real};

/// Points of the local polynomial fitted around a grid maximum.
const STENCIL: usize = 6;

/// A propagator with its tables cached at every node of a time grid.
///
/// Building the plan costs one table per time; each [`run`](Self::run) then
/// costs one `apply_all` per time, so a plan amortizes over many data.
pub struct MaximalPlan<T: Real, P: Propagator<T>> {
    prop: P,
    grid: TimeGrid<T>,
    tables: Vec<P::Table>,
    options: MaximalOptions<T>,
    cyclic: bool,
}

impl<T: Real, P: Propagator<T>> MaximalPlan<T, P> {
    pub fn new(prop: P, grid: TimeGrid<T>, options: MaximalOptions<T>, cyclic: bool) -> Result<Self> {
        grid.validate()?;
        options.validate()?;
        let tables = grid.nodes().into_iter().map(|t| prop.table(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self { prop, grid, tables, options, cyclic })
    }

    pub fn propagator(&self) -> &P {
        &self.prop
    }

    pub fn time_grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn options(&self) -> &MaximalOptions<T> {
        &self.options
    }

    /// u* of |u0| over the datum, the cached times and the t → ∞ limit.
    pub fn run(&self, u0: &GridFunction<T>) -> Result<MaximalResult<T>> {
        let n = self.prop.len();
        if u0.len() != n {
            return Err(Error::invalid("u0", format!("plan expects {n} samples, got {}", u0.len())));
        }
        let datum = u0.abs();
        let prep = self.prop.prepare(datum.values())?;
        let channels = self.prop.channels();
        let n_t = self.tables.len();

        // samples[c][i][k] = u_c(x_i, t_k)
        let mut samples = vec![vec![vec![T::zero(); n_t]; n]; channels];
        let mut out = vec![Vec::with_capacity(n); channels];
        for (k, table) in self.tables.iter().enumerate() {
            self.prop.apply_all(table, &prep, &mut out);
            for (c, row) in out.iter().enumerate() {
                for (i, &v) in row.iter().enumerate() {
                    samples[c][i][k] = v;
                }
            }
        }

        let limit = self.prop.limit(&prep);
        let s0 = self.grid.t_min.ln();
        let ds = self.grid.log_step();
        let mut u_star = Vec::with_capacity(n);
        let mut arg_sup = Vec::with_capacity(n);
        for (i, &d) in datum.values().iter().enumerate() {
            let mut best = (d, ArgSup::Datum);
            if limit > best.0 {
                best = (limit, ArgSup::Limit);
            }
            for ch in &samples {
                let (v, t) = self.sup_over_times(&ch[i], s0, ds);
                if v > best.0 {
                    best = (v, ArgSup::Finite(t));
                }
            }
            u_star.push(best.0);
            arg_sup.push(best.1);
        }

        let u_star = datum.with_values(u_star)?;
        let mask = super::detachment_mask(datum.values(), u_star.values(), self.options.detach_tol);
        let components = components_of(&mask, self.cyclic);
        Ok(MaximalResult { u0: datum, u_star, arg_sup, detachment_mask: mask, components, detach_tol: self.options.detach_tol })
    }

    /// Largest value of one time series, refined around its top local maxima.
    fn sup_over_times(&self, v: &[T], s0: T, ds: T) -> (T, T) {
        let m = v.len();
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&k| (k == 0 || v[k] >= v[k - 1]) && (k + 1 == m || v[k] > v[k + 1]))
            .collect();
        let top = peaks.iter().map(|&k| v[k]).fold(T::neg_infinity(), T::max);
        let floor = top - self.options.margin * top.abs();
        peaks.retain(|&k| v[k] >= floor);
        peaks.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap_or(std::cmp::Ordering::Equal));
        peaks.truncate(self.options.max_candidates.max(1));

        let mut best = (T::neg_infinity(), s0);
        for k in peaks {
            let (val, s) = if self.options.refine && k > 0 && k + 1 < m {
                refine_peak(v, k, s0, ds)
            } else {
                (v[k], s0 + ds * T::from_usize_exact(k))
            };
            if val > best.0 {
                best = (val, s);
            }
        }
        (best.0, best.1.exp())
    }
}

/// Maximizes the interpolating polynomial through up to [`STENCIL`] samples
/// around the interior grid maximum `k`, over [s_{k−1}, s_{k+1}].
fn refine_peak<T: Real>(v: &[T], k: usize, s0: T, ds: T) -> (T, T) {
    let m = v.len();
    let width = STENCIL.min(m);
    let lean = if v[k + 1] >= v[k - 1] { width / 2 - 1 } else { width / 2 };
    let start = k.saturating_sub(lean).min(m - width);
    let window = &v[start..start + width];

    // Newton form on the integer nodes 0..width.
    let mut coef = window.to_vec();
    for j in 1..width {
        for r in (j..width).rev() {
            coef[r] = (coef[r] - coef[r - 1]) / T::from_usize_exact(j);
        }
    }
    let poly = |x: T| {
        let mut p = coef[width - 1];
        for j in (0..width - 1).rev() {
            p = p * (x - T::from_usize_exact(j)) + coef[j];
        }
        p
    };
    let centre = T::from_usize_exact(k - start);
    let (x, px) = maximize_bracketed(poly, centre - T::one(), centre + T::one(), lit(1e-10));
    if px > v[k] {
        (px, s0 + ds * (T::from_usize_exact(start) + x))
    } else {
        (v[k], s0 + ds * T::from_usize_exact(k))
    }
}

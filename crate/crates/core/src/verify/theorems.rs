use serde_json::json;

use super::{CheckOutcome, DatumSpec};
use crate::error::{Error, Result};
use crate::evolution::TorusInterpolation;
use crate::grid::{Domain, GridFunction, TimeGrid};
use crate::kernels::KernelSpec;
use crate::maximal::{MaximalEngine, MaximalOptions, MaximalResult};
use crate::variation::{grad_lp_norm, total_variation, zero_extended};

/// One (domain, kernel, time grid) setting with its maximal-function plan,
/// reused across data.
pub struct CheckContext {
    domain: Domain<f64>,
    spec: KernelSpec<f64>,
    tg: TimeGrid<f64>,
    options: MaximalOptions<f64>,
    engine: MaximalEngine<f64>,
}

impl CheckContext {
    pub fn new(domain: &Domain<f64>, spec: &KernelSpec<f64>, tg: &TimeGrid<f64>, options: MaximalOptions<f64>) -> Result<Self> {
        let engine = MaximalEngine::new(domain, spec, tg, options)?;
        Ok(Self { domain: domain.clone(), spec: *spec, tg: *tg, options, engine })
    }

    /// The options the checks use: both edges and the axis of the cone
    /// (the harmonic extension peaks on the cone's boundary), and the
    /// torus extension suited to `interpolation`.
    pub fn verification_options(interpolation: TorusInterpolation) -> MaximalOptions<f64> {
        MaximalOptions { y_res: 1, torus_interpolation: interpolation, ..Default::default() }
    }

    pub fn for_datum(datum: &DatumSpec, spec: &KernelSpec<f64>, tg: &TimeGrid<f64>) -> Result<Self> {
        Self::new(&datum.domain, spec, tg, Self::verification_options(datum.torus_interpolation()))
    }

    pub fn maximal(&self, u0: &GridFunction<f64>) -> Result<MaximalResult<f64>> {
        if u0.domain() != &self.domain {
            return Err(Error::invalid("u0", "datum grid differs from the context grid"));
        }
        self.engine.run(u0)
    }

    fn tag(&self, o: CheckOutcome, label: &str, res: &MaximalResult<f64>) -> CheckOutcome {
        let mut o = o
            .with("kernel", self.spec.name())
            .with("domain", self.domain.name())
            .with("n", self.domain.len())
            .with("time_grid", json!([self.tg.t_min, self.tg.t_max, self.tg.n_t]))
            .with("datum", label)
            .with("components", res.components.len());
        if let KernelSpec::NonTangentialPoisson { .. } = self.spec {
            o = o.with("y_res", self.options.y_res);
        }
        o
    }

    /// V(u*) ≤ V(u₀). On the line both sides include the jumps to zero
    /// beyond the window: exact for the datum, a lower bound for u*.
    pub fn variation(&self, label: &str, u0: &GridFunction<f64>, res: &MaximalResult<f64>, tol: f64) -> Result<CheckOutcome> {
        let (lhs, rhs) = match self.domain {
            Domain::Line { .. } => (total_variation(&zero_extended(&res.u_star)?), total_variation(&zero_extended(u0)?)),
            _ => (total_variation(&res.u_star), total_variation(u0)),
        };
        Ok(self.tag(CheckOutcome::new("variation", lhs, rhs, tol), label, res))
    }

    /// ‖∇u*‖_p ≤ ‖∇u₀‖_p for p ∈ {2, ∞}; p = ∞ is the Lipschitz bound.
    pub fn gradient(&self, label: &str, u0: &GridFunction<f64>, res: &MaximalResult<f64>, p: f64, tol: f64) -> Result<CheckOutcome> {
        if p != 2.0 && p != f64::INFINITY {
            return Err(Error::invalid("p", "the gradient check covers p = 2 and p = ∞"));
        }
        let lhs = grad_lp_norm(&res.u_star, p)?;
        let rhs = match self.domain {
            Domain::Line { .. } => grad_lp_norm(&zero_extended(u0)?, p)?,
            _ => grad_lp_norm(u0, p)?,
        };
        let name = if p == 2.0 { "gradient-p2" } else { "gradient-pinf" };
        Ok(self.tag(CheckOutcome::new(name, lhs, rhs, tol), label, res))
    }

    /// Worst violation of convexity over the interior indices of every
    /// detachment component, in units of ‖u*‖_∞; passes when ≤ tol.
    pub fn convexity(&self, label: &str, res: &MaximalResult<f64>, tol: f64) -> Result<CheckOutcome> {
        if let Domain::ZonalSphere { .. } = self.domain {
            return Err(Error::IncompatibleDomain { kernel: "convexity check".into(), domain: self.domain.name() });
        }
        let s = res.u_star.values();
        let scale = res.u_star.max_abs().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        let mut checked = 0usize;
        for &c in &res.components {
            for w in res.component_indices(c).windows(3) {
                let second = s[w[0]] - 2.0 * s[w[1]] + s[w[2]];
                worst = worst.max(-second / scale);
                checked += 1;
            }
        }
        let o = CheckOutcome::new("convexity", worst, 0.0, tol).with("interior_points", checked);
        Ok(self.tag(o, label, res))
    }
}

pub fn check_variation_diminishing(datum: &DatumSpec, spec: &KernelSpec<f64>, tg: &TimeGrid<f64>, tol: f64) -> Result<CheckOutcome> {
    let ctx = CheckContext::for_datum(datum, spec, tg)?;
    let u0 = datum.generate()?.values;
    ctx.variation(&datum.label(), &u0, &ctx.maximal(&u0)?, tol)
}

pub fn check_gradient_diminishing(
    datum: &DatumSpec,
    spec: &KernelSpec<f64>,
    tg: &TimeGrid<f64>,
    p: f64,
    tol: f64,
) -> Result<CheckOutcome> {
    let ctx = CheckContext::for_datum(datum, spec, tg)?;
    let u0 = datum.generate()?.values;
    ctx.gradient(&datum.label(), &u0, &ctx.maximal(&u0)?, p, tol)
}

pub fn check_convexity_on_detachment(datum: &DatumSpec, spec: &KernelSpec<f64>, tg: &TimeGrid<f64>, tol: f64) -> Result<CheckOutcome> {
    if let Domain::ZonalSphere { .. } = datum.domain {
        return Err(Error::IncompatibleDomain { kernel: "convexity check".into(), domain: datum.domain.name() });
    }
    let ctx = CheckContext::for_datum(datum, spec, tg)?;
    let u0 = datum.generate()?.values;
    ctx.convexity(&datum.label(), &ctx.maximal(&u0)?, tol)
}

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::counterexample::{counterexample_scan, CounterexampleConfig};
use super::datum::{DatumSpec, Generator, KNOT_CELLS};
use super::envelope::tangent_envelope_check;
use super::identities::{check_kernel_identities, IdentityConfig};
use super::theorems::CheckContext;
use super::CheckOutcome;
use crate::error::{Error, Result};
use crate::evolution::TorusInterpolation;
use crate::grid::{Domain, GridFunction, TimeGrid};
use crate::kernels::{EllipticParams, KernelSpec};
use crate::variation::total_variation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernels,
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem5,
    Lemma7,
    Counterexample,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Kernels,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Theorem5,
        Suite::Lemma7,
        Suite::Counterexample,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernels => "kernels",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem5 => "theorem5",
            Suite::Lemma7 => "lemma7",
            Suite::Counterexample => "counterexample",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid("suite", format!("unknown suite {s:?}")))
    }
}

/// Settings of the tangent-envelope runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeConfig {
    pub pairs: usize,
    pub iterations: usize,
    /// Grid size of the seeded pairs on [0, 1].
    pub n: usize,
    /// Grid size of the analytic pair (x², x); the p = 2 norm of the sampled
    /// x² is off by about 0.14/n².
    pub analytic_n: usize,
    /// Exponents; `None` is p = ∞.
    pub exponents: Vec<Option<f64>>,
    pub tol: f64,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self { pairs: 50, iterations: 200, n: 257, analytic_n: 2001, exponents: vec![Some(1.0), Some(2.0), None], tol: 1e-6 }
    }
}

/// Everything a suite run depends on; embedded in its report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Data per setting, alternating piecewise-linear and step.
    pub n_data: usize,
    pub pl_segments: usize,
    pub step_jumps: usize,
    pub tol: f64,
    pub convexity_tol: f64,
    pub n_t: usize,
    pub line: Domain<f64>,
    pub torus: Domain<f64>,
    pub sphere: Domain<f64>,
    pub apertures: Vec<f64>,
    pub envelope: EnvelopeConfig,
    /// (d, α) pairs of the counterexample scan.
    pub counterexample: Vec<(usize, f64)>,
    pub counterexample_scan: CounterexampleConfig,
    pub identities: IdentityConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_data: 100,
            pl_segments: 6,
            step_jumps: 5,
            tol: 1e-3,
            convexity_tol: 1e-6,
            n_t: 400,
            line: Domain::Line { x_min: -1.0, x_max: 1.0, n: 4 * KNOT_CELLS + 1 },
            torus: Domain::Torus { n: 4 * KNOT_CELLS },
            sphere: Domain::ZonalSphere { n: 64, d: 2 },
            apertures: vec![0.0, 0.5, 1.0, 2.0],
            envelope: EnvelopeConfig::default(),
            counterexample: vec![(2, 2.0), (3, 1.0), (4, 1.0)],
            counterexample_scan: CounterexampleConfig::default(),
            identities: IdentityConfig::default(),
        }
    }
}

impl SuiteConfig {
    /// Twice the cells in every spatial grid and the time grid bisected.
    pub fn refined(&self) -> Self {
        let double = |d: &Domain<f64>| match *d {
            Domain::Line { x_min, x_max, n } => Domain::Line { x_min, x_max, n: 2 * n - 1 },
            Domain::Torus { n } => Domain::Torus { n: 2 * n },
            Domain::ZonalSphere { n, d } => Domain::ZonalSphere { n: 2 * n, d },
        };
        Self {
            n_t: 2 * self.n_t - 1,
            line: double(&self.line),
            torus: double(&self.torus),
            sphere: double(&self.sphere),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for d in [&self.line, &self.torus, &self.sphere] {
            d.validate()?;
        }
        if !matches!(self.line, Domain::Line { .. })
            || !matches!(self.torus, Domain::Torus { .. })
            || !matches!(self.sphere, Domain::ZonalSphere { .. })
        {
            return Err(Error::invalid("domains", "line, torus and sphere slots need matching domains"));
        }
        if !(self.tol >= 0.0 && self.convexity_tol >= 0.0) {
            return Err(Error::invalid("tol", "tolerances must be nonnegative"));
        }
        if self.n_t < 2 {
            return Err(Error::invalid("n_t", "need at least two time nodes"));
        }
        Ok(())
    }

    /// Seeded data for a setting: even indices piecewise linear, odd ones steps.
    pub fn data(&self, domain: &Domain<f64>) -> Vec<DatumSpec> {
        (0..self.n_data as u64)
            .map(|k| {
                let seed = self.seed.wrapping_mul(1_000_003).wrapping_add(k);
                let generator = if k % 2 == 0 {
                    Generator::PiecewiseLinear { seed, segments: self.pl_segments }
                } else {
                    Generator::Step { seed, jumps: self.step_jumps }
                };
                DatumSpec::new(generator, domain.clone())
            })
            .collect()
    }

    /// Times from a twentieth of the knot spacing to ten domain lengths
    /// (squared for diffusive kernels). The range follows the data rather
    /// than the grid, so refinement only adds nodes.
    pub fn time_grid(&self, domain: &Domain<f64>, spec: &KernelSpec<f64>) -> TimeGrid<f64> {
        let len = domain.length();
        let (lo, hi) = (len / (20 * KNOT_CELLS) as f64, 10.0 * len);
        let (t_min, t_max) = if spec.is_diffusive() { (lo * lo, hi * hi) } else { (lo, hi) };
        TimeGrid { t_min, t_max, n_t: self.n_t }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub suite: Suite,
    #[serde(flatten)]
    pub settings: SuiteConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ReportConfig,
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    /// Every outcome passed, or failed where failure is expected.
    pub fn all_as_expected(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::as_expected)
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.as_expected())
    }
}

fn prefixed(prefix: &str, o: CheckOutcome) -> CheckOutcome {
    CheckOutcome { name: format!("{prefix}/{}", o.name), ..o }
}

/// Variation, both gradient norms and (off the sphere) convexity for every
/// seeded datum of one setting.
fn inequality_battery(config: &SuiteConfig, prefix: &str, domain: &Domain<f64>, spec: &KernelSpec<f64>) -> Result<Vec<CheckOutcome>> {
    let tg = config.time_grid(domain, spec);
    let ctx = CheckContext::new(domain, spec, &tg, CheckContext::verification_options(TorusInterpolation::PiecewiseLinear))?;
    let mut out = Vec::new();
    for datum in config.data(domain) {
        let label = datum.label();
        let u0 = datum.generate()?.values;
        let res = ctx.maximal(&u0)?;
        out.push(ctx.variation(&label, &u0, &res, config.tol)?);
        out.push(ctx.gradient(&label, &u0, &res, 2.0, config.tol)?);
        out.push(ctx.gradient(&label, &u0, &res, f64::INFINITY, config.tol)?);
        if !matches!(domain, Domain::ZonalSphere { .. }) {
            out.push(ctx.convexity(&label, &res, config.convexity_tol)?);
        }
    }
    Ok(out.into_iter().map(|o| prefixed(prefix, o)).collect())
}

fn elliptic(a: f64, b: f64) -> Result<KernelSpec<f64>> {
    Ok(KernelSpec::Elliptic(EllipticParams::new(a, b, 1)?))
}

fn theorem1(config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (a, b) in [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0)] {
        out.extend(inequality_battery(config, "theorem1", &config.line, &elliptic(a, b)?)?);
    }
    Ok(out)
}

/// The seeded battery on 𝕋 plus the single-mode closed form
/// u* = 1 + max(cos 2πx, 0).
fn theorem2(config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let spec = elliptic(1.0, 1.0)?;
    let mut out = inequality_battery(config, "theorem2", &config.torus, &spec)?;
    let datum = DatumSpec::new(Generator::SingleMode, config.torus.clone());
    let tg = config.time_grid(&config.torus, &spec);
    let ctx = CheckContext::for_datum(&datum, &spec, &tg)?;
    let u0 = datum.generate()?.values;
    let res = ctx.maximal(&u0)?;
    let want = u0.map(|v| 1.0 + (v - 1.0).max(0.0));
    let err = res.u_star.values().iter().zip(want.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let tag = |o: CheckOutcome| o.with("datum", "single-mode").with("n", config.torus.len()).with("n_t", tg.n_t);
    out.push(tag(CheckOutcome::new("theorem2/single-mode/closed-form", err, 0.0, 1e-6)));
    let (v0, vs) = (total_variation(&u0), total_variation(&res.u_star));
    out.push(tag(CheckOutcome::new("theorem2/single-mode/variation-u0", (v0 - 4.0).abs(), 0.0, 1e-3)).with("value", v0));
    out.push(tag(CheckOutcome::new("theorem2/single-mode/variation-u-star", (vs - 2.0).abs(), 0.0, 1e-3)).with("value", vs));
    out.push(tag(CheckOutcome::new("theorem2/single-mode/variation", vs, v0, config.tol)));
    Ok(out)
}

/// Zonal S² Poisson and heat, and S¹ through the torus.
fn theorem3(config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let d = match config.sphere {
        Domain::ZonalSphere { d, .. } => d,
        _ => unreachable!("validated"),
    };
    let mut out = inequality_battery(config, "theorem3", &config.sphere, &KernelSpec::SphericalPoisson { d })?;
    let heat = KernelSpec::SphericalHeat { d, truncation: 64 };
    out.extend(inequality_battery(config, "theorem3", &config.sphere, &heat)?);
    out.extend(inequality_battery(config, "theorem3", &config.torus, &KernelSpec::SphericalPoisson { d: 1 })?);
    Ok(out)
}

fn theorem5(config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for &aperture in &config.apertures {
        out.extend(inequality_battery(config, "theorem5", &config.line, &KernelSpec::NonTangentialPoisson { aperture })?);
    }
    Ok(out)
}

/// A convex g and f = g − bump on [0, 1], with the bump a seeded
/// nonnegative piecewise-linear function vanishing at both ends.
fn envelope_pair(n: usize, seed: u64) -> Result<(GridFunction<f64>, GridFunction<f64>)> {
    let domain = Domain::Line { x_min: 0.0, x_max: 1.0, n };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinks: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(0.05..0.95), rng.gen_range(0.0..2.0))).collect();
    let (q, l) = (rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0));
    let scale = rng.gen_range(0.1..1.0);
    let g = GridFunction::from_fn(domain.clone(), |x| {
        q * x * x + l * x + kinks.iter().map(|&(c, w)| w * (x - c).abs()).sum::<f64>()
    })?;
    let bump = DatumSpec::new(Generator::PiecewiseLinear { seed: rng.gen(), segments: 5 }, domain).generate()?.values;
    let f = g.with_values(g.values().iter().zip(bump.values()).map(|(g, b)| g - scale * b).collect())?;
    Ok((f, g))
}

fn lemma7(config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let env = &config.envelope;
    let mut out = Vec::new();
    let unit = Domain::Line { x_min: 0.0, x_max: 1.0, n: env.analytic_n };
    let f = GridFunction::from_fn(unit.clone(), |x| x * x)?;
    let g = GridFunction::from_fn(unit, |x| x)?;
    for &p in &env.exponents {
        let p = p.unwrap_or(f64::INFINITY);
        let check = tangent_envelope_check(&f, &g, p, env.iterations, config.seed, env.tol)?;
        for o in check.outcomes() {
            out.push(o.with("pair", "analytic"));
        }
        if p == 2.0 {
            let exact = 2.0 / 3f64.sqrt();
            out.push(
                CheckOutcome::new("lemma7/analytic-norm", (check.norms[0] - exact).abs(), 0.0, env.tol)
                    .with("value", check.norms[0])
                    .with("expected", exact),
            );
        }
    }
    for k in 0..env.pairs as u64 {
        let seed = config.seed.wrapping_mul(1_000_003).wrapping_add(k);
        let (f, g) = envelope_pair(env.n, seed)?;
        for &p in &env.exponents {
            let p = p.unwrap_or(f64::INFINITY);
            let check = tangent_envelope_check(&f, &g, p, env.iterations, seed, env.tol)?;
            out.extend(check.outcomes().into_iter().map(|o| o.with("pair", format!("seeded:{seed}"))));
        }
    }
    Ok(out)
}

fn counterexample(config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for &(d, alpha) in &config.counterexample {
        out.extend(counterexample_scan(d, alpha, &config.counterexample_scan)?);
    }
    Ok(out)
}

/// Runs one suite (or all of them, in the order listed in [`Suite::ALL`]).
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let outcomes = match suite {
        Suite::Kernels => check_kernel_identities(&config.identities)?,
        Suite::Theorem1 => theorem1(config)?,
        Suite::Theorem2 => theorem2(config)?,
        Suite::Theorem3 => theorem3(config)?,
        Suite::Theorem5 => theorem5(config)?,
        Suite::Lemma7 => lemma7(config)?,
        Suite::Counterexample => counterexample(config)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in &Suite::ALL[..Suite::ALL.len() - 1] {
                all.extend(run_suite(*s, config)?.outcomes);
            }
            all
        }
    };
    Ok(Report { config: ReportConfig { suite, settings: config.clone() }, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("theorem4".parse::<Suite>().is_err());
    }

    #[test]
    fn envelope_pairs_satisfy_the_hypotheses() {
        for seed in 0..20 {
            let (f, g) = envelope_pair(129, seed).unwrap();
            assert!(tangent_envelope_check(&f, &g, 2.0, 3, seed, 1e-6).is_ok());
        }
    }

    #[test]
    fn refined_grids_keep_the_knot_lattice() {
        let r = SuiteConfig::default().refined();
        assert_eq!(r.line.len(), 8 * KNOT_CELLS + 1);
        assert_eq!(r.torus.len(), 8 * KNOT_CELLS);
        assert_eq!(r.n_t, 799);
    }
}

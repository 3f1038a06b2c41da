//! `varmax`: kernel tables, evolutions, maximal functions and the
//! verification suites from the command line.

mod datum;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use varmax::evolution::{evolve_line, evolve_torus, evolve_zonal_sphere};
use varmax::grid::{Domain, GridFunction, TimeGrid};
use varmax::kernels::{
    elliptic_kernel, heat_truncation, periodic_kernel, spherical_heat, spherical_poisson, EllipticParams, KernelSpec,
};
use varmax::maximal::{MaximalEngine, MaximalOptions};
use varmax::variation::{total_variation, zero_extended};
use varmax::verify::{run_suite, Suite, SuiteConfig};

use crate::datum::DatumSource;
use crate::output::{write_csv, write_json, Table};

#[derive(Parser)]
#[command(name = "varmax", version, about = "Maximal functions of convolution type and their regularity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a kernel profile as CSV.
    Kernel(KernelArgs),
    /// Evolve a datum to one time and write x, u0, u_t.
    Evolve(EvolveArgs),
    /// Compute u* and write x, u0, u_star, arg_sup, detached.
    Maximal(MaximalArgs),
    /// Run a verification suite and write its JSON report.
    Verify(VerifyArgs),
    /// Shorthand for `verify --suite counterexample`.
    Counterexample(CounterexampleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelFamily {
    Elliptic,
    Periodic,
    SphericalPoisson,
    SphericalHeat,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum, default_value = "elliptic")]
    family: KernelFamily,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Dimension of ℝ^d or S^d.
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Radius ρ of the spherical Poisson kernel; defaults to e^{−t}.
    #[arg(long)]
    rho: Option<f64>,
    /// Number of table rows.
    #[arg(long = "n", visible_alias = "N", default_value_t = 101)]
    n: usize,
    /// Largest |x| of the Euclidean table.
    #[arg(long, default_value_t = 5.0)]
    x_max: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainKind {
    Line,
    Torus,
    Sphere,
}

#[derive(Args)]
struct DomainArgs {
    #[arg(long, value_enum, default_value = "line")]
    domain: DomainKind,
    /// Grid size.
    #[arg(long, default_value_t = 129)]
    n: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    x_max: f64,
    /// Dimension of the sphere S^d.
    #[arg(long, default_value_t = 2)]
    sphere_d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorKind {
    Elliptic,
    SphericalPoisson,
    SphericalHeat,
    Nontangential,
}

#[derive(Args)]
struct OperatorArgs {
    #[arg(long, value_enum, default_value = "elliptic")]
    kernel: OperatorKind,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Cone aperture of the non-tangential operator.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Largest degree of the spherical heat series.
    #[arg(long, default_value_t = 64)]
    truncation: usize,
}

#[derive(Args)]
struct DatumArgs {
    /// pl:SEED[:SEGMENTS], step:SEED[:JUMPS], gauss:CENTER:WIDTH or single-mode.
    #[arg(long, default_value = "pl:0")]
    datum: String,
    /// CSV with header x,value; on the line it also fixes the grid.
    #[arg(long, conflicts_with = "datum")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    operator: OperatorArgs,
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long)]
    t: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MaximalArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    operator: OperatorArgs,
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 400)]
    n_t: usize,
    /// Cone points per side for the non-tangential operator.
    #[arg(long, default_value_t = 16)]
    y_res: usize,
    #[arg(long, default_value_t = 1e-9)]
    detach_tol: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// JSON summary: components, their convexity and the variations.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    common: SuiteArgs,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[command(flatten)]
    common: SuiteArgs,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Seeded data per setting.
    #[arg(long)]
    n_data: Option<usize>,
    #[arg(long)]
    n_t: Option<usize>,
    /// Relative tolerance of the inequality checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Restrict the counterexample scan to this dimension (needs --alpha).
    #[arg(long, requires = "alpha")]
    d: Option<usize>,
    #[arg(long, requires = "d")]
    alpha: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernel(a) => cmd_kernel(&a).map(|_| true),
        Command::Evolve(a) => cmd_evolve(&a).map(|_| true),
        Command::Maximal(a) => cmd_maximal(&a).map(|_| true),
        Command::Verify(a) => a.suite.parse::<Suite>().map_err(anyhow::Error::from).and_then(|s| cmd_verify(s, &a.common)),
        Command::Counterexample(a) => cmd_verify(Suite::Counterexample, &a.common),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_kernel(args: &KernelArgs) -> Result<()> {
    if args.n < 2 {
        bail!("--n must be at least 2");
    }
    let n = args.n;
    let table = match args.family {
        KernelFamily::Elliptic => {
            let p = EllipticParams::new(args.a, args.b, args.d)?;
            let mut t = Table::new(&["x", "phi"]);
            for i in 0..n {
                let x = args.x_max * i as f64 / (n - 1) as f64;
                t.push(vec![x, elliptic_kernel(&p, args.t, x)?]);
            }
            t
        }
        KernelFamily::Periodic => {
            let p = EllipticParams::new(args.a, args.b, args.d)?;
            let mut t = Table::new(&["x", "psi"]);
            for i in 0..n {
                let x = i as f64 / n as f64;
                t.push(vec![x, periodic_kernel(&p, args.t, x)?]);
            }
            t
        }
        KernelFamily::SphericalPoisson => {
            let rho = args.rho.unwrap_or((-args.t).exp());
            let mut t = Table::new(&["theta", "value"]);
            for i in 0..n {
                let th = PI * i as f64 / (n - 1) as f64;
                t.push(vec![th, spherical_poisson(th.cos().clamp(-1.0, 1.0), rho, args.d)?]);
            }
            t
        }
        KernelFamily::SphericalHeat => {
            let trunc = heat_truncation(args.t, args.d, 1e-12)?;
            let mut t = Table::new(&["theta", "value"]);
            for i in 0..n {
                let th = PI * i as f64 / (n - 1) as f64;
                t.push(vec![th, spherical_heat(th.cos().clamp(-1.0, 1.0), args.t, args.d, trunc, 1e-12)?]);
            }
            t
        }
    };
    write_csv(&table, args.output.as_deref())
}

impl DomainArgs {
    fn domain(&self) -> Domain<f64> {
        match self.domain {
            DomainKind::Line => Domain::Line { x_min: self.x_min, x_max: self.x_max, n: self.n },
            DomainKind::Torus => Domain::Torus { n: self.n },
            DomainKind::Sphere => Domain::ZonalSphere { n: self.n, d: self.sphere_d },
        }
    }
}

impl OperatorArgs {
    fn spec(&self, domain: &Domain<f64>) -> Result<KernelSpec<f64>> {
        let spec = match (self.kernel, domain) {
            (OperatorKind::Elliptic, _) => KernelSpec::Elliptic(EllipticParams::new(self.a, self.b, 1)?),
            (OperatorKind::SphericalPoisson, Domain::ZonalSphere { d, .. }) => KernelSpec::SphericalPoisson { d: *d },
            (OperatorKind::SphericalPoisson, Domain::Torus { .. }) => KernelSpec::SphericalPoisson { d: 1 },
            (OperatorKind::SphericalHeat, Domain::ZonalSphere { d, .. }) => {
                KernelSpec::SphericalHeat { d: *d, truncation: self.truncation }
            }
            (OperatorKind::Nontangential, Domain::Line { .. }) => KernelSpec::NonTangentialPoisson { aperture: self.alpha },
            _ => bail!("kernel {:?} does not act on the {} domain", self.kernel_name(), domain.name()),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn kernel_name(&self) -> &'static str {
        match self.kernel {
            OperatorKind::Elliptic => "elliptic",
            OperatorKind::SphericalPoisson => "spherical-poisson",
            OperatorKind::SphericalHeat => "spherical-heat",
            OperatorKind::Nontangential => "nontangential",
        }
    }
}

fn coordinate_column(u: &GridFunction<f64>) -> (&'static str, Vec<f64>) {
    let name = if matches!(u.domain(), Domain::ZonalSphere { .. }) { "theta" } else { "x" };
    (name, u.nodes())
}

fn cmd_evolve(args: &EvolveArgs) -> Result<()> {
    let source = DatumSource::from_args(&args.datum.datum, args.datum.input.as_deref())?;
    let u0 = source.load(&args.domain.domain())?.values;
    let spec = args.operator.spec(u0.domain())?;
    let ut = match (u0.domain(), spec) {
        (Domain::Line { .. }, KernelSpec::Elliptic(_)) => evolve_line(&u0, &spec, args.t)?,
        (Domain::Torus { .. }, KernelSpec::Elliptic(p)) => evolve_torus(&u0, &p, args.t)?,
        (Domain::Torus { .. }, KernelSpec::SphericalPoisson { .. }) => evolve_torus(&u0, &EllipticParams::poisson(1), args.t)?,
        (Domain::ZonalSphere { .. }, _) => evolve_zonal_sphere(&u0, &spec, args.t)?,
        _ => bail!("{} has no single-time evolution on the {} domain", spec.name(), u0.domain().name()),
    };
    let (xname, xs) = coordinate_column(&u0);
    let mut table = Table::new(&[xname, "u0", "u_t"]);
    for i in 0..u0.len() {
        table.push(vec![xs[i], u0.values()[i], ut.values()[i]]);
    }
    write_csv(&table, args.output.as_deref())
}

fn cmd_maximal(args: &MaximalArgs) -> Result<()> {
    let source = DatumSource::from_args(&args.datum.datum, args.datum.input.as_deref())?;
    let loaded = source.load(&args.domain.domain())?;
    let u0 = loaded.values;
    let domain = u0.domain().clone();
    let spec = args.operator.spec(&domain)?;
    let mut tg = TimeGrid { n_t: args.n_t, ..TimeGrid::default_for(&domain, spec.is_diffusive()) };
    tg.t_min = args.t_min.unwrap_or(tg.t_min);
    tg.t_max = args.t_max.unwrap_or(tg.t_max);
    tg.validate()?;
    let options = MaximalOptions {
        detach_tol: args.detach_tol,
        y_res: args.y_res,
        torus_interpolation: loaded.interpolation,
        ..Default::default()
    };
    let res = MaximalEngine::new(&domain, &spec, &tg, options)?.run(&u0)?;

    let (xname, xs) = coordinate_column(&u0);
    let mut table = Table::new(&[xname, "u0", "u_star", "arg_sup", "detached"]);
    for i in 0..u0.len() {
        let detached = if res.detachment_mask[i] { 1.0 } else { 0.0 };
        table.push(vec![xs[i], res.u0.values()[i], res.u_star.values()[i], res.arg_sup[i].time(), detached]);
    }
    write_csv(&table, args.output.as_deref())?;

    if let Some(path) = &args.report {
        let s = res.u_star.values();
        let scale = res.u_star.max_abs().max(f64::MIN_POSITIVE);
        let components: Vec<_> = res
            .components
            .iter()
            .map(|&c| {
                let idx = res.component_indices(c);
                let worst = idx.windows(3).map(|w| -(s[w[0]] - 2.0 * s[w[1]] + s[w[2]]) / scale).fold(0.0, f64::max);
                let convex = (!matches!(domain, Domain::ZonalSphere { .. })).then_some(worst <= 1e-6);
                serde_json::json!({
                    "start": c.0, "end": c.1,
                    "x_start": xs[c.0], "x_end": xs[c.1],
                    "convex": convex,
                    "worst_second_difference": worst,
                })
            })
            .collect();
        // on the line, with the jumps to zero outside the window
        let (v0, vs) = match domain {
            Domain::Line { .. } => (total_variation(&zero_extended(&res.u0)?), total_variation(&zero_extended(&res.u_star)?)),
            _ => (total_variation(&res.u0), total_variation(&res.u_star)),
        };
        let report = serde_json::json!({
            "config": {
                "kernel": spec.name(),
                "domain": domain,
                "time_grid": tg,
                "datum": source.label(),
                "y_res": args.y_res,
                "detach_tol": args.detach_tol,
            },
            "components": components,
            "variation": { "u0": v0, "u_star": vs },
        });
        write_json(&report, Some(path))?;
    }
    Ok(())
}

fn cmd_verify(suite: Suite, args: &SuiteArgs) -> Result<bool> {
    let mut config = SuiteConfig { seed: args.seed, ..Default::default() };
    if let Some(n) = args.n_data {
        config.n_data = n;
    }
    if let Some(n) = args.n_t {
        config.n_t = n;
    }
    if let Some(t) = args.tol {
        config.tol = t;
    }
    if let (Some(d), Some(alpha)) = (args.d, args.alpha) {
        config.counterexample = vec![(d, alpha)];
    }
    config.validate()?;
    let report = run_suite(suite, &config).with_context(|| format!("suite {suite}"))?;

    let mut value = serde_json::to_value(&report)?;
    let stamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH)?.as_secs();
    value["timestamp"] = stamp.into();
    write_json(&value, args.output.as_deref())?;

    let bad: Vec<_> = report.unexpected().collect();
    eprintln!("suite {suite}: {} outcomes, {} not in the expected state", report.outcomes.len(), bad.len());
    for o in &bad {
        eprintln!("  {}: lhs {:e} rhs {:e} tol {:e}", o.name, o.lhs, o.rhs, o.tol);
    }
    Ok(bad.is_empty())
}

use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use varmax::evolution::TorusInterpolation;
use varmax::grid::{Domain, GridFunction};
use varmax::verify::{read_datum_csv, read_line_datum_csv, DatumSpec, Generator};

/// Where a datum comes from: a seeded generator or a CSV file.
pub enum DatumSource {
    Generated(Generator),
    Csv(PathBuf),
}

pub struct Loaded {
    pub values: GridFunction<f64>,
    pub interpolation: TorusInterpolation,
}

fn number<T: std::str::FromStr>(field: Option<&str>, what: &str, default: Option<T>) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    match (field, default) {
        (Some(s), _) => s.parse().with_context(|| format!("bad {what} {s:?}")),
        (None, Some(d)) => Ok(d),
        (None, None) => bail!("missing {what}"),
    }
}

impl DatumSource {
    pub fn from_args(datum: &str, input: Option<&Path>) -> Result<Self> {
        if let Some(path) = input {
            return Ok(DatumSource::Csv(path.to_path_buf()));
        }
        let mut parts = datum.split(':');
        let kind = parts.next().unwrap_or_default();
        let generator = match kind {
            "pl" => Generator::PiecewiseLinear {
                seed: number(parts.next(), "seed", None)?,
                segments: number(parts.next(), "segment count", Some(6))?,
            },
            "step" => Generator::Step {
                seed: number(parts.next(), "seed", None)?,
                jumps: number(parts.next(), "jump count", Some(5))?,
            },
            "gauss" => Generator::GaussianBump {
                center: number(parts.next(), "centre", None)?,
                width: number(parts.next(), "width", None)?,
            },
            "single-mode" => Generator::SingleMode,
            _ => bail!("unknown datum {datum:?}; use pl:SEED, step:SEED, gauss:CENTER:WIDTH or single-mode"),
        };
        if parts.next().is_some() {
            bail!("too many fields in datum {datum:?}");
        }
        Ok(DatumSource::Generated(generator))
    }

    pub fn label(&self) -> String {
        match self {
            DatumSource::Generated(g) => DatumSpec::new(g.clone(), Domain::Torus { n: 1 }).label(),
            DatumSource::Csv(p) => format!("csv:{}", p.display()),
        }
    }

    /// Generates on `domain`, or reads the CSV: on the line the file's own
    /// uniform grid replaces `domain`, elsewhere the rows must sit on its nodes.
    pub fn load(&self, domain: &Domain<f64>) -> Result<Loaded> {
        match self {
            DatumSource::Generated(g) => {
                let spec = DatumSpec::new(g.clone(), domain.clone());
                let values = spec.generate()?.values;
                Ok(Loaded { values, interpolation: spec.torus_interpolation() })
            }
            DatumSource::Csv(path) => {
                let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                let values = match domain {
                    Domain::Line { .. } => read_line_datum_csv(file),
                    _ => read_datum_csv(file, domain),
                }
                .with_context(|| format!("reading {}", path.display()))?;
                Ok(Loaded { values, interpolation: TorusInterpolation::PiecewiseLinear })
            }
        }
    }
}

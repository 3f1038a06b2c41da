use std::io::Read;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::TorusInterpolation;
use crate::grid::{Domain, GridFunction};

/// Knots of the seeded generators sit on multiples of 1/KNOT_CELLS of the
/// domain, so a grid whose cell count is a multiple of this carries the
/// same continuous datum at every refinement.
pub const KNOT_CELLS: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// Continuous, linear between `segments` random knots.
    PiecewiseLinear { seed: u64, segments: usize },
    /// Piecewise constant with `jumps` random jumps.
    Step { seed: u64, jumps: usize },
    GaussianBump { center: f64, width: f64 },
    /// 1 + cos 2πx on the torus; one period of the same on the line; 1 + cos θ
    /// on the sphere.
    SingleMode,
    /// Rows `x,value` on exactly the grid nodes.
    CustomCsv { path: PathBuf },
}

/// A straight piece of a generated datum, in the domain's coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatumSpec {
    pub generator: Generator,
    pub domain: Domain<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    pub values: GridFunction<f64>,
    /// The exact pieces, for piecewise-linear generators.
    pub segments: Option<Vec<Segment>>,
}

impl DatumSpec {
    pub fn new(generator: Generator, domain: Domain<f64>) -> Self {
        Self { generator, domain }
    }

    pub fn label(&self) -> String {
        match &self.generator {
            Generator::PiecewiseLinear { seed, .. } => format!("pl:{seed}"),
            Generator::Step { seed, .. } => format!("step:{seed}"),
            Generator::GaussianBump { center, width } => format!("gauss:{center}:{width}"),
            Generator::SingleMode => "single-mode".into(),
            Generator::CustomCsv { path } => format!("csv:{}", path.display()),
        }
    }

    /// Smooth data are extended trigonometrically on the torus; kinked and
    /// stepped data piecewise linearly.
    pub fn torus_interpolation(&self) -> TorusInterpolation {
        match self.generator {
            Generator::SingleMode | Generator::GaussianBump { .. } => TorusInterpolation::Trigonometric,
            _ => TorusInterpolation::PiecewiseLinear,
        }
    }

    pub fn generate(&self) -> Result<Datum> {
        self.domain.validate()?;
        let (lo, len) = coordinate_range(&self.domain);
        let nodes = self.domain.nodes();
        let periodic = matches!(self.domain, Domain::Torus { .. });
        let pinned = matches!(self.domain, Domain::Line { .. });
        let datum = match &self.generator {
            Generator::PiecewiseLinear { seed, segments } => {
                if *segments < 1 {
                    return Err(Error::invalid("segments", "need at least one segment"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let knots = knot_positions(&mut rng, *segments);
                let mut heights: Vec<f64> = knots.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
                if pinned {
                    heights[0] = 0.0;
                    *heights.last_mut().unwrap() = 0.0;
                }
                if periodic {
                    // 0 and 1 are the same point of the circle
                    *heights.last_mut().unwrap() = heights[0];
                }
                let xs: Vec<f64> = knots.iter().map(|&k| lo + len * k as f64 / KNOT_CELLS as f64).collect();
                let segs: Vec<Segment> = xs
                    .windows(2)
                    .zip(heights.windows(2))
                    .map(|(x, h)| Segment { x0: x[0], x1: x[1], slope: (h[1] - h[0]) / (x[1] - x[0]) })
                    .collect();
                let f = |x: f64| {
                    let k = xs.partition_point(|&xk| xk <= x).clamp(1, xs.len() - 1);
                    let w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                    heights[k - 1] * (1.0 - w) + heights[k] * w
                };
                let values = nodes.iter().map(|&x| f(x)).collect();
                Datum { values: GridFunction::new(self.domain.clone(), values)?, segments: Some(segs) }
            }
            Generator::Step { seed, jumps } => {
                if *jumps < 1 {
                    return Err(Error::invalid("jumps", "need at least one jump"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let knots = knot_positions(&mut rng, jumps + 1);
                let mut levels: Vec<f64> = (0..knots.len() - 1).map(|_| rng.gen_range(0.0..1.0)).collect();
                if pinned {
                    levels[0] = 0.0;
                    *levels.last_mut().unwrap() = 0.0;
                }
                let xs: Vec<f64> = knots.iter().map(|&k| lo + len * k as f64 / KNOT_CELLS as f64).collect();
                let values = nodes
                    .iter()
                    .map(|&x| levels[xs.partition_point(|&xk| xk <= x).clamp(1, levels.len()) - 1])
                    .collect();
                Datum { values: GridFunction::new(self.domain.clone(), values)?, segments: None }
            }
            Generator::GaussianBump { center, width } => {
                if !(*width > 0.0 && width.is_finite() && center.is_finite()) {
                    return Err(Error::invalid("width", "need a finite centre and positive width"));
                }
                let values = nodes
                    .iter()
                    .map(|&x| {
                        let mut r = x - center;
                        if periodic {
                            r -= r.round();
                        }
                        (-(r / width).powi(2)).exp()
                    })
                    .collect();
                Datum { values: GridFunction::new(self.domain.clone(), values)?, segments: None }
            }
            Generator::SingleMode => {
                let values = nodes.iter().map(|&x| 1.0 + (2.0 * std::f64::consts::PI * (x - lo) / len).cos()).collect();
                let values = match self.domain {
                    Domain::ZonalSphere { .. } => nodes.iter().map(|&th| 1.0 + th.cos()).collect(),
                    _ => values,
                };
                Datum { values: GridFunction::new(self.domain.clone(), values)?, segments: None }
            }
            Generator::CustomCsv { path } => {
                let file = std::fs::File::open(path)?;
                let read = read_datum_csv(file, &self.domain)?;
                Datum { values: read, segments: None }
            }
        };
        Ok(datum)
    }
}

/// Start and length of the coordinate the generators place knots in.
fn coordinate_range(domain: &Domain<f64>) -> (f64, f64) {
    match *domain {
        Domain::Line { x_min, x_max, .. } => (x_min, x_max - x_min),
        Domain::Torus { .. } => (0.0, 1.0),
        Domain::ZonalSphere { .. } => (0.0, std::f64::consts::PI),
    }
}

/// Sorted knot indices in 0..=KNOT_CELLS, both ends included, with up to
/// `pieces − 1` interior knots.
fn knot_positions(rng: &mut ChaCha8Rng, pieces: usize) -> Vec<usize> {
    let mut k: Vec<usize> = (0..pieces.saturating_sub(1)).map(|_| rng.gen_range(1..KNOT_CELLS)).collect();
    k.extend([0, KNOT_CELLS]);
    k.sort_unstable();
    k.dedup();
    k
}

/// Reads rows `x,value` (with that header) and checks that the abscissae
/// are the nodes of `domain`.
pub fn read_datum_csv(reader: impl Read, domain: &Domain<f64>) -> Result<GridFunction<f64>> {
    let rows = read_rows(reader)?;
    let nodes = domain.nodes();
    if rows.len() != nodes.len() {
        return Err(Error::MalformedDatum {
            row: rows.len().min(nodes.len()) + 1,
            reason: format!("expected {} rows for the {} grid, got {}", nodes.len(), domain.name(), rows.len()),
        });
    }
    let scale = domain.length();
    for (i, ((x, _), node)) in rows.iter().zip(&nodes).enumerate() {
        if (x - node).abs() > 1e-9 * scale {
            return Err(Error::MalformedDatum { row: i + 1, reason: format!("x = {x} is not the grid node {node}") });
        }
    }
    GridFunction::new(domain.clone(), rows.into_iter().map(|r| r.1).collect())
}

/// Reads a datum CSV and infers a line grid from its abscissae, which must
/// be equispaced to 1e-9 relative.
pub fn read_line_datum_csv(reader: impl Read) -> Result<GridFunction<f64>> {
    let rows = read_rows(reader)?;
    if rows.len() < 3 {
        return Err(Error::MalformedDatum { row: rows.len(), reason: "need at least 3 rows".into() });
    }
    let (x_min, x_max, n) = (rows[0].0, rows[rows.len() - 1].0, rows.len());
    let h = (x_max - x_min) / (n - 1) as f64;
    for (i, (x, _)) in rows.iter().enumerate() {
        let want = x_min + h * i as f64;
        if (x - want).abs() > 1e-9 * (x_max - x_min) {
            return Err(Error::MalformedDatum { row: i + 1, reason: format!("x = {x} breaks the uniform spacing {h}") });
        }
    }
    GridFunction::new(Domain::Line { x_min, x_max, n }, rows.into_iter().map(|r| r.1).collect())
}

/// Rows are numbered from 1 after the header.
fn read_rows(reader: impl Read) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::MalformedDatum { row: 0, reason: e.to_string() })?.clone();
    if header.len() != 2 || &header[0] != "x" || &header[1] != "value" {
        return Err(Error::MalformedDatum { row: 0, reason: "header must be `x,value`".into() });
    }
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::MalformedDatum { row, reason: e.to_string() })?;
        if rec.len() != 2 {
            return Err(Error::MalformedDatum { row, reason: format!("expected 2 fields, got {}", rec.len()) });
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::MalformedDatum { row, reason: format!("`{s}` is not a finite number") })
        };
        let (x, v) = (parse(&rec[0])?, parse(&rec[1])?);
        if let Some(&(prev, _)) = rows.last() {
            if x <= prev {
                return Err(Error::MalformedDatum { row, reason: "x must be strictly increasing".into() });
            }
        }
        rows.push((x, v));
    }
    Ok(rows)
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CheckOutcome;
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::variation::GradNorm;

/// Monotonicity slack for the iterate norms.
const MONOTONE_SLACK: f64 = 1e-9;

/// A continuous piecewise-linear function with its slopes stored per piece,
/// so pieces cut out of a line keep that line's slope exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn from_grid(f: &GridFunction<f64>) -> Self {
        let xs = f.nodes();
        let ys = f.values().to_vec();
        let slopes = (0..xs.len() - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        Self { xs, ys, slopes }
    }

    pub fn breakpoints(&self) -> usize {
        self.xs.len()
    }

    fn piece(&self, x: f64) -> usize {
        self.xs.partition_point(|&xi| xi <= x).clamp(1, self.xs.len() - 1) - 1
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.piece(x);
        self.ys[i] + self.slopes[i] * (x - self.xs[i])
    }

    /// Slope of the piece containing x (the right piece at a breakpoint).
    pub fn slope(&self, x: f64) -> f64 {
        self.slopes[self.piece(x)]
    }

    pub fn derivative_norm(&self, p: GradNorm) -> f64 {
        let pieces = self.slopes.iter().zip(self.xs.windows(2)).map(|(&m, w)| (m, w[1] - w[0]));
        match p {
            GradNorm::L1 => pieces.map(|(m, dx)| m.abs() * dx).sum(),
            GradNorm::L2 => pieces.map(|(m, dx)| m * m * dx).sum::<f64>().sqrt(),
            GradNorm::LInf => pieces.filter(|&(_, dx)| dx > 0.0).fold(0.0, |a, (m, _)| a.max(m.abs())),
        }
    }

    /// max(self, L) for the line L(x) = y0 + s(x − x0), with the crossing
    /// points inserted exactly.
    pub fn max_with_line(&self, x0: f64, y0: f64, s: f64) -> Self {
        let line = |x: f64| y0 + s * (x - x0);
        let mut out = Self { xs: vec![self.xs[0]], ys: vec![self.ys[0].max(line(self.xs[0]))], slopes: Vec::new() };
        let push = |out: &mut Self, x: f64, y: f64, m: f64| {
            if x <= *out.xs.last().unwrap() {
                return;
            }
            if out.slopes.last() == Some(&m) {
                *out.xs.last_mut().unwrap() = x;
                *out.ys.last_mut().unwrap() = y;
            } else {
                out.xs.push(x);
                out.ys.push(y);
                out.slopes.push(m);
            }
        };
        for i in 0..self.slopes.len() {
            let (xa, xb) = (self.xs[i], self.xs[i + 1]);
            let (da, db) = (line(xa) - self.ys[i], line(xb) - self.ys[i + 1]);
            let m = self.slopes[i];
            if da <= 0.0 && db <= 0.0 {
                push(&mut out, xb, self.ys[i + 1], m);
            } else if da >= 0.0 && db >= 0.0 {
                push(&mut out, xb, line(xb), s);
            } else {
                let xc = xa + (xb - xa) * da / (da - db);
                if da < 0.0 {
                    push(&mut out, xc, line(xc), m);
                    push(&mut out, xb, line(xb), s);
                } else {
                    push(&mut out, xc, line(xc), s);
                    push(&mut out, xb, self.ys[i + 1], m);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeCheck {
    /// max_n ‖f′_{n+1}‖_p / ‖f′_n‖_p against 1 + 1e-9.
    pub monotone: CheckOutcome,
    /// ‖g′‖_p against ‖f′‖_p.
    pub bound: CheckOutcome,
    /// ‖f′_n‖_p for n = 0..=N.
    pub norms: Vec<f64>,
    /// sup |g − f_N| at the breakpoints of f_N.
    pub gap: f64,
}

impl EnvelopeCheck {
    pub fn outcomes(&self) -> [CheckOutcome; 2] {
        [self.monotone.clone(), self.bound.clone()]
    }
}

fn hypothesis(h: &'static str, detail: String) -> Error {
    Error::Hypothesis { hypothesis: h, detail }
}

/// Raises f towards the convex g by tangent lines: f₀ = f and
/// f_{n+1} = max(f_n, L_{n+1}), with L_n tangent to g at x_n. The points
/// x_n = α + (β − α)·frac(u + nφ⁻¹), u seeded, are dense in (α, β).
///
/// Needs f = g at both ends, f ≤ g inside, and g discretely convex, all to
/// 1e-12.
pub fn tangent_envelope_check(
    f: &GridFunction<f64>,
    g: &GridFunction<f64>,
    p: f64,
    iterations: usize,
    seed: u64,
    tol: f64,
) -> Result<EnvelopeCheck> {
    let norm = GradNorm::from_p(p)?;
    if !matches!(f.domain(), Domain::Line { .. }) || f.domain() != g.domain() {
        return Err(hypothesis("same interval grid", "f and g must share one line grid".into()));
    }
    let (fv, gv) = (f.values(), g.values());
    let n = fv.len();
    let eps = 1e-12 * (1.0 + g.max_abs());
    if (fv[0] - gv[0]).abs() > eps {
        return Err(hypothesis("f(α) = g(α)", format!("{} vs {}", fv[0], gv[0])));
    }
    if (fv[n - 1] - gv[n - 1]).abs() > eps {
        return Err(hypothesis("f(β) = g(β)", format!("{} vs {}", fv[n - 1], gv[n - 1])));
    }
    if let Some(i) = (1..n - 1).find(|&i| fv[i] > gv[i] + eps) {
        return Err(hypothesis("f ≤ g inside", format!("f − g = {:e} at index {i}", fv[i] - gv[i])));
    }
    if let Some(i) = (1..n - 1).find(|&i| gv[i - 1] - 2.0 * gv[i] + gv[i + 1] < -eps) {
        return Err(hypothesis("g convex", format!("negative second difference at index {i}")));
    }

    let gp = PiecewiseLinear::from_grid(g);
    let mut fn_ = PiecewiseLinear::from_grid(f);
    let (a, b) = (gp.xs[0], gp.xs[n - 1]);
    let offset: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let mut norms = vec![fn_.derivative_norm(norm)];
    let mut worst_ratio = 0.0f64;
    for k in 1..=iterations {
        let x = a + (b - a) * (offset + k as f64 * golden).fract();
        fn_ = fn_.max_with_line(x, gp.value(x), gp.slope(x));
        let (prev, next) = (norms[norms.len() - 1], fn_.derivative_norm(norm));
        if prev > 0.0 {
            worst_ratio = worst_ratio.max(next / prev);
        } else if next > 0.0 {
            worst_ratio = f64::INFINITY;
        }
        norms.push(next);
    }
    let gap = fn_.xs.iter().zip(&fn_.ys).fold(0.0f64, |m, (&x, &y)| m.max((gp.value(x) - y).abs()));

    let p_label = if p.is_infinite() { "inf".to_string() } else { p.to_string() };
    let tag = |o: CheckOutcome| o.with("p", p_label.as_str()).with("iterations", iterations).with("seed", seed).with("n", n);
    let monotone = tag(CheckOutcome::new("lemma7/monotone", worst_ratio, 1.0 + MONOTONE_SLACK, 0.0))
        .with("norms_first_last", vec![norms[0], norms[norms.len() - 1]]);
    let bound = tag(CheckOutcome::new("lemma7/bound", gp.derivative_norm(norm), norms[0], tol)).with("gap", gap);
    Ok(EnvelopeCheck { monotone, bound, norms, gap })
}

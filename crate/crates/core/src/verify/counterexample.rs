use serde::Serialize;

use super::CheckOutcome;
use crate::error::{Error, Result};

/// Scan settings for [`counterexample_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleConfig {
    /// The scan covers (1/α + δ, (d−1)α − δ).
    pub margin: f64,
    pub points: usize,
    /// Step of the central differences in r.
    pub fd_step: f64,
    pub agreement_tol: f64,
    pub golden_tol: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self { margin: 0.05, points: 200, fd_step: 1e-3, agreement_tol: 1e-4, golden_tol: 1e-6 }
    }
}

fn validate(d: usize, alpha: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid("d", "the counterexample needs d ≥ 2"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", "aperture must be positive and finite"));
    }
    if (d as f64 - 1.0) * alpha * alpha <= 1.0 {
        return Err(Error::invalid("alpha", "need (d − 1)α² > 1 for a superharmonic annulus"));
    }
    Ok(())
}

/// u₀(r) = (1 + r²)^{(1−d)/2}.
pub fn counterexample_u0(d: usize, r: f64) -> f64 {
    (1.0 + r * r).powf((1.0 - d as f64) / 2.0)
}

/// The non-tangential maximal function of u₀ with aperture α: u₀ itself for
/// r ≤ 1/α, ((α + r)² / (α² + 1))^{(1−d)/2} beyond.
pub fn counterexample_u_star(d: usize, alpha: f64, r: f64) -> f64 {
    if r <= 1.0 / alpha {
        counterexample_u0(d, r)
    } else {
        ((alpha + r).powi(2) / (alpha * alpha + 1.0)).powf((1.0 - d as f64) / 2.0)
    }
}

/// −Δu* at radius r > 1/α:
/// (d−1)(α²+1)^{(d−1)/2} / (α+r)^{d+1} · ((d−1)α/r − 1).
pub fn counterexample_laplacian(d: usize, alpha: f64, r: f64) -> f64 {
    let k = d as f64 - 1.0;
    k * (alpha * alpha + 1.0).powf(k / 2.0) / (alpha + r).powi(d as i32 + 1) * (k * alpha / r - 1.0)
}

/// −(u″ + (d−1)/r·u′) by central differences of u*.
fn laplacian_fd(d: usize, alpha: f64, r: f64, k: f64) -> f64 {
    let u = |r| counterexample_u_star(d, alpha, r);
    let (um, u0, up) = (u(r - k), u(r), u(r + k));
    -((up - 2.0 * u0 + um) / (k * k) + (d as f64 - 1.0) / r * (up - um) / (2.0 * k))
}

/// Scans the annulus where u* is detached from u₀ yet strictly
/// superharmonic, so the maximal function is not subharmonic there.
///
/// Outcomes: closed-form vs finite-difference agreement, positivity of −Δu*,
/// detachment, the sign change past (d−1)α, the value √5/27 at |x| = 1
/// when d = 2, α = 2, and a subharmonicity assertion that is expected to fail.
pub fn counterexample_scan(d: usize, alpha: f64, config: &CounterexampleConfig) -> Result<Vec<CheckOutcome>> {
    validate(d, alpha)?;
    let k = d as f64 - 1.0;
    let (lo, hi) = (1.0 / alpha + config.margin, k * alpha - config.margin);
    if lo >= hi {
        return Err(Error::invalid("margin", "the margin leaves no annulus to scan"));
    }
    if config.points < 2 || !(config.fd_step > 0.0 && config.fd_step < config.margin) {
        return Err(Error::invalid("config", "need ≥ 2 points and 0 < fd_step < margin"));
    }

    let mut worst_rel = 0.0f64;
    let mut min_lap = f64::INFINITY;
    let mut max_fd = f64::NEG_INFINITY;
    let mut worst_detach = 0.0f64;
    for i in 0..config.points {
        let r = lo + (hi - lo) * i as f64 / (config.points - 1) as f64;
        let exact = counterexample_laplacian(d, alpha, r);
        let fd = laplacian_fd(d, alpha, r, config.fd_step);
        worst_rel = worst_rel.max((fd - exact).abs() / exact.abs());
        min_lap = min_lap.min(exact.min(fd));
        max_fd = max_fd.max(fd);
        worst_detach = worst_detach.max(counterexample_u0(d, r) / counterexample_u_star(d, alpha, r));
    }

    let tag = |o: CheckOutcome| {
        o.with("d", d)
            .with("alpha", alpha)
            .with("interval", vec![lo, hi])
            .with("points", config.points)
            .with("fd_step", config.fd_step)
    };
    let mut out = vec![
        tag(CheckOutcome::new("counterexample/agreement", worst_rel, 0.0, config.agreement_tol)),
        tag(CheckOutcome::new("counterexample/positivity", -min_lap, 0.0, 0.0)).with("min_neg_laplacian", min_lap),
        tag(CheckOutcome::new("counterexample/detached", worst_detach, 1.0, 0.0)),
    ];
    let beyond = k * alpha + config.margin;
    out.push(
        tag(CheckOutcome::new("counterexample/sign-change", counterexample_laplacian(d, alpha, beyond), 0.0, 0.0))
            .with("r", beyond),
    );
    if d == 2 && alpha == 2.0 {
        let (at_one, golden) = (counterexample_laplacian(d, alpha, 1.0), 5f64.sqrt() / 27.0);
        out.push(
            tag(CheckOutcome::new("counterexample/golden", (at_one - golden).abs(), 0.0, config.golden_tol))
                .with("neg_laplacian_at_unit_radius", at_one)
                .with("expected", golden)
                .with("u_star_at_unit_radius", counterexample_u_star(d, alpha, 1.0))
                .with("u0_at_unit_radius", counterexample_u0(d, 1.0)),
        );
    }
    out.push(
        tag(CheckOutcome::new("counterexample/subharmonic", max_fd, 0.0, 0.0))
            .with("claim", "−Δu* ≤ 0 on the annulus")
            .expecting_failure(),
    );
    Ok(out)
}

//! Executable checks of the variation-diminishing inequalities, the
//! convexity of u* on detachment sets, the tangent-envelope lemma, the
//! higher-dimensional counterexample and the kernel identities.
//!
//! Every check yields a [`CheckOutcome`]: a one-sided inequality lhs ≤ rhs
//! with its measured sides and tolerance. The layer runs in `f64`.

mod counterexample;
mod datum;
mod envelope;
mod identities;
mod suite;
mod theorems;

pub use counterexample::{counterexample_laplacian, counterexample_scan, counterexample_u0, counterexample_u_star, CounterexampleConfig};
pub use datum::{read_datum_csv, read_line_datum_csv, Datum, DatumSpec, Generator, Segment, KNOT_CELLS};
pub use envelope::{tangent_envelope_check, EnvelopeCheck, PiecewiseLinear};
pub use identities::{check_kernel_identities, IdentityConfig};
pub use suite::{run_suite, EnvelopeConfig, Report, ReportConfig, Suite, SuiteConfig};
pub use theorems::{
    check_convexity_on_detachment, check_gradient_diminishing, check_variation_diminishing, CheckContext,
};

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    /// lhs ≤ rhs·(1 + tol) + tol.
    pub passed: bool,
    /// The check encodes a claim that is known to be false, so failing is
    /// the expected state.
    pub expected_failure: bool,
    pub metadata: BTreeMap<String, Value>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let passed = lhs <= rhs * (1.0 + tol) + tol;
        Self { name: name.into(), lhs, rhs, tol, passed, expected_failure: false, metadata: BTreeMap::new() }
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expected_failure = true;
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// Passed, or failed as expected.
    pub fn as_expected(&self) -> bool {
        self.passed != self.expected_failure
    }
}

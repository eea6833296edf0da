//! Machine-readable run reports.
//!
//! A report captures everything needed to reproduce a run: the parsed spec
//! with the effective seed, the full verdict including per-scan rank
//! traces, optional oracle results, and wall-clock timings. Re-running the
//! echoed spec produces a byte-identical JSON document apart from the
//! `timings` object.

use serde::{Deserialize, Serialize};

use ctrlexpr::{Outcome, Verdict};

use crate::spec_file::SystemSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Dimension of the dynamical Lie algebra.
    pub lie_algebra_dim: usize,
    /// The operator-controllability bound `d^2 - 1`.
    pub lie_algebra_bound: usize,
    pub operator_controllable: bool,
    /// Orbit-tangent dimension of `|0...0⟩` (pure-state test runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure_state_orbit_dim: Option<usize>,
    /// The pure-state bound `2d - 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure_state_bound: Option<usize>,
    /// The oracle's verdict for the test type that was run.
    pub controllable: bool,
    /// Whether the circuit verdict matches; absent for inconclusive runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees_with_verdict: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Timings {
    pub total_ms: f64,
    pub test_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub spec_path: String,
    /// The parsed spec with the effective seed; feeding it back reproduces
    /// this report.
    pub spec: SystemSpec,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub timings: Timings,
}

impl Report {
    pub fn new(spec_path: String, spec: SystemSpec, verdict: Verdict) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            spec_path,
            spec,
            verdict,
            oracle: None,
            timings: Timings::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    /// Exit code for shells: 0 controllable, 1 not controllable,
    /// 2 inconclusive.
    pub fn exit_code(&self) -> u8 {
        match self.verdict.outcome {
            Outcome::Controllable => 0,
            Outcome::NotControllable => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

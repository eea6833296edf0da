//! System description files.
//!
//! A spec file is a single TOML document:
//!
//! ```toml
//! qubits = 4
//! # auxiliary qubit frequencies in GHz, operator test only (optional)
//! aux_frequencies = [5.37, 5.29, 5.34]
//!
//! [[drift]]
//! pauli = "ZIII"   # one letter per qubit, from {I, X, Y, Z}
//! coeff = -2.70    # energy coefficient
//! unit  = "GHz"    # "GHz" (default) or "MHz"; MHz converts to GHz on load
//!
//! [[controls]]
//! pauli = "IXII"
//! label = "sx1"    # optional
//!
//! [test]
//! type = "PSC"               # "PSC" or "OC"
//! layers = "auto"            # "auto" (minimal count) or an integer
//! max_extra_layers = 11      # optional, default: minimal count
//! resamples = 5              # optional, default 5
//! tolerance = 1e-9           # optional, default 1e-9
//! seed = 7                   # optional, default 0
//! normalize_generators = true # optional, default true
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use ctrlexpr::{ControlSystem, LayerCount, PauliTerm, TestConfig, TestKind};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        source: Box<toml::de::Error>,
    },

    #[error("invalid spec: field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Engine(#[from] ctrlexpr::Error),
}

fn invalid(field: &str, message: impl Into<String>) -> SpecError {
    SpecError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Unit {
    #[default]
    GHz,
    MHz,
}

impl Unit {
    fn to_ghz(self, coeff: f64) -> f64 {
        match self {
            Unit::GHz => coeff,
            Unit::MHz => coeff * 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftTerm {
    pub pauli: String,
    pub coeff: f64,
    #[serde(default)]
    pub unit: Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlTerm {
    pub pauli: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSection {
    #[serde(rename = "type")]
    pub test_type: TestKind,
    #[serde(default)]
    pub layers: LayerCount,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_extra_layers: Option<usize>,
    #[serde(default = "default_resamples")]
    pub resamples: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_normalize")]
    pub normalize_generators: bool,
}

fn default_resamples() -> usize {
    5
}

fn default_tolerance() -> f64 {
    ctrlexpr::DEFAULT_TOLERANCE
}

fn default_normalize() -> bool {
    true
}

/// Parsed and validated system description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_frequencies: Option<Vec<f64>>,
    pub drift: Vec<DriftTerm>,
    pub controls: Vec<ControlTerm>,
    pub test: TestSection,
}

impl SystemSpec {
    pub fn from_str_named(text: &str, path: &str) -> Result<Self, SpecError> {
        let spec: SystemSpec = toml::from_str(text).map_err(|source| SpecError::Parse {
            path: path.to_string(),
            source: Box::new(source),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str_named(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serialization cannot fail")
    }

    fn validate(&self) -> Result<(), SpecError> {
        if self.qubits == 0 {
            return Err(invalid("qubits", "must be >= 1"));
        }
        let check_pauli = |field: &str, pauli: &str| -> Result<(), SpecError> {
            if pauli.len() != self.qubits {
                return Err(invalid(
                    field,
                    format!(
                        "pauli string \"{pauli}\" has length {}, expected {} (one per qubit)",
                        pauli.len(),
                        self.qubits
                    ),
                ));
            }
            if let Some(c) = pauli.chars().find(|c| !matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
                return Err(invalid(
                    field,
                    format!("pauli string \"{pauli}\" contains '{c}' (allowed: I, X, Y, Z)"),
                ));
            }
            Ok(())
        };
        for (k, term) in self.drift.iter().enumerate() {
            let field = format!("drift[{k}].pauli");
            check_pauli(&field, &term.pauli)?;
            if !term.coeff.is_finite() {
                return Err(invalid(&format!("drift[{k}].coeff"), "must be finite"));
            }
        }
        if self.controls.is_empty() {
            return Err(invalid("controls", "at least one control is required"));
        }
        for (k, term) in self.controls.iter().enumerate() {
            check_pauli(&format!("controls[{k}].pauli"), &term.pauli)?;
        }
        if let Some(freqs) = &self.aux_frequencies {
            if freqs.len() != self.qubits {
                return Err(invalid(
                    "aux_frequencies",
                    format!("{} entries for {} qubits", freqs.len(), self.qubits),
                ));
            }
            if freqs.iter().any(|f| !f.is_finite()) {
                return Err(invalid("aux_frequencies", "must be finite"));
            }
        }
        if self.test.resamples < 1 {
            return Err(invalid("test.resamples", "must be >= 1"));
        }
        if !(self.test.tolerance > 0.0 && self.test.tolerance < 1.0) {
            return Err(invalid("test.tolerance", "must lie in (0, 1)"));
        }
        if self.test.layers == LayerCount::Fixed(0) {
            return Err(invalid("test.layers", "must be >= 1 or \"auto\""));
        }
        Ok(())
    }

    /// Assemble the dense control system, converting MHz entries to GHz.
    pub fn to_system(&self) -> Result<ControlSystem, SpecError> {
        let drift_terms: Vec<PauliTerm> = self
            .drift
            .iter()
            .map(|t| PauliTerm::parse(&t.pauli, t.unit.to_ghz(t.coeff)))
            .collect::<ctrlexpr::Result<_>>()?;
        let control_terms: Vec<PauliTerm> = self
            .controls
            .iter()
            .map(|t| PauliTerm::parse(&t.pauli, 1.0))
            .collect::<ctrlexpr::Result<_>>()?;
        let labels: Vec<String> = self
            .controls
            .iter()
            .map(|t| t.label.clone().unwrap_or_else(|| t.pauli.clone()))
            .collect();
        Ok(ControlSystem::from_terms(
            self.qubits,
            &drift_terms,
            &control_terms,
            Some(labels),
        )?)
    }

    /// Test configuration with the file's settings.
    pub fn to_config(&self) -> TestConfig {
        let mut config = TestConfig::new(self.test.test_type, self.test.seed);
        config.n_layers = self.test.layers;
        config.max_extra_layers = self.test.max_extra_layers;
        config.resamples = self.test.resamples;
        config.tolerance = self.test.tolerance;
        config.normalize_generators = self.test.normalize_generators;
        config.aux_frequencies = self.aux_frequencies.clone();
        config
    }
}

/// Parse a spec file into the system and test configuration it describes.
pub fn parse_spec(path: &Path) -> Result<(ControlSystem, TestConfig, SystemSpec), SpecError> {
    let spec = SystemSpec::load(path)?;
    let system = spec.to_system()?;
    let config = spec.to_config();
    Ok((system, config, spec))
}

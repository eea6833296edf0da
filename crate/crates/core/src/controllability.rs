//! Full controllability test loops with layer growth and randomized plateau
//! confirmation, emitting a three-valued verdict.
//!
//! One iteration builds the test circuit at the current layer count, samples
//! parameters uniformly from `[0, 2pi)`, and scans for independent slots. A
//! run ends in one of three ways: the expressivity reaches its target
//! (controllable), a last layer adds no independent slot and fresh random
//! samples confirm the plateau (not controllable), or the layer budget runs
//! out while the expressivity is still growing (inconclusive).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{
    build_oc_circuit, build_psc_circuit, max_entangled_state, min_layers, ParametricCircuit,
    StateVector, TestKind,
};
use crate::error::{Error, Result};
use crate::expressivity::{scan, ExpressivityScan, DEFAULT_TOLERANCE};
use crate::hamiltonian::{extend_bipartite, ControlSystem, C64};

/// Initial circuit state. The operator test always starts from the
/// maximally entangled state, whatever this is set to.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    #[default]
    ComputationalZero,
    MaxEntangled,
    /// Explicit amplitudes as `[re, im]` pairs.
    Custom(Vec<[f64; 2]>),
}

/// Starting layer count: the minimal-layer formula or a fixed number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayerCount {
    #[default]
    Auto,
    Fixed(usize),
}

impl Serialize for LayerCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LayerCount::Auto => s.serialize_str("auto"),
            LayerCount::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for LayerCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Count(usize),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Count(n) => Ok(LayerCount::Fixed(n)),
            Repr::Word(w) if w == "auto" => Ok(LayerCount::Auto),
            Repr::Word(w) => Err(serde::de::Error::custom(format!(
                "layers must be an integer or \"auto\", got \"{w}\""
            ))),
        }
    }
}

fn default_resamples() -> usize {
    5
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn default_normalize() -> bool {
    true
}

/// Everything needed to reproduce one test run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub test_type: TestKind,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub n_layers: LayerCount,
    /// Extra layers allowed beyond the initial count before the run is
    /// declared inconclusive; defaults to the minimal layer count.
    #[serde(default)]
    pub max_extra_layers: Option<usize>,
    /// Fresh random samples drawn to confirm a plateau.
    #[serde(default = "default_resamples")]
    pub resamples: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub seed: u64,
    #[serde(default = "default_normalize")]
    pub normalize_generators: bool,
    /// Auxiliary qubit frequencies (GHz) for the operator test. When absent
    /// the original qubit frequencies are reused verbatim, falling back to
    /// zero when the system does not carry them.
    #[serde(default)]
    pub aux_frequencies: Option<Vec<f64>>,
}

impl TestConfig {
    pub fn new(test_type: TestKind, seed: u64) -> Self {
        Self {
            test_type,
            initial_state: InitialState::default(),
            n_layers: LayerCount::default(),
            max_extra_layers: None,
            resamples: default_resamples(),
            tolerance: default_tolerance(),
            seed,
            normalize_generators: true,
            aux_frequencies: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_layers(mut self, layers: usize) -> Self {
        self.n_layers = LayerCount::Fixed(layers);
        self
    }

    pub fn with_aux_frequencies(mut self, freqs: Vec<f64>) -> Self {
        self.aux_frequencies = Some(freqs);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.resamples < 1 {
            return Err(Error::InvalidArgument("resamples must be >= 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.n_layers == LayerCount::Fixed(0) {
            return Err(Error::InvalidArgument("layer count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Three-valued test outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Controllable,
    NotControllable,
    Inconclusive,
}

impl Outcome {
    /// The 0/1/2 result code of the underlying algorithm: 0 not
    /// controllable, 1 controllable, 2 inconclusive.
    pub fn algorithm_code(self) -> u8 {
        match self {
            Outcome::NotControllable => 0,
            Outcome::Controllable => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Controllable => write!(f, "Controllable"),
            Outcome::NotControllable => write!(f, "NotControllable"),
            Outcome::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Why a scan was run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanRole {
    Primary,
    Resample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub layers: usize,
    pub role: ScanRole,
    pub scan: ExpressivityScan,
}

/// One plateau confirmation: the expressivity of each fresh sample at the
/// same layer count, and whether any of them still grew in the last layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauCheck {
    pub layers: usize,
    pub expr_before_last_layer: usize,
    pub resample_expressivities: Vec<usize>,
    pub grew: bool,
}

/// Verdict with full provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub algorithm_code: u8,
    pub test_type: TestKind,
    pub expressivity_target: usize,
    pub best_expressivity: usize,
    pub layers_used: usize,
    /// One-based layer containing the last independent slot of the decisive
    /// scan.
    pub saturation_layer: Option<usize>,
    pub seed: u64,
    pub scans: Vec<ScanRecord>,
    pub resample_history: Vec<PlateauCheck>,
}

/// Rank of the partial Jacobian truncated at the last layer boundary.
pub fn expressivity_before_last_layer(
    scan: &ExpressivityScan,
    circuit: &ParametricCircuit,
) -> usize {
    scan.rank_before_slot(circuit.last_layer_slot_start())
}

fn saturation_layer(scan: &ExpressivityScan, circuit: &ParametricCircuit) -> Option<usize> {
    scan.independent_slots
        .last()
        .map(|&slot| circuit.layer_of_slot(slot) + 1)
}

fn sample_theta(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect()
}

fn initial_state_for(config: &TestConfig, dim: usize) -> Result<StateVector> {
    match &config.initial_state {
        InitialState::ComputationalZero => Ok(StateVector::computational_zero(dim)),
        InitialState::MaxEntangled => {
            let root = (dim as f64).sqrt().round() as usize;
            if root * root != dim {
                return Err(Error::InvalidArgument(format!(
                    "maximally entangled initial state needs a square dimension, got {dim}"
                )));
            }
            max_entangled_state(root)
        }
        InitialState::Custom(amps) => {
            if amps.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "custom initial state has {} amplitudes, expected {dim}",
                    amps.len()
                )));
            }
            let v = amps.iter().map(|&[re, im]| C64::new(re, im)).collect();
            StateVector::from_amplitudes(nalgebra::DVector::from_vec(v))
        }
    }
}

/// Run the full pure-state or operator controllability test.
pub fn run_test(system: &ControlSystem, config: &TestConfig) -> Result<Verdict> {
    config.validate()?;
    let d = system.dim();
    let m = system.n_controls();
    let (prepared, target) = match config.test_type {
        TestKind::PureState => {
            let sys = if config.normalize_generators {
                system.normalized()
            } else {
                system.clone()
            };
            (sys, 2 * d - 1)
        }
        TestKind::Operator => {
            let aux = match &config.aux_frequencies {
                Some(freqs) => freqs.clone(),
                None => system
                    .frequencies()
                    .map(<[f64]>::to_vec)
                    .unwrap_or_else(|| vec![0.0; system.qubits()]),
            };
            let ext = extend_bipartite(system, &aux)?;
            let ext = if config.normalize_generators {
                ext.normalized()
            } else {
                ext
            };
            (ext, d * d - 1)
        }
    };

    let min_l = min_layers(config.test_type, d, m);
    let initial_layers = match config.n_layers {
        LayerCount::Auto => min_l,
        LayerCount::Fixed(n) => n,
    };
    let layer_budget = initial_layers + config.max_extra_layers.unwrap_or(min_l);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut scans: Vec<ScanRecord> = Vec::new();
    let mut resample_history: Vec<PlateauCheck> = Vec::new();
    let mut best = 0usize;
    let mut layers = initial_layers;

    let finish = |outcome: Outcome,
                  best: usize,
                  layers: usize,
                  saturation: Option<usize>,
                  scans: Vec<ScanRecord>,
                  resample_history: Vec<PlateauCheck>| Verdict {
        outcome,
        algorithm_code: outcome.algorithm_code(),
        test_type: config.test_type,
        expressivity_target: target,
        best_expressivity: best,
        layers_used: layers,
        saturation_layer: saturation,
        seed: config.seed,
        scans,
        resample_history,
    };

    loop {
        let circuit = match config.test_type {
            TestKind::PureState => {
                let psi0 = initial_state_for(config, prepared.dim())?;
                build_psc_circuit(&prepared, layers, psi0)?
            }
            TestKind::Operator => build_oc_circuit(&prepared, layers)?,
        };
        let theta = sample_theta(&mut rng, circuit.n_params());
        let primary = scan(&circuit, &theta, config.tolerance)?;
        best = best.max(primary.expressivity);
        let before_last = expressivity_before_last_layer(&primary, &circuit);
        let saturation = saturation_layer(&primary, &circuit);
        scans.push(ScanRecord {
            layers,
            role: ScanRole::Primary,
            scan: primary.clone(),
        });

        if primary.expressivity >= target {
            return Ok(finish(
                Outcome::Controllable,
                best,
                layers,
                saturation,
                scans,
                resample_history,
            ));
        }

        if primary.expressivity > before_last {
            // The last layer still contributed; grow the circuit.
            if layers + 1 > layer_budget {
                return Ok(finish(
                    Outcome::Inconclusive,
                    best,
                    layers,
                    saturation,
                    scans,
                    resample_history,
                ));
            }
            layers += 1;
            continue;
        }

        // Plateau: confirm with fresh random samples before concluding.
        let mut resample_expressivities = Vec::with_capacity(config.resamples);
        let mut grew = false;
        let mut reached: Option<ExpressivityScan> = None;
        for _ in 0..config.resamples {
            let theta_r = sample_theta(&mut rng, circuit.n_params());
            let fresh = scan(&circuit, &theta_r, config.tolerance)?;
            best = best.max(fresh.expressivity);
            resample_expressivities.push(fresh.expressivity);
            let fresh_before_last = expressivity_before_last_layer(&fresh, &circuit);
            let fresh_grew = fresh.expressivity > fresh_before_last;
            scans.push(ScanRecord {
                layers,
                role: ScanRole::Resample,
                scan: fresh.clone(),
            });
            if fresh.expressivity >= target {
                reached = Some(fresh);
                break;
            }
            if fresh_grew {
                grew = true;
                break;
            }
        }
        resample_history.push(PlateauCheck {
            layers,
            expr_before_last_layer: before_last,
            resample_expressivities,
            grew: grew || reached.is_some(),
        });

        if let Some(fresh) = reached {
            let sat = saturation_layer(&fresh, &circuit);
            return Ok(finish(
                Outcome::Controllable,
                best,
                layers,
                sat,
                scans,
                resample_history,
            ));
        }
        if grew {
            if layers + 1 > layer_budget {
                return Ok(finish(
                    Outcome::Inconclusive,
                    best,
                    layers,
                    saturation,
                    scans,
                    resample_history,
                ));
            }
            layers += 1;
            continue;
        }

        return Ok(finish(
            Outcome::NotControllable,
            best,
            layers,
            saturation,
            scans,
            resample_history,
        ));
    }
}

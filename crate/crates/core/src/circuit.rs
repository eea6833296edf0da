//! Layered parametric rotation circuits and their analytic derivatives.
//!
//! Every gate is a rotation `exp(sign * (-i) * theta/2 * G)` around a
//! Hermitian generator `G`. Generators are eigendecomposed once per
//! circuit, so re-evaluating at a new parameter sample only costs matrix
//! products with exactly unitary factors.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{CMatrix, CVector, ControlSystem, HermitianOperator, C64};

/// Unit-norm tolerance for state vectors supplied to a circuit.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Which controllability test a circuit realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestKind {
    #[serde(rename = "PSC")]
    PureState,
    #[serde(rename = "OC")]
    Operator,
}

impl std::fmt::Display for TestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TestKind::PureState => write!(f, "PSC"),
            TestKind::Operator => write!(f, "OC"),
        }
    }
}

/// Sign applied inside the rotation exponent.
///
/// `Minus` flips the exponent to `exp(+i * theta/2 * G)`; the operator-test
/// auxiliary rotation is expressed this way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One rotation gate: a generator, the parameter slot it reads, and a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSpec {
    pub generator_id: usize,
    pub param_slot: usize,
    pub sign: Sign,
}

/// Complex unit vector in the circuit's Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Wrap amplitudes, requiring unit norm.
    pub fn from_amplitudes(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state norm is {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// `|0...0⟩` in a `dim`-dimensional space.
    pub fn computational_zero(dim: usize) -> Self {
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[0] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// `sum_i 1/sqrt(d) |i⟩ ⊗ |i⟩` over the computational basis, a unit vector
/// in dimension `d^2`.
pub fn max_entangled_state(d: usize) -> Result<StateVector> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "maximally entangled state needs d >= 2, got {d}"
        )));
    }
    let mut amplitudes = CVector::zeros(d * d);
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        amplitudes[i * d + i] = amp;
    }
    StateVector::from_amplitudes(amplitudes)
}

/// Minimum layer count that can reach maximal expressivity:
/// `ceil((2d-1)/(m+1))` for the pure-state test and `ceil((d^2-1)/(m+1))`
/// for the operator test, with `d` the original system's dimension.
pub fn min_layers(test: TestKind, d: usize, m: usize) -> usize {
    let target = match test {
        TestKind::PureState => 2 * d - 1,
        TestKind::Operator => d * d - 1,
    };
    target.div_ceil(m + 1)
}

/// Rotation `exp(sign * (-i) * angle/2 * generator)`, computed by unitary
/// diagonalization of the Hermitian generator.
pub fn rotation(generator: &HermitianOperator, angle: f64, sign: Sign) -> CMatrix {
    let eig = GeneratorEig::new(generator);
    eig.unitary(angle, sign)
}

/// Cached eigendecomposition of one generator.
#[derive(Debug, Clone)]
struct GeneratorEig {
    values: Vec<f64>,
    vectors: CMatrix,
    vectors_adj: CMatrix,
}

impl GeneratorEig {
    fn new(generator: &HermitianOperator) -> Self {
        let eig = nalgebra::SymmetricEigen::new(generator.matrix().clone());
        let vectors_adj = eig.eigenvectors.adjoint();
        Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
            vectors_adj,
        }
    }

    fn phases(&self, angle: f64, sign: Sign) -> Vec<C64> {
        let c = -0.5 * sign.factor() * angle;
        self.values
            .iter()
            .map(|&v| C64::new(0.0, c * v).exp())
            .collect()
    }

    fn unitary(&self, angle: f64, sign: Sign) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (k, phase) in self.phases(angle, sign).into_iter().enumerate() {
            for v in scaled.column_mut(k).iter_mut() {
                *v *= phase;
            }
        }
        &scaled * &self.vectors_adj
    }

    /// Apply the rotation to a vector: `V diag(phases) V† x`.
    fn apply(&self, angle: f64, sign: Sign, x: &CVector) -> CVector {
        let mut w = &self.vectors_adj * x;
        for (wk, phase) in w.iter_mut().zip(self.phases(angle, sign)) {
            *wk *= phase;
        }
        &self.vectors * w
    }

    /// Right-multiply a matrix by the rotation: `M · V diag(phases) V†`.
    fn apply_right(&self, angle: f64, sign: Sign, m: &CMatrix) -> CMatrix {
        let mut mv = m * &self.vectors;
        for (k, phase) in self.phases(angle, sign).into_iter().enumerate() {
            for v in mv.column_mut(k).iter_mut() {
                *v *= phase;
            }
        }
        &mv * &self.vectors_adj
    }
}

/// Initial state plus ordered rotation gates over a shared generator table.
///
/// Gates are applied left to right (`gates[0]` first). Parameter slots may
/// be shared between gates; in the operator-test circuit the drift slot of
/// each layer is read by two gates.
#[derive(Debug, Clone)]
pub struct ParametricCircuit {
    generators: Vec<HermitianOperator>,
    eigs: Vec<GeneratorEig>,
    gates: Vec<GateSpec>,
    initial_state: StateVector,
    n_params: usize,
    layer_boundaries: Vec<usize>,
}

impl ParametricCircuit {
    pub fn new(
        generators: Vec<HermitianOperator>,
        gates: Vec<GateSpec>,
        initial_state: StateVector,
        n_params: usize,
        layer_boundaries: Vec<usize>,
    ) -> Result<Self> {
        let dim = initial_state.dim();
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator dim {} does not match state dim {dim}",
                    g.dim()
                )));
            }
        }
        let mut slot_used = vec![false; n_params];
        for gate in &gates {
            if gate.generator_id >= generators.len() {
                return Err(Error::IndexOutOfRange(format!(
                    "generator_id {} out of range ({} generators)",
                    gate.generator_id,
                    generators.len()
                )));
            }
            if gate.param_slot >= n_params {
                return Err(Error::IndexOutOfRange(format!(
                    "param_slot {} out of range ({n_params} slots)",
                    gate.param_slot
                )));
            }
            slot_used[gate.param_slot] = true;
        }
        if let Some(unused) = slot_used.iter().position(|&u| !u) {
            return Err(Error::InvalidArgument(format!(
                "parameter slot {unused} is not referenced by any gate"
            )));
        }
        let mut boundaries = layer_boundaries;
        if boundaries.is_empty() {
            boundaries.push(0);
        }
        if boundaries[0] != 0 || boundaries.iter().any(|&b| b > gates.len()) {
            return Err(Error::InvalidArgument(
                "layer boundaries must start at gate 0 and stay in range".into(),
            ));
        }
        let eigs = generators.iter().map(GeneratorEig::new).collect();
        Ok(Self {
            generators,
            eigs,
            gates,
            initial_state,
            n_params,
            layer_boundaries: boundaries,
        })
    }

    pub fn dim(&self) -> usize {
        self.initial_state.dim()
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn n_layers(&self) -> usize {
        self.layer_boundaries.len()
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial_state
    }

    /// Gate indices at which layers start.
    pub fn layer_boundaries(&self) -> &[usize] {
        &self.layer_boundaries
    }

    /// Parameter slot at which each layer starts.
    pub fn layer_slot_starts(&self) -> Vec<usize> {
        self.layer_boundaries
            .iter()
            .map(|&g| self.gates[g].param_slot)
            .collect()
    }

    /// First parameter slot of the last layer.
    pub fn last_layer_slot_start(&self) -> usize {
        *self.layer_slot_starts().last().expect("at least one layer")
    }

    /// Zero-based layer containing a parameter slot.
    pub fn layer_of_slot(&self, slot: usize) -> usize {
        let starts = self.layer_slot_starts();
        starts.iter().rposition(|&s| s <= slot).unwrap_or(0)
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_params {
            return Err(Error::DimensionMismatch(format!(
                "theta has length {}, circuit has {} parameter slots",
                theta.len(),
                self.n_params
            )));
        }
        Ok(())
    }

    /// Apply the full gate sequence to the initial state.
    pub fn evaluate(&self, theta: &[f64]) -> Result<StateVector> {
        self.check_theta(theta)?;
        let mut state = self.initial_state.amplitudes().clone();
        for gate in &self.gates {
            let eig = &self.eigs[gate.generator_id];
            state = eig.apply(theta[gate.param_slot], gate.sign, &state);
        }
        Ok(StateVector { amplitudes: state })
    }

    /// Analytic derivative of the final state with respect to slot `k`.
    ///
    /// For each gate reading slot `k`, the factor `sign * (-i/2) * G` is
    /// inserted right after that gate in the product; contributions from
    /// shared slots add up by the product rule.
    pub fn partial_derivative(&self, theta: &[f64], k: usize) -> Result<CVector> {
        self.check_theta(theta)?;
        if k >= self.n_params {
            return Err(Error::IndexOutOfRange(format!(
                "slot {k} out of range ({} slots)",
                self.n_params
            )));
        }
        let dim = self.dim();
        let mut total = CVector::zeros(dim);
        for (g, gate) in self.gates.iter().enumerate() {
            if gate.param_slot != k {
                continue;
            }
            let mut state = self.initial_state.amplitudes().clone();
            for lead in &self.gates[..=g] {
                let eig = &self.eigs[lead.generator_id];
                state = eig.apply(theta[lead.param_slot], lead.sign, &state);
            }
            let insert = C64::new(0.0, -0.5 * gate.sign.factor());
            let mut deriv = self.generators[gate.generator_id].matrix() * state;
            deriv *= insert;
            for trail in &self.gates[g + 1..] {
                let eig = &self.eigs[trail.generator_id];
                deriv = eig.apply(theta[trail.param_slot], trail.sign, &deriv);
            }
            total += deriv;
        }
        Ok(total)
    }

    /// All `n_params` derivatives in one sweep.
    ///
    /// Prefix states are cached on the forward pass and a running suffix
    /// product is built on the backward pass, so the whole set costs O(n)
    /// gate applications instead of O(n^2).
    pub fn all_partial_derivatives(&self, theta: &[f64]) -> Result<Vec<CVector>> {
        self.check_theta(theta)?;
        let dim = self.dim();
        let n_gates = self.gates.len();

        let mut prefix: Vec<CVector> = Vec::with_capacity(n_gates + 1);
        prefix.push(self.initial_state.amplitudes().clone());
        for gate in &self.gates {
            let eig = &self.eigs[gate.generator_id];
            let next = eig.apply(theta[gate.param_slot], gate.sign, prefix.last().unwrap());
            prefix.push(next);
        }

        let mut derivs = vec![CVector::zeros(dim); self.n_params];
        let mut suffix: CMatrix = DMatrix::identity(dim, dim);
        for g in (0..n_gates).rev() {
            let gate = &self.gates[g];
            let insert = C64::new(0.0, -0.5 * gate.sign.factor());
            let mut seed = self.generators[gate.generator_id].matrix() * &prefix[g + 1];
            seed *= insert;
            derivs[gate.param_slot] += &suffix * seed;
            let eig = &self.eigs[gate.generator_id];
            suffix = eig.apply_right(theta[gate.param_slot], gate.sign, &suffix);
        }
        Ok(derivs)
    }
}

/// Pure-state test circuit: `n_layers` layers, each a drift rotation
/// followed by one rotation per control, all on consecutive fresh slots.
pub fn build_psc_circuit(
    system: &ControlSystem,
    n_layers: usize,
    psi0: StateVector,
) -> Result<ParametricCircuit> {
    if n_layers == 0 {
        return Err(Error::InvalidArgument("n_layers must be >= 1".into()));
    }
    if psi0.dim() != system.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dim {} does not match system dim {}",
            psi0.dim(),
            system.dim()
        )));
    }
    let m = system.n_controls();
    let mut generators = Vec::with_capacity(m + 1);
    generators.push(system.drift().clone());
    generators.extend(system.controls().iter().cloned());

    let mut gates = Vec::with_capacity(n_layers * (m + 1));
    let mut layer_boundaries = Vec::with_capacity(n_layers);
    for layer in 0..n_layers {
        layer_boundaries.push(gates.len());
        let base = layer * (m + 1);
        gates.push(GateSpec {
            generator_id: 0,
            param_slot: base,
            sign: Sign::Plus,
        });
        for k in 0..m {
            gates.push(GateSpec {
                generator_id: 1 + k,
                param_slot: base + 1 + k,
                sign: Sign::Plus,
            });
        }
    }
    ParametricCircuit::new(
        generators,
        gates,
        psi0,
        n_layers * (m + 1),
        layer_boundaries,
    )
}

/// Operator-test circuit on the extended register, starting from the
/// maximally entangled state.
///
/// Each layer applies the system-drift rotation and the auxiliary free
/// rotation on one shared slot, then the extended control rotations. The
/// auxiliary gate is `exp(+i * theta/2 * sum_j omega_j/2 sigma_z^(j+q))`,
/// realized as a `Sign::Minus` rotation around the negated auxiliary drift.
pub fn build_oc_circuit(extended: &ControlSystem, n_layers: usize) -> Result<ParametricCircuit> {
    if n_layers == 0 {
        return Err(Error::InvalidArgument("n_layers must be >= 1".into()));
    }
    let split = extended.split_drift().ok_or(Error::MissingSplitDrift)?;
    if !extended.qubits().is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "extended system must have an even qubit count".into(),
        ));
    }
    let d_orig = 1usize << (extended.qubits() / 2);
    let psi0 = max_entangled_state(d_orig)?;

    let m = extended.n_controls();
    let mut generators = Vec::with_capacity(m + 2);
    generators.push(split.system_part.clone());
    generators.push(split.aux_part.negated());
    generators.extend(extended.controls().iter().cloned());

    let mut gates = Vec::with_capacity(n_layers * (m + 2));
    let mut layer_boundaries = Vec::with_capacity(n_layers);
    for layer in 0..n_layers {
        layer_boundaries.push(gates.len());
        let base = layer * (m + 1);
        gates.push(GateSpec {
            generator_id: 0,
            param_slot: base,
            sign: Sign::Plus,
        });
        gates.push(GateSpec {
            generator_id: 1,
            param_slot: base,
            sign: Sign::Minus,
        });
        for k in 0..m {
            gates.push(GateSpec {
                generator_id: 2 + k,
                param_slot: base + 1 + k,
                sign: Sign::Plus,
            });
        }
    }
    ParametricCircuit::new(
        generators,
        gates,
        psi0,
        n_layers * (m + 1),
        layer_boundaries,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{embedded_pauli, Pauli, PauliTerm};

    fn pauli_op(label: &str) -> HermitianOperator {
        PauliTerm::parse(label, 1.0)
            .unwrap()
            .dense_matrix()
            .unwrap()
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
    }

    #[test]
    fn rotation_zero_angle_is_identity() {
        let u = rotation(&pauli_op("X"), 0.0, Sign::Plus);
        assert!(max_abs(&(&u - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn rotation_two_pi_is_minus_identity() {
        let u = rotation(&pauli_op("X"), 2.0 * std::f64::consts::PI, Sign::Plus);
        let minus_id = CMatrix::identity(2, 2) * C64::new(-1.0, 0.0);
        assert!(max_abs(&(&u - minus_id)) < 1e-10);
    }

    #[test]
    fn rotation_z_pi_gives_diag_phases() {
        let u = rotation(&pauli_op("Z"), std::f64::consts::PI, Sign::Plus);
        assert!((u[(0, 0)] - C64::new(0.0, -1.0)).norm() < 1e-10);
        assert!((u[(1, 1)] - C64::new(0.0, 1.0)).norm() < 1e-10);
        assert!(u[(0, 1)].norm() < 1e-12);
        assert!(u[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn rotation_sign_minus_conjugates_exponent() {
        let g = pauli_op("Z");
        let plus = rotation(&g, 0.7, Sign::Plus);
        let minus = rotation(&g, 0.7, Sign::Minus);
        assert!(max_abs(&(&plus * &minus - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn evaluate_zero_gates_returns_initial_state() {
        let psi0 = StateVector::computational_zero(4);
        let circuit = ParametricCircuit::new(
            vec![HermitianOperator::zero(4)],
            vec![],
            psi0.clone(),
            0,
            vec![],
        )
        .unwrap();
        let out = circuit.evaluate(&[]).unwrap();
        assert_eq!(out.amplitudes(), psi0.amplitudes());
    }

    #[test]
    fn evaluate_all_zero_theta_is_identity() {
        let sys = two_qubit_system();
        let circuit = build_psc_circuit(&sys, 3, StateVector::computational_zero(4)).unwrap();
        let out = circuit.evaluate(&vec![0.0; circuit.n_params()]).unwrap();
        let mut expected = CVector::zeros(4);
        expected[0] = C64::new(1.0, 0.0);
        assert!((out.amplitudes() - expected).norm() < 1e-12);
    }

    #[test]
    fn evaluate_rejects_wrong_theta_length() {
        let sys = two_qubit_system();
        let circuit = build_psc_circuit(&sys, 2, StateVector::computational_zero(4)).unwrap();
        assert!(circuit.evaluate(&[0.0]).is_err());
    }

    #[test]
    fn derivative_of_single_x_rotation_at_zero() {
        let circuit = ParametricCircuit::new(
            vec![pauli_op("X")],
            vec![GateSpec {
                generator_id: 0,
                param_slot: 0,
                sign: Sign::Plus,
            }],
            StateVector::computational_zero(2),
            1,
            vec![0],
        )
        .unwrap();
        let d = circuit.partial_derivative(&[0.0], 0).unwrap();
        assert!((d[0] - C64::new(0.0, 0.0)).norm() < 1e-14);
        assert!((d[1] - C64::new(0.0, -0.5)).norm() < 1e-14);
    }

    #[test]
    fn batch_derivatives_match_single_slot_path() {
        let sys = two_qubit_system();
        let circuit = build_psc_circuit(&sys, 3, StateVector::computational_zero(4)).unwrap();
        let theta: Vec<f64> = (0..circuit.n_params())
            .map(|k| 0.3 + 0.41 * k as f64)
            .collect();
        let all = circuit.all_partial_derivatives(&theta).unwrap();
        for (k, batch) in all.iter().enumerate() {
            let single = circuit.partial_derivative(&theta, k).unwrap();
            assert!((batch - &single).norm() < 1e-12, "slot {k}");
        }
    }

    #[test]
    fn psc_layout_matches_layer_structure() {
        let sys = two_qubit_system(); // m = 2
        let circuit = build_psc_circuit(&sys, 4, StateVector::computational_zero(4)).unwrap();
        assert_eq!(circuit.n_params(), 12);
        assert_eq!(circuit.n_gates(), 12);
        assert_eq!(circuit.layer_boundaries(), &[0, 3, 6, 9]);
        assert_eq!(circuit.layer_slot_starts(), vec![0, 3, 6, 9]);
        assert_eq!(circuit.gates()[0].generator_id, 0);
        assert_eq!(circuit.gates()[1].generator_id, 1);
        assert_eq!(circuit.layer_of_slot(7), 2);
    }

    #[test]
    fn psc_minimal_one_layer_one_control() {
        let drift = vec![PauliTerm::parse("Z", -2.7).unwrap()];
        let controls = vec![embedded_pauli(1, 0, Pauli::X).unwrap()];
        let sys = ControlSystem::from_terms(1, &drift, &controls, None).unwrap();
        let circuit = build_psc_circuit(&sys, 1, StateVector::computational_zero(2)).unwrap();
        assert_eq!(circuit.n_params(), 2);
        assert_eq!(circuit.n_gates(), 2);
        assert_eq!(circuit.gates()[0].generator_id, 0);
        assert_eq!(circuit.gates()[1].generator_id, 1);
    }

    #[test]
    fn oc_circuit_counts_and_shared_slots() {
        let sys = one_qubit_system();
        let ext = crate::hamiltonian::extend_bipartite(&sys, &[5.0]).unwrap();
        let circuit = build_oc_circuit(&ext, 1).unwrap();
        assert_eq!(circuit.dim(), 4);
        assert_eq!(circuit.n_params(), 2);
        assert_eq!(circuit.n_gates(), 3);
        assert_eq!(circuit.gates()[0].param_slot, 0);
        assert_eq!(circuit.gates()[1].param_slot, 0);
        assert_eq!(circuit.gates()[1].sign, Sign::Minus);
        assert_eq!(circuit.gates()[2].param_slot, 1);
    }

    #[test]
    fn oc_circuit_zero_aux_reduces_to_plain_drift_rotation() {
        let sys = one_qubit_system();
        let ext = crate::hamiltonian::extend_bipartite(&sys, &[0.0]).unwrap();
        let circuit = build_oc_circuit(&ext, 2).unwrap();
        // the aux gate is exp of the zero operator: evaluating must match a
        // circuit without the aux gates entirely
        let theta: Vec<f64> = vec![0.4, 1.3, 2.2, 0.9];
        let out = circuit.evaluate(&theta).unwrap();

        let mut generators = vec![ext.split_drift().unwrap().system_part.clone()];
        generators.extend(ext.controls().iter().cloned());
        let mut gates = Vec::new();
        for layer in 0..2 {
            gates.push(GateSpec {
                generator_id: 0,
                param_slot: 2 * layer,
                sign: Sign::Plus,
            });
            gates.push(GateSpec {
                generator_id: 1,
                param_slot: 2 * layer + 1,
                sign: Sign::Plus,
            });
        }
        let bare = ParametricCircuit::new(
            generators,
            gates,
            max_entangled_state(2).unwrap(),
            4,
            vec![0, 2],
        )
        .unwrap();
        let expected = bare.evaluate(&theta).unwrap();
        assert!((out.amplitudes() - expected.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn oc_aux_rotation_matches_free_evolution_of_aux_drift() {
        // evolving the extended drift for time t = theta/2 must equal the
        // layer's two shared-slot gates applied in sequence
        let sys = one_qubit_system();
        let ext = crate::hamiltonian::extend_bipartite(&sys, &[5.37]).unwrap();
        let circuit = build_oc_circuit(&ext, 1).unwrap();
        let theta = [0.83, 0.0];
        let out = circuit.evaluate(&theta).unwrap();

        let u = rotation(ext.drift(), theta[0], Sign::Plus);
        let expected = &u * max_entangled_state(2).unwrap().amplitudes();
        assert!((out.amplitudes() - expected).norm() < 1e-10);
    }

    #[test]
    fn max_entangled_examples() {
        let bell = max_entangled_state(2).unwrap();
        let amp = 1.0 / 2.0_f64.sqrt();
        assert!((bell.amplitudes()[0].re - amp).abs() < 1e-15);
        assert!((bell.amplitudes()[3].re - amp).abs() < 1e-15);
        assert!(bell.amplitudes()[1].norm() < 1e-15);
        assert!(bell.amplitudes()[2].norm() < 1e-15);

        let big = max_entangled_state(8).unwrap();
        let nonzero = big.amplitudes().iter().filter(|z| z.norm() > 1e-12).count();
        assert_eq!(nonzero, 8);

        for d in [2, 4, 8, 16, 32, 64] {
            assert!((max_entangled_state(d).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn min_layers_formulas() {
        assert_eq!(min_layers(TestKind::PureState, 16, 2), 11);
        assert_eq!(min_layers(TestKind::PureState, 16, 3), 8);
        assert_eq!(min_layers(TestKind::Operator, 8, 3), 16);
        assert_eq!(min_layers(TestKind::PureState, 2, 1), 2);
    }

    fn one_qubit_system() -> ControlSystem {
        let drift = vec![PauliTerm::parse("Z", -2.7).unwrap()];
        let controls = vec![embedded_pauli(1, 0, Pauli::X).unwrap()];
        ControlSystem::from_terms(1, &drift, &controls, None).unwrap()
    }

    fn two_qubit_system() -> ControlSystem {
        let drift = vec![
            PauliTerm::parse("ZI", -2.7).unwrap(),
            PauliTerm::parse("IZ", -2.65).unwrap(),
            PauliTerm::parse("XX", 0.17).unwrap(),
        ];
        let controls = vec![
            embedded_pauli(2, 0, Pauli::X).unwrap(),
            embedded_pauli(2, 1, Pauli::Y).unwrap(),
        ];
        ControlSystem::from_terms(2, &drift, &controls, None).unwrap()
    }
}

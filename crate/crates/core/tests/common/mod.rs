//! Shared helpers for the integration tests: independent oracles (a
//! Taylor-series propagator and finite differences) and the example systems
//! used throughout, kept separate from the production code paths they
//! check.
//!
//! Each test target uses its own subset of these.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctrlexpr::{
    embedded_pauli, CMatrix, CVector, ControlSystem, ParametricCircuit, Pauli, PauliTerm, Sign, C64,
};

/// Matrix exponential by scaling-and-squaring with a plain Taylor series;
/// deliberately a different algorithm than the eigendecomposition used by
/// the production gates.
pub fn taylor_expm(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let norm = m.iter().fold(0.0_f64, |a, z| a.max(z.norm())) * d as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / C64::new(2.0_f64.powi(squarings as i32), 0.0);
    let mut result = CMatrix::identity(d, d);
    let mut term = CMatrix::identity(d, d);
    for k in 1..=24 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Sequential gate-by-gate product using the Taylor propagator.
pub fn naive_evaluate(circuit: &ParametricCircuit, theta: &[f64]) -> CVector {
    let mut state = circuit.initial_state().amplitudes().clone();
    for gate in circuit.gates() {
        let sign = match gate.sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        };
        let arg = circuit.generators()[gate.generator_id].matrix()
            * C64::new(0.0, -0.5 * sign * theta[gate.param_slot]);
        state = taylor_expm(&arg) * state;
    }
    state
}

/// Central finite-difference Jacobian in the stacked Re/Im layout.
pub fn finite_difference_jacobian(
    circuit: &ParametricCircuit,
    theta: &[f64],
    h: f64,
) -> DMatrix<f64> {
    let d = circuit.dim();
    let n = circuit.n_params();
    let mut jac = DMatrix::zeros(2 * d, n);
    for k in 0..n {
        let mut plus = theta.to_vec();
        let mut minus = theta.to_vec();
        plus[k] += h;
        minus[k] -= h;
        let fp = circuit.evaluate(&plus).unwrap();
        let fm = circuit.evaluate(&minus).unwrap();
        for r in 0..d {
            let diff = (fp.amplitudes()[r] - fm.amplitudes()[r]) / C64::new(2.0 * h, 0.0);
            jac[(r, k)] = diff.re;
            jac[(d + r, k)] = diff.im;
        }
    }
    jac
}

/// Drift of a linear qubit array: `-omega_j/2 Z_j` plus nearest-neighbour
/// couplings of the given axis.
pub fn array_drift_terms(omega: &[f64], couplings: &[f64], axis: Pauli) -> Vec<PauliTerm> {
    let q = omega.len();
    assert_eq!(couplings.len(), q - 1);
    let mut terms = Vec::new();
    for (j, &w) in omega.iter().enumerate() {
        let mut t = embedded_pauli(q, j, Pauli::Z).unwrap();
        t.weight = -w / 2.0;
        terms.push(t);
    }
    for (k, &strength) in couplings.iter().enumerate() {
        let mut axes = vec![Pauli::I; q];
        axes[k] = axis;
        axes[k + 1] = axis;
        terms.push(PauliTerm::new(axes, strength));
    }
    terms
}

pub fn system_with_controls(
    drift_terms: &[PauliTerm],
    qubits: usize,
    controls: &[(usize, Pauli)],
) -> ControlSystem {
    let control_terms: Vec<PauliTerm> = controls
        .iter()
        .map(|&(pos, axis)| embedded_pauli(qubits, pos, axis).unwrap())
        .collect();
    ControlSystem::from_terms(qubits, drift_terms, &control_terms, None).unwrap()
}

/// Four-qubit array with XX couplings (frequencies in GHz, couplings
/// converted from MHz).
pub fn four_qubit_array(controls: &[(usize, Pauli)]) -> ControlSystem {
    let drift = array_drift_terms(&[5.40, 5.30, 5.42, 5.37], &[0.170, 0.220, 0.150], Pauli::X);
    system_with_controls(&drift, 4, controls)
}

/// Three-qubit array with ZZ couplings, for the operator-test examples.
pub fn three_qubit_array(controls: &[(usize, Pauli)]) -> ControlSystem {
    let drift = array_drift_terms(&[5.40, 5.30, 5.42], &[0.170, 0.220], Pauli::Z);
    system_with_controls(&drift, 3, controls)
}

/// Auxiliary qubit frequencies used with [`three_qubit_array`].
pub const THREE_QUBIT_AUX: [f64; 3] = [5.37, 5.29, 5.34];

/// Random system over `qubits` qubits: a drift of a few weighted Pauli
/// strings plus single-Pauli-string controls.
pub fn random_pauli_system(
    rng: &mut ChaCha8Rng,
    qubits: usize,
    n_drift_terms: usize,
    n_controls: usize,
) -> ControlSystem {
    let random_axes = |rng: &mut ChaCha8Rng| -> Vec<Pauli> {
        loop {
            let axes: Vec<Pauli> = (0..qubits)
                .map(|_| match rng.random_range(0..4) {
                    0 => Pauli::I,
                    1 => Pauli::X,
                    2 => Pauli::Y,
                    _ => Pauli::Z,
                })
                .collect();
            if axes.iter().any(|&p| p != Pauli::I) {
                return axes;
            }
        }
    };
    let drift: Vec<PauliTerm> = (0..n_drift_terms)
        .map(|_| PauliTerm::new(random_axes(rng), rng.random::<f64>() * 2.0 - 1.0))
        .collect();
    let controls: Vec<PauliTerm> = (0..n_controls)
        .map(|_| PauliTerm::new(random_axes(rng), 1.0))
        .collect();
    ControlSystem::from_terms(qubits, &drift, &controls, None).unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_theta(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect()
}

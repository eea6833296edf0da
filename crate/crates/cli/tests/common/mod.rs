//! Helpers for the acceptance suite: a finite-difference Jacobian oracle
//! and randomized Pauli systems, independent of the library's derivative
//! path.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctrlexpr::{ControlSystem, ParametricCircuit, Pauli, PauliTerm, C64};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_theta(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect()
}

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

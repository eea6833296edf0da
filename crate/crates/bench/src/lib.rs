//! Benchmark fixtures: the two qubit arrays the engine is exercised on.

use ctrlexpr::{embedded_pauli, ControlSystem, Pauli, PauliTerm};

fn array_drift(omega: &[f64], couplings: &[f64], axis: Pauli) -> Vec<PauliTerm> {
    let q = omega.len();
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

/// Four-qubit XX-coupled array with X drives on qubits 1 and 2.
pub fn four_qubit_system() -> ControlSystem {
    let drift = array_drift(&[5.40, 5.30, 5.42, 5.37], &[0.170, 0.220, 0.150], Pauli::X);
    let controls = vec![
        embedded_pauli(4, 1, Pauli::X).unwrap(),
        embedded_pauli(4, 2, Pauli::X).unwrap(),
    ];
    ControlSystem::from_terms(4, &drift, &controls, None).unwrap()
}

/// Three-qubit ZZ-coupled array with X, Y, X drives.
pub fn three_qubit_system() -> ControlSystem {
    let drift = array_drift(&[5.40, 5.30, 5.42], &[0.170, 0.220], Pauli::Z);
    let controls = vec![
        embedded_pauli(3, 0, Pauli::X).unwrap(),
        embedded_pauli(3, 1, Pauli::Y).unwrap(),
        embedded_pauli(3, 2, Pauli::X).unwrap(),
    ];
    ControlSystem::from_terms(3, &drift, &controls, None).unwrap()
}

/// Auxiliary frequencies paired with [`three_qubit_system`].
pub const AUX_FREQUENCIES: [f64; 3] = [5.37, 5.29, 5.34];

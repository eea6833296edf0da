//! Numerical engine for deciding pure-state and operator controllability of
//! driven qubit arrays.
//!
//! The test builds a layered parametric rotation circuit from a system's
//! drift and control operators, measures the circuit's dimensional
//! expressivity by rank analysis of its real Jacobian, and concludes:
//!
//! - expressivity `2d - 1` on the original register means every state is
//!   reachable (pure-state controllable);
//! - expressivity `d^2 - 1` on a doubled register, starting from a
//!   maximally entangled state, means every `SU(d)` gate is implementable
//!   (operator controllable);
//! - a final layer of redundant parameters, confirmed over several fresh
//!   random parameter sets, means the bound will never be reached.
//!
//! A brute-force Lie-algebra rank oracle ([`lie_oracle`]) cross-validates
//! the circuit verdicts on small systems.
//!
//! # Example
//!
//! ```
//! use ctrlexpr::{
//!     embedded_pauli, run_test, ControlSystem, Outcome, Pauli, PauliTerm, TestConfig,
//!     TestKind,
//! };
//!
//! // single qubit: drift -2.7 GHz Z, one X control
//! let drift = vec![PauliTerm::parse("Z", -2.7).unwrap()];
//! let controls = vec![embedded_pauli(1, 0, Pauli::X).unwrap()];
//! let system = ControlSystem::from_terms(1, &drift, &controls, None).unwrap();
//!
//! let verdict = run_test(&system, &TestConfig::new(TestKind::PureState, 42)).unwrap();
//! assert_eq!(verdict.outcome, Outcome::Controllable);
//! ```

pub mod circuit;
pub mod controllability;
pub mod error;
pub mod expressivity;
pub mod hamiltonian;
pub mod lie_oracle;

pub use circuit::{
    build_oc_circuit, build_psc_circuit, max_entangled_state, min_layers, rotation, GateSpec,
    ParametricCircuit, Sign, StateVector, TestKind,
};
pub use controllability::{
    expressivity_before_last_layer, run_test, InitialState, LayerCount, Outcome, PlateauCheck,
    ScanRecord, ScanRole, TestConfig, Verdict,
};
pub use error::{Error, Result};
pub use expressivity::{
    jacobian, numeric_rank, s_matrix, scan, scan_jacobian, ExpressivityScan, Jacobian, SMatrix,
    DEFAULT_TOLERANCE,
};
pub use hamiltonian::{
    assemble, embedded_pauli, extend_bipartite, frequencies_from_terms, CMatrix, CVector,
    ControlSystem, HermitianOperator, Pauli, PauliTerm, SplitDrift, C64,
};
pub use lie_oracle::{
    close_algebra, density_matrix, generate_algebra, operator_controllable,
    pure_state_controllable, pure_state_orbit_dimension, AlgebraBasis, DEFAULT_RESIDUAL_TOL,
};

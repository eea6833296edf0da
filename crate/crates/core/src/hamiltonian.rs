//! Hamiltonians as weighted Pauli strings and the control systems built
//! from them.
//!
//! A drift plus a list of control operators defines a [`ControlSystem`],
//!
//!   H(t) = H_0 + sum_j u_j(t) H_j,
//!
//! with every operator traceless and Hermitian. All matrices are dense;
//! the target scale is small qubit arrays (d <= 64), where dense
//! eigendecompositions dominate the runtime anyway.
//!
//! Qubit 0 is the leftmost (most significant) tensor factor, so basis
//! index `b` of `|b⟩` reads as the bit string `b` left to right.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Absolute tolerance for Hermiticity and trace checks on assembled operators.
pub const OPERATOR_TOL: f64 = 1e-12;

/// Single-qubit Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidArgument(format!(
                "unknown Pauli label '{other}' (expected one of I, X, Y, Z)"
            ))),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Dense 2x2 matrix of this Pauli.
    pub fn matrix(self) -> CMatrix {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => CMatrix::from_row_slice(2, 2, &[one, zero, zero, one]),
            Pauli::X => CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
        }
    }
}

/// A real-weighted tensor product of single-qubit Paulis, e.g. `0.17 * XXII`.
///
/// Weights are plain energy coefficients in GHz with hbar = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub axes: Vec<Pauli>,
    pub weight: f64,
}

impl PauliTerm {
    pub fn new(axes: Vec<Pauli>, weight: f64) -> Self {
        Self { axes, weight }
    }

    /// Parse a term from a string label like `"ZIII"`.
    pub fn parse(label: &str, weight: f64) -> Result<Self> {
        let axes = label
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>>>()?;
        if axes.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".to_string()));
        }
        Ok(Self { axes, weight })
    }

    pub fn qubits(&self) -> usize {
        self.axes.len()
    }

    /// True if every axis is the identity.
    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|&p| p == Pauli::I)
    }

    pub fn label(&self) -> String {
        self.axes.iter().map(|p| p.label()).collect()
    }

    /// Weight times the Kronecker product of the named Paulis, qubit 0 as
    /// the leftmost factor.
    pub fn dense_matrix(&self) -> Result<HermitianOperator> {
        if self.axes.is_empty() {
            return Err(Error::InvalidArgument(
                "PauliTerm must act on at least one qubit".to_string(),
            ));
        }
        let mut m = self.axes[0].matrix();
        for p in &self.axes[1..] {
            m = m.kronecker(&p.matrix());
        }
        let w = C64::new(self.weight, 0.0);
        HermitianOperator::new(m * w)
    }
}

/// A single-qubit Pauli embedded in a `qubits`-wide register.
pub fn embedded_pauli(qubits: usize, position: usize, pauli: Pauli) -> Result<PauliTerm> {
    if position >= qubits {
        return Err(Error::IndexOutOfRange(format!(
            "qubit {position} out of range for {qubits} qubits"
        )));
    }
    let mut axes = vec![Pauli::I; qubits];
    axes[position] = pauli;
    Ok(PauliTerm::new(axes, 1.0))
}

/// Dense operator on the register, validated Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Wrap a dense matrix, checking squareness and Hermiticity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let max_dev = hermiticity_deviation(&matrix);
        if max_dev > OPERATOR_TOL {
            return Err(Error::NotHermitian { max_dev });
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().norm() <= OPERATOR_TOL * self.dim() as f64
    }

    /// Largest |eigenvalue|; zero for the zero operator.
    pub fn spectral_norm(&self) -> f64 {
        if self.matrix.iter().all(|z| z.norm() == 0.0) {
            return 0.0;
        }
        let eig = nalgebra::SymmetricEigen::new(self.matrix.clone());
        eig.eigenvalues.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
    }

    /// Rescaled copy with unit spectral norm; the zero operator is returned
    /// unchanged.
    pub fn normalized(&self) -> Self {
        let norm = self.spectral_norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.scaled(1.0 / norm)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * C64::new(factor, 0.0),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add operators of dim {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// Kronecker product with the identity on `aux_dim` extra levels,
    /// acting trivially on the second factor.
    pub fn tensor_identity(&self, aux_dim: usize) -> Self {
        let id = CMatrix::identity(aux_dim, aux_dim);
        Self {
            matrix: self.matrix.kronecker(&id),
        }
    }
}

fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().fold(0.0_f64, |a, z| a.max(z.norm()))
}

/// Sum of `dense_matrix` over `terms`; every term must act on `qubits` qubits.
pub fn assemble(terms: &[PauliTerm], qubits: usize) -> Result<HermitianOperator> {
    let dim = 1usize << qubits;
    let mut total = CMatrix::zeros(dim, dim);
    for term in terms {
        if term.qubits() != qubits {
            return Err(Error::DimensionMismatch(format!(
                "term '{}' acts on {} qubits, expected {}",
                term.label(),
                term.qubits(),
                qubits
            )));
        }
        total += term.dense_matrix()?.matrix();
    }
    HermitianOperator::new(total)
}

/// Qubit frequencies read off single-qubit Z terms: a drift term
/// `-omega_j/2 * Z_j` yields `omega_j`. Qubits without a Z term get 0.
pub fn frequencies_from_terms(terms: &[PauliTerm], qubits: usize) -> Vec<f64> {
    let mut freqs = vec![0.0; qubits];
    for term in terms {
        let non_identity: Vec<usize> = (0..term.qubits())
            .filter(|&k| term.axes[k] != Pauli::I)
            .collect();
        if let [k] = non_identity[..] {
            if term.axes[k] == Pauli::Z && k < qubits {
                freqs[k] += -2.0 * term.weight;
            }
        }
    }
    freqs
}

/// The two separately retrievable parts of an extended system's drift.
///
/// `system_part` is the original drift tensored with the identity on the
/// auxiliary qubits; `aux_part` is the free-qubit drift of the auxiliaries,
/// `sum_j (-omega_j/2) sigma_z^(j+q)`. The operator-test circuit applies
/// them as two gates sharing one parameter.
#[derive(Debug, Clone)]
pub struct SplitDrift {
    pub system_part: HermitianOperator,
    pub aux_part: HermitianOperator,
}

/// Drift operator plus ordered control operators over `qubits` qubits.
#[derive(Debug, Clone)]
pub struct ControlSystem {
    qubits: usize,
    drift: HermitianOperator,
    controls: Vec<HermitianOperator>,
    labels: Vec<String>,
    split_drift: Option<SplitDrift>,
    frequencies: Option<Vec<f64>>,
}

impl ControlSystem {
    /// Build a system from validated operators. All operators must be
    /// traceless Hermitian of dimension `2^qubits` and there must be at
    /// least one control.
    pub fn new(
        qubits: usize,
        drift: HermitianOperator,
        controls: Vec<HermitianOperator>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidArgument("qubit count must be >= 1".into()));
        }
        if controls.is_empty() {
            return Err(Error::InvalidArgument(
                "a control system needs at least one control operator".into(),
            ));
        }
        let dim = 1usize << qubits;
        for op in std::iter::once(&drift).chain(controls.iter()) {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "operator has dim {}, expected {dim}",
                    op.dim()
                )));
            }
            if !op.is_traceless() {
                return Err(Error::NotTraceless {
                    trace: op.trace().norm(),
                });
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != controls.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} labels for {} controls",
                        l.len(),
                        controls.len()
                    )));
                }
                l
            }
            None => (0..controls.len()).map(|k| format!("H{}", k + 1)).collect(),
        };
        Ok(Self {
            qubits,
            drift,
            controls,
            labels,
            split_drift: None,
            frequencies: None,
        })
    }

    /// Build a system from Pauli-term lists: a drift as weighted terms and
    /// one unit-weight term per control.
    pub fn from_terms(
        qubits: usize,
        drift_terms: &[PauliTerm],
        control_terms: &[PauliTerm],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let drift = assemble(drift_terms, qubits)?;
        let controls = control_terms
            .iter()
            .map(|t| {
                if t.qubits() != qubits {
                    return Err(Error::DimensionMismatch(format!(
                        "control '{}' acts on {} qubits, expected {qubits}",
                        t.label(),
                        t.qubits()
                    )));
                }
                t.dense_matrix()
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = labels.or_else(|| Some(control_terms.iter().map(|t| t.label()).collect()));
        let mut sys = Self::new(qubits, drift, controls, labels)?;
        sys.frequencies = Some(frequencies_from_terms(drift_terms, qubits));
        Ok(sys)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.qubits
    }

    /// Full drift operator (both parts summed for extended systems).
    pub fn drift(&self) -> &HermitianOperator {
        &self.drift
    }

    pub fn controls(&self) -> &[HermitianOperator] {
        &self.controls
    }

    pub fn n_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn split_drift(&self) -> Option<&SplitDrift> {
        self.split_drift.as_ref()
    }

    /// Qubit frequencies when the system was built from Pauli terms.
    pub fn frequencies(&self) -> Option<&[f64]> {
        self.frequencies.as_deref()
    }

    pub fn with_frequencies(mut self, freqs: Vec<f64>) -> Result<Self> {
        if freqs.len() != self.qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} frequencies for {} qubits",
                freqs.len(),
                self.qubits
            )));
        }
        self.frequencies = Some(freqs);
        Ok(self)
    }

    /// Copy with every generator (drift, split parts, controls) rescaled to
    /// unit spectral norm. Positive rescaling of a generator leaves the
    /// generated Lie algebra, hence any controllability verdict, unchanged.
    pub fn normalized(&self) -> Self {
        let split_drift = self.split_drift.as_ref().map(|s| SplitDrift {
            system_part: s.system_part.normalized(),
            aux_part: s.aux_part.normalized(),
        });
        let drift = match &split_drift {
            Some(s) => s
                .system_part
                .add(&s.aux_part)
                .expect("split parts share dimension"),
            None => self.drift.normalized(),
        };
        Self {
            qubits: self.qubits,
            drift,
            controls: self.controls.iter().map(|c| c.normalized()).collect(),
            labels: self.labels.clone(),
            split_drift,
            frequencies: self.frequencies.clone(),
        }
    }
}

/// Double the register with one auxiliary qubit per system qubit.
///
/// The extended drift keeps its two parts separately retrievable: part A is
/// `drift ⊗ 1` on qubits `0..q-1`, part B is `sum_j (-omega_j/2) sigma_z^(j+q)`
/// on the auxiliaries. Controls become `H_k ⊗ 1`.
pub fn extend_bipartite(system: &ControlSystem, aux_frequencies: &[f64]) -> Result<ControlSystem> {
    let q = system.qubits();
    if aux_frequencies.len() != q {
        return Err(Error::DimensionMismatch(format!(
            "{} auxiliary frequencies for {} qubits",
            aux_frequencies.len(),
            q
        )));
    }
    let d = system.dim();
    let system_part = system.drift().tensor_identity(d);
    let aux_terms: Vec<PauliTerm> = aux_frequencies
        .iter()
        .enumerate()
        .map(|(j, &omega)| {
            let mut term = embedded_pauli(2 * q, q + j, Pauli::Z)?;
            term.weight = -omega / 2.0;
            Ok(term)
        })
        .collect::<Result<Vec<_>>>()?;
    let aux_part = assemble(&aux_terms, 2 * q)?;
    let drift = system_part.add(&aux_part)?;
    let controls: Vec<HermitianOperator> = system
        .controls()
        .iter()
        .map(|c| c.tensor_identity(d))
        .collect();
    let labels = system.labels().to_vec();
    let mut extended = ControlSystem::new(2 * q, drift, controls, Some(labels))?;
    extended.split_drift = Some(SplitDrift {
        system_part,
        aux_part,
    });
    Ok(extended)
}

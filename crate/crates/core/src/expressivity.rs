//! Jacobians, Gram matrices, numeric ranks, and the independent-parameter
//! scan that yields the dimensional expressivity of a circuit.
//!
//! The scan walks parameter slots in order: slot 0 is independent when its
//! derivative is nonzero, and slot k+1 is independent when it raises the
//! rank of the partial Jacobian. The rank trace is maintained incrementally
//! with modified Gram-Schmidt on the Jacobian columns; independent SVD
//! routes reproduce the same trace in the tests.
//!
//! The Gram matrices `S_n = J_n^T J_n` are materialized through
//! [`s_matrix`] for reporting and for parity with the measurement-based
//! variant of the analysis. Note that squaring halves the representable
//! dynamic range: on larger systems the smallest genuine singular values of
//! `S_n` can fall below double-precision resolution, which is why the rank
//! decisions are made on the Jacobian's own scale.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};

/// Default relative threshold below which singular values count as zero.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Real 2d x n matrix stacking Re and Im parts of the state derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian {
    matrix: DMatrix<f64>,
    hilbert_dim: usize,
}

impl Jacobian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn n_columns(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn column(&self, k: usize) -> DVector<f64> {
        self.matrix.column(k).into_owned()
    }

    /// Copy with one column removed (a parameter frozen at its value).
    pub fn without_column(&self, k: usize) -> Result<Jacobian> {
        if k >= self.n_columns() {
            return Err(Error::IndexOutOfRange(format!(
                "column {k} out of range ({} columns)",
                self.n_columns()
            )));
        }
        Ok(Jacobian {
            matrix: self.matrix.clone().remove_column(k),
            hilbert_dim: self.hilbert_dim,
        })
    }
}

/// Real Jacobian of the circuit at `theta`: column k holds Re(d_k C)
/// in rows 0..d-1 and Im(d_k C) in rows d..2d-1.
pub fn jacobian(circuit: &ParametricCircuit, theta: &[f64]) -> Result<Jacobian> {
    let d = circuit.dim();
    let n = circuit.n_params();
    let derivs = circuit.all_partial_derivatives(theta)?;
    let mut matrix = DMatrix::zeros(2 * d, n);
    for (k, dv) in derivs.iter().enumerate() {
        for r in 0..d {
            matrix[(r, k)] = dv[r].re;
            matrix[(d + r, k)] = dv[r].im;
        }
    }
    Ok(Jacobian {
        matrix,
        hilbert_dim: d,
    })
}

/// Symmetric positive semidefinite Gram matrix `J^T J` of a partial
/// Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    matrix: DMatrix<f64>,
}

impl SMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Gram matrix of the first `n` Jacobian columns.
pub fn s_matrix(jac: &Jacobian, n: usize) -> Result<SMatrix> {
    if n > jac.n_columns() {
        return Err(Error::IndexOutOfRange(format!(
            "requested {n} columns, Jacobian has {}",
            jac.n_columns()
        )));
    }
    let part = jac.matrix().columns(0, n);
    Ok(SMatrix {
        matrix: part.transpose() * part,
    })
}

/// Count of singular values above `tol` relative to the largest one;
/// the zero matrix has rank 0.
pub fn numeric_rank(s: &SMatrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must lie in (0, 1), got {tol}"
        )));
    }
    if s.order() == 0 {
        return Ok(0);
    }
    let svd = s.matrix.clone().svd(false, false);
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &v| a.max(v));
    let threshold = tol * sigma_max;
    Ok(svd
        .singular_values
        .iter()
        .filter(|&&v| v > threshold)
        .count())
}

/// Outcome of one independent-parameter scan at a fixed parameter sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressivityScan {
    /// Slots whose columns raised the rank, in scan order.
    pub independent_slots: Vec<usize>,
    /// Rank of the partial Jacobian after each slot.
    pub rank_trace: Vec<usize>,
    /// Final rank, the dimensional expressivity at this sample.
    pub expressivity: usize,
    /// The parameter sample the scan was run at.
    pub theta: Vec<f64>,
    /// Relative rank threshold used.
    pub tolerance: f64,
}

impl ExpressivityScan {
    /// Rank right before the first slot of the last layer; the quantity the
    /// layer-growth comparison is made against.
    pub fn rank_before_slot(&self, slot: usize) -> usize {
        if slot == 0 {
            0
        } else {
            self.rank_trace[slot - 1]
        }
    }
}

/// Scan the slots of `circuit` at `theta`.
pub fn scan(circuit: &ParametricCircuit, theta: &[f64], tol: f64) -> Result<ExpressivityScan> {
    let jac = jacobian(circuit, theta)?;
    scan_jacobian(&jac, theta, tol)
}

/// Scan an already-assembled Jacobian column by column.
///
/// A column is independent when its norm exceeds `tol` and its residual
/// after projection onto the span of the previous independent columns
/// exceeds `tol` times its own norm. Projection runs twice
/// (reorthogonalization) to keep the basis orthonormal at machine
/// precision.
pub fn scan_jacobian(jac: &Jacobian, theta: &[f64], tol: f64) -> Result<ExpressivityScan> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let n = jac.n_columns();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut independent_slots = Vec::new();
    let mut rank_trace = Vec::with_capacity(n);
    for k in 0..n {
        let col = jac.column(k);
        let col_norm = col.norm();
        let mut residual = col;
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dot(&residual);
                residual.axpy(-coeff, b, 1.0);
            }
        }
        let res_norm = residual.norm();
        if col_norm > tol && res_norm > tol * col_norm {
            residual /= res_norm;
            basis.push(residual);
            independent_slots.push(k);
        }
        rank_trace.push(basis.len());
    }
    let expressivity = basis.len();
    Ok(ExpressivityScan {
        independent_slots,
        rank_trace,
        expressivity,
        theta: theta.to_vec(),
        tolerance: tol,
    })
}

//! Brute-force Lie-algebra rank oracle.
//!
//! The dynamical Lie algebra is generated from `{i H_0, i H_1, ..., i H_m}`
//! by nested commutators, orthonormalized under the Hilbert-Schmidt inner
//! product `tr(A^dag B)/d`. Its dimension decides operator controllability
//! (`dim = d^2 - 1`), and the span of `[rho_0, L]` gives the tangent
//! dimension of the state orbit, deciding pure-state controllability
//! (`dim = 2d - 2`).
//!
//! This is the classical cross-check the circuit tests are validated
//! against; it terminates because the dimension is bounded by `d^2 - 1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::{CMatrix, ControlSystem, C64};

/// Absolute residual threshold for accepting a new basis element, applied
/// after the parent elements have been normalized.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

/// Hilbert-Schmidt inner product `Re tr(A^dag B) / d`, normalized so that
/// element norms stay O(1) regardless of dimension.
fn hs_inner(a: &CMatrix, b: &CMatrix, d: usize) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        acc += x.re * y.re + x.im * y.im;
    }
    acc / d as f64
}

fn hs_norm(a: &CMatrix, d: usize) -> f64 {
    hs_inner(a, a, d).sqrt()
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Subtract the projection onto `basis` (two passes).
fn project_out(candidate: &mut CMatrix, basis: &[CMatrix], d: usize) {
    for _ in 0..2 {
        for e in basis {
            let coeff = hs_inner(e, candidate, d);
            if coeff != 0.0 {
                let c = C64::new(coeff, 0.0);
                candidate.zip_apply(e, |r, ev| *r -= c * ev);
            }
        }
    }
}

/// Orthonormal basis of a matrix Lie algebra, with the nesting depth at
/// which each element was produced.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    elements: Vec<CMatrix>,
    generation: Vec<usize>,
    hilbert_dim: usize,
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn generation(&self) -> &[usize] {
        &self.generation
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// Upper bound `d^2 - 1` for traceless skew-Hermitian algebras.
    pub fn max_dim(&self) -> usize {
        self.hilbert_dim * self.hilbert_dim - 1
    }
}

/// Close a set of skew-Hermitian seeds under commutation.
///
/// Each round commutes the previous round's additions against everything
/// older (older pairs were already processed); candidates are projected in
/// parallel against the frozen basis and survivors are orthonormalized
/// serially, keeping the result deterministic.
pub fn close_algebra(seeds: &[CMatrix], tol: f64) -> Result<AlgebraBasis> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "algebra closure needs at least one seed element".into(),
        ));
    }
    let d = seeds[0].nrows();
    for s in seeds {
        if s.nrows() != d || s.ncols() != d {
            return Err(Error::DimensionMismatch(
                "all seed elements must be square matrices of one dimension".into(),
            ));
        }
    }
    let max_dim = d * d - 1;

    let mut elements: Vec<CMatrix> = Vec::new();
    let mut generation: Vec<usize> = Vec::new();
    for seed in seeds {
        if elements.len() >= max_dim {
            break;
        }
        let mut cand = seed.clone();
        project_out(&mut cand, &elements, d);
        let norm = hs_norm(&cand, d);
        if norm > tol {
            cand /= C64::new(norm, 0.0);
            elements.push(cand);
            generation.push(0);
        }
    }

    let mut frontier_start = 0;
    while frontier_start < elements.len() && elements.len() < max_dim {
        let frontier_end = elements.len();
        let pairs: Vec<(usize, usize)> = (frontier_start..frontier_end)
            .flat_map(|a| (0..a).map(move |b| (a, b)))
            .collect();

        // Commutators and the first projection run against the basis as it
        // stood at the start of the round.
        let frozen = elements.clone();
        let survivors: Vec<(usize, CMatrix)> = pairs
            .par_iter()
            .filter_map(|&(a, b)| {
                let mut cand = commutator(&frozen[a], &frozen[b]);
                if hs_norm(&cand, d) <= tol {
                    return None;
                }
                project_out(&mut cand, &frozen, d);
                if hs_norm(&cand, d) <= tol {
                    return None;
                }
                let gen = generation[a].max(generation[b]) + 1;
                Some((gen, cand))
            })
            .collect();

        for (gen, mut cand) in survivors {
            if elements.len() >= max_dim {
                break;
            }
            // Re-project against elements added within this round.
            project_out(&mut cand, &elements[frontier_end..], d);
            let norm = hs_norm(&cand, d);
            if norm > tol {
                cand /= C64::new(norm, 0.0);
                elements.push(cand);
                generation.push(gen);
            }
        }
        frontier_start = frontier_end;
    }

    Ok(AlgebraBasis {
        elements,
        generation,
        hilbert_dim: d,
    })
}

/// Dynamical Lie algebra of a control system.
pub fn generate_algebra(system: &ControlSystem, tol: f64) -> Result<AlgebraBasis> {
    let i = C64::new(0.0, 1.0);
    let mut seeds = vec![system.drift().matrix() * i];
    for c in system.controls() {
        seeds.push(c.matrix() * i);
    }
    close_algebra(&seeds, tol)
}

/// True when the dynamical Lie algebra fills `su(d)`.
pub fn operator_controllable(system: &ControlSystem, tol: f64) -> Result<bool> {
    let basis = generate_algebra(system, tol)?;
    Ok(basis.dim() == basis.max_dim())
}

/// Dimension of `span{[rho_0, b] : b in L}`, the tangent space of the
/// state orbit at `rho_0`.
pub fn pure_state_orbit_dimension(
    system: &ControlSystem,
    rho0: &CMatrix,
    tol: f64,
) -> Result<usize> {
    let d = system.dim();
    if rho0.nrows() != d || rho0.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "density matrix is {}x{}, system dim is {d}",
            rho0.nrows(),
            rho0.ncols()
        )));
    }
    let herm_dev = (rho0 - rho0.adjoint())
        .iter()
        .fold(0.0_f64, |a, z| a.max(z.norm()));
    if herm_dev > 1e-9 {
        return Err(Error::NotHermitian { max_dev: herm_dev });
    }
    let purity_dev = (rho0 * rho0 - rho0)
        .iter()
        .fold(0.0_f64, |a, z| a.max(z.norm()));
    if purity_dev > 1e-9 || (rho0.trace() - C64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::InvalidState(
            "rho0 must be a pure-state density matrix".into(),
        ));
    }

    let algebra = generate_algebra(system, tol)?;
    let mut span: Vec<CMatrix> = Vec::new();
    for b in algebra.elements() {
        let mut cand = commutator(rho0, b);
        project_out(&mut cand, &span, d);
        let norm = hs_norm(&cand, d);
        if norm > tol {
            cand /= C64::new(norm, 0.0);
            span.push(cand);
        }
    }
    Ok(span.len())
}

/// Pure-state rank condition: the state orbit through `rho_0` has full
/// dimension `2d - 2`.
pub fn pure_state_controllable(system: &ControlSystem, rho0: &CMatrix, tol: f64) -> Result<bool> {
    let dim = pure_state_orbit_dimension(system, rho0, tol)?;
    Ok(dim == 2 * system.dim() - 2)
}

/// `|psi⟩⟨psi|` for a pure state.
pub fn density_matrix(state: &crate::circuit::StateVector) -> CMatrix {
    let v = state.amplitudes();
    v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::StateVector;
    use crate::hamiltonian::{embedded_pauli, Pauli, PauliTerm};

    fn single_qubit_zx() -> ControlSystem {
        let drift = vec![PauliTerm::parse("Z", -2.7).unwrap()];
        let controls = vec![embedded_pauli(1, 0, Pauli::X).unwrap()];
        ControlSystem::from_terms(1, &drift, &controls, None).unwrap()
    }

    #[test]
    fn single_qubit_generates_su2() {
        let basis = generate_algebra(&single_qubit_zx(), DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(basis.dim(), 3);
        assert_eq!(basis.max_dim(), 3);
        assert!(operator_controllable(&single_qubit_zx(), DEFAULT_RESIDUAL_TOL).unwrap());
    }

    #[test]
    fn basis_is_orthonormal_and_closed() {
        let basis = generate_algebra(&single_qubit_zx(), DEFAULT_RESIDUAL_TOL).unwrap();
        let d = basis.hilbert_dim();
        for (i, a) in basis.elements().iter().enumerate() {
            for (j, b) in basis.elements().iter().enumerate() {
                let ip = hs_inner(a, b, d);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-10, "({i},{j}) -> {ip}");
            }
        }
        for a in basis.elements() {
            for b in basis.elements() {
                let mut c = commutator(a, b);
                project_out(&mut c, basis.elements(), d);
                assert!(hs_norm(&c, d) < 1e-8);
            }
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let basis = generate_algebra(&single_qubit_zx(), DEFAULT_RESIDUAL_TOL).unwrap();
        let again = close_algebra(basis.elements(), DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(again.dim(), basis.dim());
    }

    #[test]
    fn scale_invariance_of_dimension() {
        let sys = single_qubit_zx();
        let scaled = ControlSystem::new(
            1,
            sys.drift().scaled(17.0),
            vec![sys.controls()[0].scaled(0.003)],
            None,
        )
        .unwrap();
        let a = generate_algebra(&sys, DEFAULT_RESIDUAL_TOL).unwrap();
        let b = generate_algebra(&scaled, DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(a.dim(), b.dim());
    }

    #[test]
    fn single_qubit_pure_state_orbit_dimension() {
        let sys = single_qubit_zx();
        let rho0 = density_matrix(&StateVector::computational_zero(2));
        let dim = pure_state_orbit_dimension(&sys, &rho0, DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(dim, 2);
        assert!(pure_state_controllable(&sys, &rho0, DEFAULT_RESIDUAL_TOL).unwrap());
    }

    #[test]
    fn commuting_controls_give_abelian_algebra() {
        let drift = vec![PauliTerm::parse("ZI", 1.0).unwrap()];
        let controls = vec![PauliTerm::parse("IZ", 1.0).unwrap()];
        let sys = ControlSystem::from_terms(2, &drift, &controls, None).unwrap();
        let basis = generate_algebra(&sys, DEFAULT_RESIDUAL_TOL).unwrap();
        assert_eq!(basis.dim(), 2);
        assert!(!operator_controllable(&sys, DEFAULT_RESIDUAL_TOL).unwrap());
    }

    #[test]
    fn rejects_mixed_density_matrix() {
        let sys = single_qubit_zx();
        let rho = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(pure_state_orbit_dimension(&sys, &rho, DEFAULT_RESIDUAL_TOL).is_err());
    }
}

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::DenseOperator;
use crate::error::{Error, Result};
use crate::statevec::StateVector;

const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// `exp(−iHt/ℏ)` through a Hermitian eigendecomposition computed once.
#[derive(Clone, Debug)]
pub struct HermitianPropagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
    hbar: f64,
}

impl HermitianPropagator {
    pub fn new(h: &DenseOperator, hbar: f64) -> Result<Self> {
        let deviation = h.hermiticity_deviation();
        if deviation.is_nan() || deviation >= HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian { deviation });
        }
        // Symmetrize so the solver sees an exactly Hermitian input.
        let m = h.matrix();
        let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
            hbar,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn propagate(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.dim() != self.eigenvalues.len() {
            return Err(Error::DimensionMismatch {
                left: psi0.dim(),
                right: self.eigenvalues.len(),
            });
        }
        let v = DVector::from_column_slice(psi0.amplitudes());
        let mut coeffs = self.eigenvectors.ad_mul(&v);
        for (c, e) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= Complex64::cis(-e * t / self.hbar);
        }
        StateVector::from_amplitudes((&self.eigenvectors * coeffs).as_slice().to_vec())
    }
}

/// `exp(−iHt/ℏ)·ψ₀`.
pub fn exact_propagate(h: &DenseOperator, psi0: &StateVector, t: f64, hbar: f64) -> Result<StateVector> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: psi0.dim(),
            right: h.dim(),
        });
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    HermitianPropagator::new(h, hbar)?.propagate(psi0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{Pauli, PauliTerm, SpinSystem};
    use crate::oracle::dense_spin_hamiltonian;

    #[test]
    fn zero_time_is_identity() {
        let h = DenseOperator::identity(2);
        let psi = StateVector::basis(2, 3).unwrap();
        assert_eq!(exact_propagate(&h, &psi, 0.0, 1.0).unwrap(), psi);
    }

    #[test]
    fn diagonal_generator() {
        let e = [0.3, -1.1, 2.0, 0.7];
        let h = DenseOperator::new(2, DMatrix::from_diagonal(&DVector::from_iterator(4, e.iter().map(|&x| Complex64::new(x, 0.0))))).unwrap();
        let psi = StateVector::from_amplitudes(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let (t, hbar) = (1.7, 0.9);
        let out = exact_propagate(&h, &psi, t, hbar).unwrap();
        for (a, ei) in out.amplitudes().iter().zip(e) {
            assert!((a - Complex64::from_polar(0.5, -ei * t / hbar)).norm() < 1e-13);
        }
    }

    #[test]
    fn rabi_quarter_period() {
        let sys = SpinSystem::new(1, vec![PauliTerm::single(1.0, 0, Pauli::X).unwrap()], 1.0).unwrap();
        let h = dense_spin_hamiltonian(&sys).unwrap();
        let out = exact_propagate(&h, &StateVector::basis(1, 0).unwrap(), std::f64::consts::FRAC_PI_2, 1.0).unwrap();
        assert!(out.amplitudes()[0].norm() < 1e-14);
        assert!((out.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_mismatch() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let h = DenseOperator::new(1, m).unwrap();
        let psi = StateVector::basis(1, 0).unwrap();
        assert!(matches!(exact_propagate(&h, &psi, 1.0, 1.0), Err(Error::NonHermitian { .. })));
        let psi2 = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            exact_propagate(&DenseOperator::identity(1), &psi2, 1.0, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

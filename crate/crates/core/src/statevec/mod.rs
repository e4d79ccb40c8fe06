//! Dense complex state-vector engine.
//!
//! A state over `n` qubits is stored as `2^n` contiguous `Complex64`
//! amplitudes. Qubit `q` contributes bit `(b >> q) & 1` of basis index `b`,
//! so qubit 0 is the least significant bit and a register of `k` qubits
//! reads directly as an unsigned integer.

mod counts;
mod gate;
mod sampling;

pub use counts::GateCounts;
pub use gate::{GateOp, Matrix2};
pub use sampling::{sample_counts, Histogram, RNG_ALGORITHM};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default emulator cap: 2^26 complex doubles is 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Norm tolerance accepted by operations that require a normalized input.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// A contiguous block of qubits, e.g. the `k` qubits holding one particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Register {
    pub start_qubit: usize,
    pub width: usize,
}

impl Register {
    pub fn new(start_qubit: usize, width: usize) -> Self {
        Self { start_qubit, width }
    }

    pub fn end(&self) -> usize {
        self.start_qubit + self.width
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn mask(&self) -> usize {
        (self.dim() - 1) << self.start_qubit
    }

    /// Value the register's bits read in basis index `b`.
    #[inline]
    pub fn read(&self, b: usize) -> usize {
        (b >> self.start_qubit) & (self.dim() - 1)
    }

    pub fn qubit(&self, i: usize) -> usize {
        self.start_qubit + i
    }

    pub fn check(&self, num_qubits: usize) -> Result<()> {
        if self.width == 0 || self.end() > num_qubits {
            return Err(Error::RegisterOutOfRange {
                start: self.start_qubit,
                end: self.end(),
                num_qubits,
            });
        }
        Ok(())
    }

    pub fn overlaps(&self, other: &Register) -> bool {
        self.start_qubit < other.end() && other.start_qubit < self.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|b⟩` on `n` qubits, under the default cap.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::basis_with_cap(num_qubits, index, DEFAULT_QUBIT_CAP)
    }

    pub fn basis_with_cap(num_qubits: usize, index: usize, cap: usize) -> Result<Self> {
        check_cap(num_qubits, cap)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two `2^n`, `n ≥ 1`.
    /// No normalization is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::validation(format!(
                "amplitude count {dim} is not a power of two ≥ 2"
            )));
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Σ |amp|², summed in ascending index order.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. A zero vector is left untouched.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE || !norm_sqr.is_finite() {
            return Err(Error::UnnormalizedState { norm_sqr });
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// `amp_b ← amp_b · exp(i·phase(b))` for every basis index.
    ///
    /// Phases are evaluated lazily, one index at a time. On `NonFinitePhase`
    /// the amplitudes below the offending index have already been rotated and
    /// the state should be discarded.
    pub fn apply_diagonal_phase<F>(&mut self, mut phase: F) -> Result<()>
    where
        F: FnMut(usize) -> f64,
    {
        for (b, amp) in self.amps.iter_mut().enumerate() {
            let theta = phase(b);
            if !theta.is_finite() {
                return Err(Error::NonFinitePhase {
                    index: b,
                    value: theta,
                });
            }
            *amp *= Complex64::cis(theta);
        }
        Ok(())
    }

    /// Diagonal phase that factors through one register: `table[j]` is the
    /// phase (radians) applied wherever the register reads `j`.
    pub fn apply_register_phase(&mut self, reg: Register, table: &[f64]) -> Result<()> {
        reg.check(self.num_qubits)?;
        if table.len() != reg.dim() {
            return Err(Error::DimensionMismatch {
                left: table.len(),
                right: reg.dim(),
            });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, t)| !t.is_finite()) {
            return Err(Error::NonFinitePhase { index, value });
        }
        let factors: Vec<Complex64> = table.iter().map(|&t| Complex64::cis(t)).collect();
        for (b, amp) in self.amps.iter_mut().enumerate() {
            *amp *= factors[reg.read(b)];
        }
        Ok(())
    }

    /// Probability of each value of `reg`, marginalized over all other qubits.
    pub fn marginal_probabilities(&self, reg: Register) -> Result<Vec<f64>> {
        reg.check(self.num_qubits)?;
        let mut probs = vec![0.0; reg.dim()];
        for (b, amp) in self.amps.iter().enumerate() {
            probs[reg.read(b)] += amp.norm_sqr();
        }
        Ok(probs)
    }

    /// ⟨self|other⟩ = Σ conj(self_b)·other_b, accumulated in ascending order.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance ‖self − other‖.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest elementwise |self_b − other_b|.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

pub fn check_cap(num_qubits: usize, cap: usize) -> Result<()> {
    if num_qubits > cap {
        return Err(Error::CapExceeded {
            requested: num_qubits,
            cap,
        });
    }
    if num_qubits == 0 {
        return Err(Error::validation("a state needs at least one qubit"));
    }
    Ok(())
}

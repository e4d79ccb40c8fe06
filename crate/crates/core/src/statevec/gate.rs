use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::StateVector;
use crate::error::{Error, Result};

/// Row-major 2×2 complex matrix, `m[row][col]`.
pub type Matrix2 = [[Complex64; 2]; 2];

const UNITARITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    SingleQubit { target: usize, matrix: Matrix2 },
    /// diag(1, 1, 1, e^{i·angle}) on (control, target); symmetric in its qubits.
    ControlledPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap { a: usize, b: usize },
}

impl GateOp {
    pub fn hadamard(target: usize) -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        GateOp::SingleQubit {
            target,
            matrix: [[h, h], [h, -h]],
        }
    }

    pub fn is_hadamard(&self) -> bool {
        match self {
            GateOp::SingleQubit { matrix, .. } => {
                let h = FRAC_1_SQRT_2;
                let want = [[h, h], [h, -h]];
                matrix
                    .iter()
                    .flatten()
                    .zip(want.iter().flatten())
                    .all(|(m, w)| (m - Complex64::new(*w, 0.0)).norm() < 1e-15)
            }
            _ => false,
        }
    }

    /// Qubits the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::SingleQubit { target, .. } => vec![target],
            GateOp::ControlledPhase { control, target, .. } => vec![control, target],
            GateOp::Swap { a, b } => vec![a, b],
        }
    }

    /// Checks gate-local invariants: unitary matrix, distinct qubits.
    pub fn validate(&self) -> Result<()> {
        match self {
            GateOp::SingleQubit { matrix, .. } => {
                let deviation = unitarity_deviation(matrix);
                if deviation.is_nan() || deviation >= UNITARITY_TOLERANCE {
                    return Err(Error::NonUnitaryGate { deviation });
                }
            }
            GateOp::ControlledPhase { control, target, angle } => {
                if control == target {
                    return Err(Error::InvalidGate("control equals target".into()));
                }
                if !angle.is_finite() {
                    return Err(Error::InvalidGate(format!("non-finite angle {angle}")));
                }
            }
            GateOp::Swap { a, b } => {
                if a == b {
                    return Err(Error::InvalidGate("swap of a qubit with itself".into()));
                }
            }
        }
        Ok(())
    }

    /// The inverse gate.
    pub fn adjoint(&self) -> Self {
        match *self {
            GateOp::SingleQubit { target, matrix } => GateOp::SingleQubit {
                target,
                matrix: [
                    [matrix[0][0].conj(), matrix[1][0].conj()],
                    [matrix[0][1].conj(), matrix[1][1].conj()],
                ],
            },
            GateOp::ControlledPhase { control, target, angle } => GateOp::ControlledPhase {
                control,
                target,
                angle: -angle,
            },
            GateOp::Swap { a, b } => GateOp::Swap { a, b },
        }
    }
}

/// max |U†U − I| over entries.
pub(crate) fn unitarity_deviation(m: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let acc: Complex64 = m.iter().map(|row| row[i].conj() * row[j]).sum();
            let id = if i == j { 1.0 } else { 0.0 };
            let dev = (acc - id).norm();
            if dev.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(dev);
        }
    }
    worst
}

impl StateVector {
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        gate.validate()?;
        match *gate {
            GateOp::SingleQubit { target, ref matrix } => self.apply_single(target, matrix),
            GateOp::ControlledPhase { control, target, angle } => {
                let mask = (1 << control) | (1 << target);
                let phase = Complex64::cis(angle);
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & mask == mask {
                        *amp *= phase;
                    }
                }
            }
            GateOp::Swap { a, b } => {
                let (bit_a, bit_b) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & bit_a != 0 && i & bit_b == 0 {
                        self.amps.swap(i, i ^ bit_a ^ bit_b);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_gates<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for g in gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    fn apply_single(&mut self, target: usize, m: &Matrix2) {
        let stride = 1usize << target;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = m[0][0] * x0 + m[0][1] * x1;
                *a1 = m[1][0] * x0 + m[1][1] * x1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::basis(1, 0).unwrap();
        s.apply_gate(&GateOp::hadamard(0)).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn controlled_phase_on_11() {
        let mut s = StateVector::basis(2, 3).unwrap();
        s.apply_gate(&GateOp::ControlledPhase {
            control: 0,
            target: 1,
            angle: PI,
        })
        .unwrap();
        assert!((s.amplitudes()[3] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn swap_moves_amplitude() {
        // |q1=0, q0=1⟩ = index 1 → index 2
        let mut s = StateVector::basis(3, 1).unwrap();
        s.apply_gate(&GateOp::Swap { a: 0, b: 1 }).unwrap();
        assert_eq!(s.amplitudes()[2], c(1.0, 0.0));
    }

    #[test]
    fn gate_errors() {
        let mut s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::hadamard(2)),
            Err(Error::QubitOutOfRange { qubit: 2, .. })
        ));
        let bad = GateOp::SingleQubit {
            target: 0,
            matrix: [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        };
        assert!(matches!(s.apply_gate(&bad), Err(Error::NonUnitaryGate { .. })));
        let cp = GateOp::ControlledPhase {
            control: 1,
            target: 1,
            angle: 0.3,
        };
        assert!(matches!(s.apply_gate(&cp), Err(Error::InvalidGate(_))));
    }

    #[test]
    fn adjoint_undoes_gate() {
        let theta: f64 = 0.37;
        let u = GateOp::SingleQubit {
            target: 1,
            matrix: [
                [c(theta.cos(), 0.0), c(0.0, -theta.sin())],
                [c(0.0, -theta.sin()), c(theta.cos(), 0.0)],
            ],
        };
        let amps = (0..8).map(|i| c(i as f64 * 0.1, 0.05)).collect();
        let start = StateVector::from_amplitudes(amps).unwrap();
        let mut s = start.clone();
        s.apply_gate(&u).unwrap();
        s.apply_gate(&u.adjoint()).unwrap();
        assert!(s.max_deviation(&start).unwrap() < 1e-15);
        assert!(GateOp::hadamard(0).is_hadamard());
        assert!(!u.is_hadamard());
    }
}

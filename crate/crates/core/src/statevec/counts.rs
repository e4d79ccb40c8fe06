use serde::{Deserialize, Serialize};

use super::GateOp;

/// Operation tally accumulated by the instrumented simulators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub hadamard: u64,
    pub controlled_phase: u64,
    pub swap: u64,
    /// Single-qubit unitaries other than Hadamard.
    pub other_single_qubit: u64,
    pub diagonal_phase_applications: u64,
    pub literal_term_applications: u64,
    pub exact_term_applications: u64,
}

impl GateCounts {
    pub fn record(&mut self, gate: &GateOp) {
        match gate {
            GateOp::SingleQubit { .. } if gate.is_hadamard() => self.hadamard += 1,
            GateOp::SingleQubit { .. } => self.other_single_qubit += 1,
            GateOp::ControlledPhase { .. } => self.controlled_phase += 1,
            GateOp::Swap { .. } => self.swap += 1,
        }
    }

    /// Gates from the discrete gate set (QFT gates and other single-qubit gates).
    pub fn circuit_gates(&self) -> u64 {
        self.hadamard + self.controlled_phase + self.swap + self.other_single_qubit
    }

    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            hadamard: self.hadamard * factor,
            controlled_phase: self.controlled_phase * factor,
            swap: self.swap * factor,
            other_single_qubit: self.other_single_qubit * factor,
            diagonal_phase_applications: self.diagonal_phase_applications * factor,
            literal_term_applications: self.literal_term_applications * factor,
            exact_term_applications: self.exact_term_applications * factor,
        }
    }
}

impl std::ops::AddAssign for GateCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.hadamard += rhs.hadamard;
        self.controlled_phase += rhs.controlled_phase;
        self.swap += rhs.swap;
        self.other_single_qubit += rhs.other_single_qubit;
        self.diagonal_phase_applications += rhs.diagonal_phase_applications;
        self.literal_term_applications += rhs.literal_term_applications;
        self.exact_term_applications += rhs.exact_term_applications;
    }
}

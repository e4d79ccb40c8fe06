//! Gate-level quantum Fourier transform on a qubit register.
//!
//! Forward convention: `|j⟩ → 2^{-k/2} Σ_l exp(+2πi·j·l/2^k) |l⟩`, with `j`
//! and `l` read little-endian from the register. The circuit is the textbook
//! one: a Hadamard on each qubit from the most significant down, followed by
//! controlled phases `π/2^m` from every less significant qubit, then a bit
//! reversal realized as explicit swaps. Angles are never truncated.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::statevec::{GateCounts, GateOp, Register, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QftDirection {
    Forward,
    Inverse,
}

impl QftDirection {
    pub fn reversed(self) -> Self {
        match self {
            QftDirection::Forward => QftDirection::Inverse,
            QftDirection::Inverse => QftDirection::Forward,
        }
    }
}

/// Closed-form gate tally of one QFT on `k` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QftGateCount {
    pub hadamard: u64,
    pub controlled_phase: u64,
    pub swap: u64,
}

impl QftGateCount {
    pub fn for_width(k: usize) -> Self {
        let k = k as u64;
        Self {
            hadamard: k,
            controlled_phase: k * k.saturating_sub(1) / 2,
            swap: k / 2,
        }
    }

    pub fn total(&self) -> u64 {
        self.hadamard + self.controlled_phase + self.swap
    }
}

pub fn qft_circuit(reg: Register, dir: QftDirection) -> Vec<GateOp> {
    let k = reg.width;
    let mut gates = Vec::with_capacity(k * (k + 1) / 2 + k / 2);
    for t in (0..k).rev() {
        gates.push(GateOp::hadamard(reg.qubit(t)));
        for c in (0..t).rev() {
            gates.push(GateOp::ControlledPhase {
                control: reg.qubit(c),
                target: reg.qubit(t),
                angle: PI / (1u64 << (t - c)) as f64,
            });
        }
    }
    for i in 0..k / 2 {
        gates.push(GateOp::Swap {
            a: reg.qubit(i),
            b: reg.qubit(k - 1 - i),
        });
    }
    match dir {
        QftDirection::Forward => gates,
        QftDirection::Inverse => gates.iter().rev().map(GateOp::adjoint).collect(),
    }
}

pub fn apply_qft(state: &mut StateVector, reg: Register, dir: QftDirection) -> Result<()> {
    apply_qft_counted(state, reg, dir, &mut GateCounts::default())
}

/// Applies the QFT gate by gate, tallying every gate into `counts`.
pub fn apply_qft_counted(
    state: &mut StateVector,
    reg: Register,
    dir: QftDirection,
    counts: &mut GateCounts,
) -> Result<()> {
    reg.check(state.num_qubits())?;
    for gate in qft_circuit(reg, dir) {
        state.apply_gate(&gate)?;
        counts.record(&gate);
    }
    Ok(())
}

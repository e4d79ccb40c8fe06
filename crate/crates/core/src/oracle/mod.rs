//! Independent ground truth for the emulator: dense Hamiltonians and
//! propagators, an array-FFT split-step integrator, and closed-form
//! observables.
//!
//! Nothing here calls the gate kernels, the Pauli kernels, the QFT, or the
//! particle stepper; only the problem types are shared.

mod analytic;
mod dense;
mod expm;
mod propagate;
mod split_step;

pub use analytic::{analytic_suite, AnalyticCase, ANALYTIC_CASES};
pub use dense::{
    dense_circuit_matrix, dense_gate_matrix, dense_grid_hamiltonian, dense_grid_hamiltonian_with_cap,
    dense_spin_hamiltonian, dense_spin_hamiltonian_with_cap, dft_matrix, kron_extend, kron_little_endian,
    DenseOperator, DENSE_QUBIT_CAP,
};
pub use expm::expm;
pub use propagate::{exact_propagate, HermitianPropagator};
pub use split_step::{classical_split_step, ClassicalSplitStep};

//! State-vector emulation of two quantum-simulation procedures:
//! Trotterized evolution of spin-½ systems under one- and two-body Pauli
//! terms, and QFT-based split-operator evolution of grid-encoded particles in
//! one dimension. Every result can be checked against the dense and classical
//! oracles in [`oracle`].

pub mod error;
pub mod oracle;
pub mod particle;
pub mod plan;
pub mod qft;
pub mod runner;
pub mod spin;
pub mod statevec;

pub use error::{Error, Result};
pub use plan::{EvolutionPlan, Sign, StepMode, TrajectoryRecord};
pub use statevec::{GateCounts, GateOp, Register, StateVector};

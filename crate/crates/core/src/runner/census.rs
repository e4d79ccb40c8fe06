use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::{LoadedProblem, Problem};
use super::run::{evolve, initial_state};
use crate::error::Result;
use crate::particle::{OneBodyPotential, ParticleStepper, ParticleSystem, PotentialKind, PotentialSpec, SplitMode};
use crate::plan::StepMode;
use crate::qft::QftGateCount;
use crate::statevec::{check_cap, GateCounts, StateVector};

/// Operations one step is expected to perform.
pub fn predicted_step_counts(problem: &Problem, mode: StepMode) -> GateCounts {
    let mut c = GateCounts::default();
    match problem {
        Problem::Spins { system, .. } => {
            let m = system.terms().len() as u64;
            match mode {
                StepMode::LiteralPaper => c.literal_term_applications = m,
                StepMode::Strang => c.exact_term_applications = 2 * m,
                _ => c.exact_term_applications = m,
            }
        }
        Problem::Particles {
            system, potentials, ..
        } => {
            let sweeps = if mode == StepMode::Strang { 2 } else { 1 };
            c = particle_step_counts(system, !potentials.is_empty(), sweeps);
        }
    }
    c
}

fn particle_step_counts(system: &ParticleSystem, has_potential: bool, sweeps: u64) -> GateCounts {
    let qft = QftGateCount::for_width(system.qubits_per_particle());
    // Each kinetic factor is a forward and an inverse QFT around one diagonal.
    let kinetic = sweeps * system.num_particles() as u64;
    GateCounts {
        hadamard: 2 * kinetic * qft.hadamard,
        controlled_phase: 2 * kinetic * qft.controlled_phase,
        swap: 2 * kinetic * qft.swap,
        diagonal_phase_applications: kinetic + u64::from(has_potential),
        ..GateCounts::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub num_qubits: usize,
    /// `2^{qubits}`, the number of stored amplitudes.
    pub amplitudes: u64,
    pub steps: u64,
    pub predicted_per_step: GateCounts,
    pub predicted_total: GateCounts,
    pub measured_total: GateCounts,
    pub matches: bool,
}

impl CensusReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}

/// Runs the problem instrumented and compares the tally with the prediction.
pub fn gate_census(loaded: &LoadedProblem) -> Result<CensusReport> {
    let mut quiet = loaded.clone();
    match &mut quiet.problem {
        Problem::Spins { observables, .. } => observables.clear(),
        Problem::Particles { observables, .. } => observables.clear(),
    }
    let steps = quiet.plan.steps()?;
    quiet.plan.sample_stride = steps.max(1);
    let evolved = evolve(&quiet, initial_state(&quiet)?)?;
    let per_step = predicted_step_counts(&loaded.problem, loaded.plan.mode);
    let predicted_total = per_step.scaled(steps);
    let num_qubits = loaded.problem.num_qubits();
    Ok(CensusReport {
        num_qubits,
        amplitudes: 1u64 << num_qubits,
        steps,
        predicted_per_step: per_step,
        predicted_total,
        measured_total: evolved.counts,
        matches: predicted_total == evolved.counts,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub num_particles: usize,
    pub qubits_per_particle: usize,
    pub num_qubits: usize,
    pub amplitudes: u64,
    pub predicted: GateCounts,
    pub measured: GateCounts,
}

impl ScalingRow {
    pub fn matches(&self) -> bool {
        self.predicted == self.measured
    }
}

/// One instrumented split step for every `(N, k)` pair, on free particles in a
/// unit box plus a harmonic well on particle 0.
pub fn scaling_table(
    particles: impl IntoIterator<Item = usize>,
    widths: impl IntoIterator<Item = usize> + Clone,
    mode: SplitMode,
    cap: usize,
) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::new();
    for n in particles {
        for k in widths.clone() {
            check_cap(n * k, cap)?;
            let system = ParticleSystem::uniform(n, k, 1.0, 1.0)?;
            let potentials = PotentialSpec {
                one_body: vec![OneBodyPotential {
                    particle: 0,
                    kind: PotentialKind::Harmonic {
                        center: 0.5,
                        stiffness: 1.0,
                    },
                }],
                ..PotentialSpec::none()
            };
            let mut stepper = ParticleStepper::new(&system, &potentials, Default::default())?;
            let mut state = StateVector::basis_with_cap(n * k, 0, cap)?;
            stepper.step(&mut state, 1e-3, mode)?;
            let sweeps = if mode == SplitMode::Strang { 2 } else { 1 };
            rows.push(ScalingRow {
                num_particles: n,
                qubits_per_particle: k,
                num_qubits: n * k,
                amplitudes: 1u64 << (n * k),
                predicted: particle_step_counts(&system, true, sweeps),
                measured: stepper.counts(),
            });
        }
    }
    Ok(rows)
}

/// Fixed-width text rendering of a scaling table.
pub fn format_scaling_table(rows: &[ScalingRow]) -> String {
    let mut out = format!(
        "{:>2} {:>2} {:>6} {:>10} {:>6} {:>6} {:>6} {:>6} {:>8} {:>5}\n",
        "N", "k", "qubits", "amplitudes", "H", "CP", "SWAP", "diag", "gates", "match"
    );
    for r in rows {
        let m = &r.measured;
        let _ = writeln!(
            out,
            "{:>2} {:>2} {:>6} {:>10} {:>6} {:>6} {:>6} {:>6} {:>8} {:>5}",
            r.num_particles,
            r.qubits_per_particle,
            r.num_qubits,
            r.amplitudes,
            m.hadamard,
            m.controlled_phase,
            m.swap,
            m.diagonal_phase_applications,
            m.circuit_gates(),
            if r.matches() { "yes" } else { "no" }
        );
    }
    out
}

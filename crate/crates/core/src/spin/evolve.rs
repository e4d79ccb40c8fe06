use serde::{Deserialize, Serialize};

use super::{
    normalized_expectation, record_term, term_step_exact, term_step_literal, PauliProduct,
    SpinSystem,
};
use crate::error::{Error, Result};
use crate::plan::{EvolutionPlan, Sign, StepMode, TrajectoryRecord};
use crate::statevec::{GateCounts, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StepperMode {
    LiteralPaper { sign: Sign },
    ExactTerm,
    /// Forward sweep at Δt/2, then backward sweep at Δt/2.
    Strang,
}

impl StepperMode {
    pub fn from_plan(plan: &EvolutionPlan) -> Result<Self> {
        match plan.mode {
            StepMode::LiteralPaper => Ok(StepperMode::LiteralPaper {
                sign: plan.literal_sign,
            }),
            StepMode::ExactTerm => Ok(StepperMode::ExactTerm),
            StepMode::Strang => Ok(StepperMode::Strang),
            StepMode::Lie => Err(Error::InvalidPlan(
                "mode `lie` applies to particle problems; spins use literal_paper, exact_term or strang"
                    .into(),
            )),
        }
    }

    /// Sign `s` such that the stepper approximates `exp(−i·s·Ht/ℏ)`.
    pub fn generator_sign(self) -> f64 {
        match self {
            StepperMode::LiteralPaper { sign } => -sign.value(),
            _ => 1.0,
        }
    }
}

/// One sweep over all terms in listed order (for `Strang`, a forward
/// half-step sweep followed by a backward half-step sweep).
pub fn trotter_step(
    state: &mut StateVector,
    system: &SpinSystem,
    dt: f64,
    mode: StepperMode,
    renormalize_after_step: bool,
    counts: &mut GateCounts,
) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidPlan(format!("dt must be positive, got {dt}")));
    }
    if state.num_qubits() != system.num_spins() {
        return Err(Error::DimensionMismatch {
            left: state.num_qubits(),
            right: system.num_spins(),
        });
    }
    let hbar = system.hbar();
    match mode {
        StepperMode::LiteralPaper { sign } => {
            for term in system.terms() {
                term_step_literal(state, term, dt, hbar, sign)?;
                record_term(counts, true);
            }
            if renormalize_after_step {
                state.normalize();
            }
        }
        StepperMode::ExactTerm => {
            for term in system.terms() {
                term_step_exact(state, term, dt, hbar)?;
                record_term(counts, false);
            }
        }
        StepperMode::Strang => {
            let half = 0.5 * dt;
            for term in system.terms().iter().chain(system.terms().iter().rev()) {
                term_step_exact(state, term, half, hbar)?;
                record_term(counts, false);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SpinEvolution {
    pub final_state: StateVector,
    pub trajectory: Vec<TrajectoryRecord>,
    pub counts: GateCounts,
    pub steps: u64,
    pub realized_time: f64,
}

/// Runs `round(T/Δt)` Trotter steps, recording the observables (as
/// `⟨ψ|P|ψ⟩/⟨ψ|ψ⟩`) every `sample_stride` steps, starting at `t = 0`.
pub fn evolve_spins(
    initial: StateVector,
    system: &SpinSystem,
    plan: &EvolutionPlan,
    observables: &[PauliProduct],
) -> Result<SpinEvolution> {
    let steps = plan.steps()?;
    let mode = StepperMode::from_plan(plan)?;
    let mut state = initial;
    let mut counts = GateCounts::default();
    let mut trajectory = Vec::with_capacity(plan.record_count()? as usize);

    let record = |step: u64, state: &StateVector| -> Result<TrajectoryRecord> {
        Ok(TrajectoryRecord {
            step,
            time: step as f64 * plan.dt,
            norm: state.norm(),
            values: observables
                .iter()
                .map(|p| normalized_expectation(state, p))
                .collect::<Result<_>>()?,
        })
    };

    trajectory.push(record(0, &state)?);
    for step in 1..=steps {
        trotter_step(
            &mut state,
            system,
            plan.dt,
            mode,
            plan.renormalize_after_step,
            &mut counts,
        )?;
        if plan.is_sample_step(step) {
            trajectory.push(record(step, &state)?);
        }
    }

    Ok(SpinEvolution {
        final_state: state,
        trajectory,
        counts,
        steps,
        realized_time: steps as f64 * plan.dt,
    })
}

use serde::{Deserialize, Serialize};

use super::config::{LoadedProblem, Problem};
use super::run::{evolve, initial_state, oracle_propagator};
use crate::error::{Error, Result};
use crate::plan::StepMode;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dt: f64,
    pub steps: u64,
    pub realized_time: f64,
    /// `‖ψ_sim − ψ_exact‖₂` at the realized time.
    pub error: f64,
    /// Previous row's error over this one.
    pub ratio: Option<f64>,
    /// `log₂(ratio)`.
    pub observed_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mode: StepMode,
    /// Global order the integrator is expected to show.
    pub expected_order: u32,
    pub rows: Vec<SweepRow>,
}

pub fn expected_order(mode: StepMode) -> u32 {
    match mode {
        StepMode::Strang => 2,
        StepMode::LiteralPaper | StepMode::ExactTerm | StepMode::Lie => 1,
    }
}

/// Runs the problem at `dt, dt/2, …, dt/2^halvings` and measures the
/// final-state error against the dense oracle at each realized time.
pub fn convergence_sweep(loaded: &LoadedProblem, halvings: u32) -> Result<SweepReport> {
    if halvings > 20 {
        return Err(Error::validation(format!("{halvings} halvings is too many (max 20)")));
    }
    let psi0 = initial_state(loaded)?;
    let propagator = oracle_propagator(loaded)?;
    let mut quiet = loaded.clone();
    match &mut quiet.problem {
        Problem::Spins { observables, .. } => observables.clear(),
        Problem::Particles { observables, .. } => observables.clear(),
    }

    let mut rows: Vec<SweepRow> = Vec::with_capacity(halvings as usize + 1);
    for h in 0..=halvings {
        quiet.plan.dt = loaded.plan.dt / f64::from(1u32 << h);
        let steps = quiet.plan.steps()?;
        quiet.plan.sample_stride = steps.max(1);
        let evolved = evolve(&quiet, psi0.clone())?;
        let exact = propagator.propagate(&psi0, evolved.realized_time)?;
        let error = evolved.final_state.distance(&exact)?;
        let ratio = rows.last().map(|prev| prev.error / error);
        rows.push(SweepRow {
            dt: quiet.plan.dt,
            steps,
            realized_time: evolved.realized_time,
            error,
            ratio,
            observed_order: ratio.map(f64::log2),
        });
    }
    Ok(SweepReport {
        mode: loaded.plan.mode,
        expected_order: expected_order(loaded.plan.mode),
        rows,
    })
}

impl SweepReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "mode {:?}, expected order {}\n{:>12} {:>8} {:>12} {:>12} {:>8} {:>8}\n",
            self.mode, self.expected_order, "dt", "steps", "T", "error", "ratio", "order"
        );
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
            out.push_str(&format!(
                "{:>12.4e} {:>8} {:>12.6} {:>12.4e} {:>8} {:>8}\n",
                r.dt,
                r.steps,
                r.realized_time,
                r.error,
                opt(r.ratio),
                opt(r.observed_order)
            ));
        }
        out
    }
}

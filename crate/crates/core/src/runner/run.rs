use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::{AnalyticCheck, LoadedProblem, ParticleInitial, Problem, ProblemType};
use crate::error::Result;
use crate::oracle::{dense_grid_hamiltonian, dense_spin_hamiltonian, AnalyticCase, HermitianPropagator};
use crate::particle::{
    evolve_particles, prepare_product_wavepackets_with_cap, DensityRecord, MomentKind, ParticleObservable,
    PhaseConvention,
};
use crate::plan::TrajectoryRecord;
use crate::spin::{evolve_spins, Pauli, StepperMode};
use crate::statevec::{sample_counts, GateCounts, Histogram, StateVector, RNG_ALGORITHM};

/// Outcome of one embedded tolerance check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Estimate of an observable from the sampled histogram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    pub observable: String,
    pub estimate: f64,
    pub standard_error: f64,
    /// The same observable computed from the final amplitudes.
    pub exact: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub shots: u64,
    pub seed: u64,
    pub rng_algorithm: String,
    pub histogram: Histogram,
    pub estimates: Vec<SampledEstimate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub problem_type: ProblemType,
    pub config: serde_json::Value,
    pub rng_algorithm: String,
    pub seed: u64,
    pub num_qubits: usize,
    pub dt: f64,
    pub steps: u64,
    pub realized_time: f64,
    pub observables: Vec<String>,
    pub trajectory: Vec<TrajectoryRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub densities: Vec<DensityRecord>,
    pub gate_counts: GateCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingReport>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    /// Seconds since the Unix epoch; the only field that differs between
    /// repeated runs of the same problem.
    pub generated_at: u64,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::Error::Parse(e.to_string()))
    }

    /// `step,t,norm,<observables>` with one row per trajectory record.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("step,t,norm");
        for name in &self.observables {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for r in &self.trajectory {
            let _ = write!(out, "{},{},{}", r.step, r.time, r.norm);
            for v in &r.values {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// The problem's initial state at the loaded cap.
pub fn initial_state(loaded: &LoadedProblem) -> Result<StateVector> {
    match &loaded.problem {
        Problem::Spins {
            system, initial_basis, ..
        } => StateVector::basis_with_cap(system.num_spins(), *initial_basis, loaded.cap),
        Problem::Particles { system, initial, .. } => match initial {
            ParticleInitial::Basis(b) => StateVector::basis_with_cap(system.total_qubits(), *b, loaded.cap),
            ParticleInitial::Wavepackets(spec) => prepare_product_wavepackets_with_cap(system, spec, loaded.cap),
        },
    }
}

/// Dense propagator for `exp(−i·s·Ht/ℏ)`, where `s` is the sign of the
/// generator the configured stepper actually approximates.
pub fn oracle_propagator(loaded: &LoadedProblem) -> Result<HermitianPropagator> {
    match &loaded.problem {
        Problem::Spins { system, .. } => {
            let s = StepperMode::from_plan(&loaded.plan)?.generator_sign();
            HermitianPropagator::new(&dense_spin_hamiltonian(system)?.scale(s), system.hbar())
        }
        Problem::Particles {
            system, potentials, ..
        } => {
            let s = -PhaseConvention::from_flag(loaded.plan.paper_literal_signs).factor();
            HermitianPropagator::new(&dense_grid_hamiltonian(system, potentials)?.scale(s), system.hbar())
        }
    }
}

pub fn oracle_state(loaded: &LoadedProblem, psi0: &StateVector, t: f64) -> Result<StateVector> {
    oracle_propagator(loaded)?.propagate(psi0, t)
}

/// `|⟨a|b⟩| / (‖a‖·‖b‖)`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner_product(b)?.norm() / (a.norm() * b.norm()))
}

pub(crate) struct Evolved {
    pub(crate) final_state: StateVector,
    pub(crate) trajectory: Vec<TrajectoryRecord>,
    pub(crate) densities: Vec<DensityRecord>,
    pub(crate) counts: GateCounts,
    pub(crate) steps: u64,
    pub(crate) realized_time: f64,
}

pub(crate) fn evolve(loaded: &LoadedProblem, psi0: StateVector) -> Result<Evolved> {
    Ok(match &loaded.problem {
        Problem::Spins {
            system, observables, ..
        } => {
            let e = evolve_spins(psi0, system, &loaded.plan, observables)?;
            Evolved {
                final_state: e.final_state,
                trajectory: e.trajectory,
                densities: Vec::new(),
                counts: e.counts,
                steps: e.steps,
                realized_time: e.realized_time,
            }
        }
        Problem::Particles {
            system,
            potentials,
            observables,
            ..
        } => {
            let e = evolve_particles(psi0, system, potentials, &loaded.plan, observables)?;
            Evolved {
                final_state: e.final_state,
                trajectory: e.trajectory,
                densities: e.densities,
                counts: e.counts,
                steps: e.steps,
                realized_time: e.realized_time,
            }
        }
    })
}

/// Evolves the problem, samples if `shots > 0`, and evaluates the embedded
/// tolerance block.
pub fn run(loaded: &LoadedProblem) -> Result<RunReport> {
    let psi0 = initial_state(loaded)?;
    let plan = &loaded.plan;
    if (plan.realized_time()? - plan.total_time).abs() > 1e-12 * plan.total_time.max(1.0) {
        log::warn!(
            "total_time {} is not a multiple of dt {}; running to {}",
            plan.total_time,
            plan.dt,
            plan.realized_time()?
        );
    }
    let evolved = evolve(loaded, psi0.clone())?;
    let observables = loaded.problem.observable_columns();

    let sampling = if plan.shots > 0 {
        Some(sample(loaded, &evolved.final_state)?)
    } else {
        None
    };

    let mut checks = Vec::new();
    let tol = &loaded.tolerances;
    if let Some(max) = tol.norm_drift_max {
        let drift = evolved
            .trajectory
            .iter()
            .map(|r| (r.norm - 1.0).abs())
            .chain(std::iter::once((evolved.final_state.norm() - 1.0).abs()))
            .fold(0.0, f64::max);
        checks.push(CheckResult {
            name: "norm_drift".into(),
            value: drift,
            threshold: max,
            passed: drift <= max,
        });
    }
    if let Some(min) = tol.oracle_fidelity_min {
        let reference = oracle_state(loaded, &psi0, evolved.realized_time)?;
        let f = fidelity(&reference, &evolved.final_state)?;
        checks.push(CheckResult {
            name: "oracle_fidelity".into(),
            value: f,
            threshold: min,
            passed: f >= min,
        });
    }
    for check in &tol.analytic {
        checks.extend(analytic_check(check, &observables, &evolved.trajectory)?);
    }
    let passed = checks.iter().all(|c| c.passed);

    Ok(RunReport {
        problem_type: loaded.problem.problem_type(),
        config: loaded.source.clone(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        seed: plan.seed,
        num_qubits: loaded.problem.num_qubits(),
        dt: plan.dt,
        steps: evolved.steps,
        realized_time: evolved.realized_time,
        observables,
        trajectory: evolved.trajectory,
        densities: evolved.densities,
        gate_counts: evolved.counts,
        sampling,
        checks,
        passed,
        generated_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

fn analytic_check(
    check: &AnalyticCheck,
    columns: &[String],
    trajectory: &[TrajectoryRecord],
) -> Result<Vec<CheckResult>> {
    let case = AnalyticCase::from_name(&check.case, &check.params)?;
    let col = columns
        .iter()
        .position(|c| *c == check.observable)
        .ok_or_else(|| crate::Error::validation(format!("no trajectory column `{}`", check.observable)))?;
    let until = check.until_time.unwrap_or(f64::INFINITY);
    let (mut abs_err, mut rel_err) = (0.0f64, 0.0f64);
    for r in trajectory.iter().filter(|r| r.time <= until * (1.0 + 1e-12)) {
        let want = check.offset + case.value(r.time);
        let err = (r.values[col] - want).abs();
        abs_err = abs_err.max(err);
        rel_err = rel_err.max(err / want.abs());
    }
    let name = format!("analytic:{}:{}", check.case, check.observable);
    let mut out = Vec::new();
    if let Some(max) = check.max_abs_error {
        out.push(CheckResult {
            name: format!("{name}:abs"),
            value: abs_err,
            threshold: max,
            passed: abs_err <= max,
        });
    }
    if let Some(max) = check.max_rel_error {
        out.push(CheckResult {
            name: format!("{name}:rel"),
            value: rel_err,
            threshold: max,
            passed: rel_err <= max,
        });
    }
    Ok(out)
}

/// Samples the final state (normalized first, as a measurement would be) and
/// estimates every observable that is diagonal in the computational basis:
/// Z-only Pauli products for spins, `mean_x` and `mean_x2` for particles.
fn sample(loaded: &LoadedProblem, final_state: &StateVector) -> Result<SamplingReport> {
    let plan = &loaded.plan;
    let mut state = final_state.clone();
    state.normalize();
    let histogram = sample_counts(&state, plan.shots, plan.seed)?;
    let shots = plan.shots as f64;
    let probs = state.probabilities();

    // Sample mean and standard error of f over the histogram, plus the exact value.
    let estimate = |name: String, f: &dyn Fn(usize) -> f64| {
        let mean = histogram.iter().map(|(&b, &c)| c as f64 * f(b)).sum::<f64>() / shots;
        let var = histogram
            .iter()
            .map(|(&b, &c)| c as f64 * (f(b) - mean).powi(2))
            .sum::<f64>()
            / (shots - 1.0).max(1.0);
        SampledEstimate {
            observable: name,
            estimate: mean,
            standard_error: (var / shots).sqrt(),
            exact: probs.iter().enumerate().map(|(b, p)| p * f(b)).sum(),
        }
    };

    let mut estimates = Vec::new();
    match &loaded.problem {
        Problem::Spins { observables, .. } => {
            for o in observables {
                if o.ops().iter().all(|&(_, p)| p == Pauli::Z) {
                    let mask = o.sites().fold(0usize, |m, s| m | 1 << s);
                    let parity = move |b: usize| if (b & mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                    estimates.push(estimate(o.to_string(), &parity));
                }
            }
        }
        Problem::Particles {
            system, observables, ..
        } => {
            let dx = system.dx();
            for o in observables {
                if let ParticleObservable::Moment { kind, particle } = *o {
                    let reg = system.register(particle);
                    let x = move |b: usize| reg.read(b) as f64 * dx;
                    match kind {
                        MomentKind::MeanX => estimates.push(estimate(o.to_string(), &x)),
                        MomentKind::MeanX2 => estimates.push(estimate(o.to_string(), &|b| x(b).powi(2))),
                        _ => {}
                    }
                }
            }
        }
    }

    Ok(SamplingReport {
        shots: plan.shots,
        seed: plan.seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        histogram,
        estimates,
    })
}

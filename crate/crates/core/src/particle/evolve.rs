use std::fmt;

use serde::{Deserialize, Serialize};

use super::observables::moments;
use super::{ParticleStepper, ParticleSystem, PhaseConvention, PotentialSpec, SplitMode};
use crate::error::{Error, Result};
use crate::plan::{EvolutionPlan, StepMode, TrajectoryRecord};
use crate::statevec::{GateCounts, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    MeanX,
    MeanX2,
    MeanP,
    MeanP2,
    SigmaX,
    SigmaP,
}

impl MomentKind {
    const ALL: [(MomentKind, &'static str); 6] = [
        (MomentKind::MeanX, "mean_x"),
        (MomentKind::MeanX2, "mean_x2"),
        (MomentKind::MeanP, "mean_p"),
        (MomentKind::MeanP2, "mean_p2"),
        (MomentKind::SigmaX, "sigma_x"),
        (MomentKind::SigmaP, "sigma_p"),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(k, _)| *k == self).map(|(_, n)| *n).unwrap()
    }

    fn needs_momentum(self) -> bool {
        matches!(self, MomentKind::MeanP | MomentKind::MeanP2 | MomentKind::SigmaP)
    }
}

/// An entry from the fixed observable menu for particle problems, written
/// `<name>:<particle>`, e.g. `mean_x:0` or `density:1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParticleObservable {
    Moment { kind: MomentKind, particle: usize },
    Density { particle: usize },
}

impl ParticleObservable {
    pub fn parse(label: &str) -> Result<Self> {
        let bad = || {
            Error::validation(format!(
                "unknown particle observable `{label}`; expected <mean_x|mean_x2|mean_p|mean_p2|sigma_x|sigma_p|density>:<particle>"
            ))
        };
        let (name, idx) = label.trim().split_once(':').ok_or_else(bad)?;
        let particle = idx.parse::<usize>().map_err(|_| bad())?;
        if name == "density" {
            return Ok(ParticleObservable::Density { particle });
        }
        let kind = MomentKind::ALL
            .iter()
            .find(|(_, n)| *n == name)
            .map(|(k, _)| *k)
            .ok_or_else(bad)?;
        Ok(ParticleObservable::Moment { kind, particle })
    }

    pub fn particle(&self) -> usize {
        match *self {
            ParticleObservable::Moment { particle, .. } | ParticleObservable::Density { particle } => particle,
        }
    }
}

impl fmt::Display for ParticleObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParticleObservable::Moment { kind, particle } => write!(f, "{}:{particle}", kind.name()),
            ParticleObservable::Density { particle } => write!(f, "density:{particle}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub step: u64,
    pub time: f64,
    pub particle: usize,
    pub density: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ParticleEvolution {
    pub final_state: StateVector,
    /// Scalar observables, in declared order with densities skipped.
    pub trajectory: Vec<TrajectoryRecord>,
    pub densities: Vec<DensityRecord>,
    pub counts: GateCounts,
    pub steps: u64,
    pub realized_time: f64,
}

pub(crate) fn split_mode(plan: &EvolutionPlan) -> Result<SplitMode> {
    match plan.mode {
        StepMode::Lie => Ok(SplitMode::Lie),
        StepMode::Strang => Ok(SplitMode::Strang),
        other => Err(Error::InvalidPlan(format!(
            "mode {other:?} applies to spin problems; particles use lie or strang"
        ))),
    }
}

pub fn evolve_particles(
    initial: StateVector,
    system: &ParticleSystem,
    potentials: &PotentialSpec,
    plan: &EvolutionPlan,
    observables: &[ParticleObservable],
) -> Result<ParticleEvolution> {
    let steps = plan.steps()?;
    let mode = split_mode(plan)?;
    for o in observables {
        if o.particle() >= system.num_particles() {
            return Err(Error::validation(format!(
                "observable {o}: particle out of range for {} particles",
                system.num_particles()
            )));
        }
    }
    let convention = PhaseConvention::from_flag(plan.paper_literal_signs);
    let mut stepper = ParticleStepper::new(system, potentials, convention)?;
    let with_momentum = observables.iter().any(|o| {
        matches!(o, ParticleObservable::Moment { kind, .. } if kind.needs_momentum())
    });

    let mut state = initial;
    let mut trajectory = Vec::with_capacity(plan.record_count()? as usize);
    let mut densities = Vec::new();
    let mut record = |step: u64, state: &StateVector| -> Result<()> {
        let time = step as f64 * plan.dt;
        let m = if observables.is_empty() {
            Vec::new()
        } else {
            moments(state, system, with_momentum)?
        };
        let mut values = Vec::new();
        for o in observables {
            match *o {
                ParticleObservable::Moment { kind, particle } => {
                    let pm = &m[particle];
                    values.push(match kind {
                        MomentKind::MeanX => pm.mean_x,
                        MomentKind::MeanX2 => pm.mean_x2,
                        MomentKind::MeanP => pm.mean_p,
                        MomentKind::MeanP2 => pm.mean_p2,
                        MomentKind::SigmaX => pm.sigma_x(),
                        MomentKind::SigmaP => pm.sigma_p(),
                    });
                }
                ParticleObservable::Density { particle } => densities.push(DensityRecord {
                    step,
                    time,
                    particle,
                    density: m[particle].density.clone(),
                }),
            }
        }
        trajectory.push(TrajectoryRecord {
            step,
            time,
            norm: state.norm(),
            values,
        });
        Ok(())
    };

    record(0, &state)?;
    for step in 1..=steps {
        stepper.step(&mut state, plan.dt, mode)?;
        if plan.is_sample_step(step) {
            record(step, &state)?;
        }
    }

    Ok(ParticleEvolution {
        final_state: state,
        trajectory,
        densities,
        counts: stepper.counts(),
        steps,
        realized_time: steps as f64 * plan.dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_labels() {
        let o = ParticleObservable::parse("mean_x2:1").unwrap();
        assert_eq!(o, ParticleObservable::Moment { kind: MomentKind::MeanX2, particle: 1 });
        assert_eq!(o.to_string(), "mean_x2:1");
        assert_eq!(ParticleObservable::parse("density:0").unwrap(), ParticleObservable::Density { particle: 0 });
        for bad in ["mean_x", "mean_y:0", "density:-1", ""] {
            assert!(ParticleObservable::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn stride_bookkeeping() {
        let sys = ParticleSystem::uniform(1, 4, 1.0, 1.0).unwrap();
        let plan = EvolutionPlan::new(1e-3, 5e-3, StepMode::Lie).with_stride(5);
        let obs = [
            ParticleObservable::parse("mean_x:0").unwrap(),
            ParticleObservable::parse("density:0").unwrap(),
        ];
        let run = evolve_particles(StateVector::basis(4, 3).unwrap(), &sys, &PotentialSpec::none(), &plan, &obs).unwrap();
        let times: Vec<u64> = run.trajectory.iter().map(|r| r.step).collect();
        assert_eq!(times, vec![0, 5]);
        assert_eq!(run.densities.len(), 2);
        assert_eq!(run.trajectory[0].values, vec![3.0 / 16.0]);
        // 5 steps × (2 QFTs of 4 + 6 + 2 gates)
        assert_eq!(run.counts.circuit_gates(), 5 * 24);
    }

    #[test]
    fn rejects_spin_modes_and_bad_particles() {
        let sys = ParticleSystem::uniform(1, 3, 1.0, 1.0).unwrap();
        let plan = EvolutionPlan::new(0.1, 1.0, StepMode::ExactTerm);
        assert!(evolve_particles(StateVector::basis(3, 0).unwrap(), &sys, &PotentialSpec::none(), &plan, &[]).is_err());
        let plan = EvolutionPlan::new(0.1, 1.0, StepMode::Lie);
        let obs = [ParticleObservable::parse("mean_x:1").unwrap()];
        assert!(evolve_particles(StateVector::basis(3, 0).unwrap(), &sys, &PotentialSpec::none(), &plan, &obs).is_err());
    }
}

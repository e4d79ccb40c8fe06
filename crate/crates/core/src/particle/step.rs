use serde::{Deserialize, Serialize};

use super::{ParticleSystem, PotentialSpec, PotentialTables};
use crate::error::{Error, Result};
use crate::qft::{apply_qft_counted, QftDirection};
use crate::statevec::{GateCounts, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Kinetic sweep over all particles, then the potential phase.
    Lie,
    /// Half kinetic sweep, potential phase, half kinetic sweep.
    Strang,
}

/// Direction in which phases advance: `Physical` is `e^{−iEΔt/ℏ}`,
/// `PaperLiteral` is `e^{+iEΔt/ℏ}` for both kinetic and potential factors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    #[default]
    Physical,
    PaperLiteral,
}

impl PhaseConvention {
    pub fn from_flag(paper_literal_signs: bool) -> Self {
        if paper_literal_signs {
            PhaseConvention::PaperLiteral
        } else {
            PhaseConvention::Physical
        }
    }

    /// Multiplier of `E·Δt/ℏ` in the applied phase.
    pub fn factor(self) -> f64 {
        match self {
            PhaseConvention::Physical => -1.0,
            PhaseConvention::PaperLiteral => 1.0,
        }
    }
}

/// Split-operator stepper with precomputed kinetic and potential tables and
/// a running gate tally.
#[derive(Clone, Debug)]
pub struct ParticleStepper<'a> {
    system: &'a ParticleSystem,
    /// Per particle, `p_l²/(2m)` for each momentum index.
    kinetic: Vec<Vec<f64>>,
    potential: PotentialTables,
    convention: PhaseConvention,
    counts: GateCounts,
}

impl<'a> ParticleStepper<'a> {
    pub fn new(
        system: &'a ParticleSystem,
        potentials: &PotentialSpec,
        convention: PhaseConvention,
    ) -> Result<Self> {
        let momenta = system.momenta();
        let kinetic = system
            .masses()
            .iter()
            .map(|m| momenta.iter().map(|p| p * p / (2.0 * m)).collect())
            .collect();
        Ok(Self {
            system,
            kinetic,
            potential: PotentialTables::build(system, potentials)?,
            convention,
            counts: GateCounts::default(),
        })
    }

    pub fn counts(&self) -> GateCounts {
        self.counts
    }

    fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.system.total_qubits() {
            return Err(Error::DimensionMismatch {
                left: state.num_qubits(),
                right: self.system.total_qubits(),
            });
        }
        Ok(())
    }

    fn check_dt(dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidPlan(format!("dt must be positive, got {dt}")));
        }
        Ok(())
    }

    /// `ψ ← QFT⁻¹ · diag(e^{∓iΔt·p²/(2mℏ)}) · QFT · ψ` on one particle's register.
    pub fn kinetic_phase_step(&mut self, state: &mut StateVector, particle: usize, dt: f64) -> Result<()> {
        Self::check_dt(dt)?;
        self.check_state(state)?;
        if particle >= self.system.num_particles() {
            return Err(Error::IndexOutOfRange {
                index: particle,
                dim: self.system.num_particles(),
            });
        }
        let reg = self.system.register(particle);
        let scale = self.convention.factor() * dt / self.system.hbar();
        let phases: Vec<f64> = self.kinetic[particle].iter().map(|e| scale * e).collect();

        apply_qft_counted(state, reg, QftDirection::Forward, &mut self.counts)?;
        state.apply_register_phase(reg, &phases)?;
        self.counts.diagonal_phase_applications += 1;
        apply_qft_counted(state, reg, QftDirection::Inverse, &mut self.counts)
    }

    /// Kinetic factor for every particle, in ascending index order.
    pub fn kinetic_sweep(&mut self, state: &mut StateVector, dt: f64) -> Result<()> {
        for i in 0..self.system.num_particles() {
            self.kinetic_phase_step(state, i, dt)?;
        }
        Ok(())
    }

    /// `amp_b ← amp_b · e^{∓iΔt·V(x⃗_b)/ℏ}` with `x⃗_b` decoded from every register.
    pub fn potential_phase_step(&mut self, state: &mut StateVector, dt: f64) -> Result<()> {
        Self::check_dt(dt)?;
        self.check_state(state)?;
        if self.potential.is_empty() {
            return Ok(());
        }
        let scale = self.convention.factor() * dt / self.system.hbar();
        let tables = &self.potential;
        state.apply_diagonal_phase(|b| scale * tables.energy(b))?;
        self.counts.diagonal_phase_applications += 1;
        Ok(())
    }

    pub fn step(&mut self, state: &mut StateVector, dt: f64, mode: SplitMode) -> Result<()> {
        match mode {
            SplitMode::Lie => {
                self.kinetic_sweep(state, dt)?;
                self.potential_phase_step(state, dt)
            }
            SplitMode::Strang => {
                self.kinetic_sweep(state, 0.5 * dt)?;
                self.potential_phase_step(state, dt)?;
                self.kinetic_sweep(state, 0.5 * dt)
            }
        }
    }
}

pub fn kinetic_phase_step(
    state: &mut StateVector,
    system: &ParticleSystem,
    particle: usize,
    dt: f64,
) -> Result<()> {
    ParticleStepper::new(system, &PotentialSpec::none(), PhaseConvention::Physical)?
        .kinetic_phase_step(state, particle, dt)
}

pub fn potential_phase_step(
    state: &mut StateVector,
    system: &ParticleSystem,
    potentials: &PotentialSpec,
    dt: f64,
) -> Result<()> {
    ParticleStepper::new(system, potentials, PhaseConvention::Physical)?.potential_phase_step(state, dt)
}

/// One split-operator step; returns the gates it used.
pub fn split_step(
    state: &mut StateVector,
    system: &ParticleSystem,
    potentials: &PotentialSpec,
    dt: f64,
    mode: SplitMode,
) -> Result<GateCounts> {
    let mut stepper = ParticleStepper::new(system, potentials, PhaseConvention::Physical)?;
    stepper.step(state, dt, mode)?;
    Ok(stepper.counts())
}

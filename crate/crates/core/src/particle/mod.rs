//! `N` distinguishable particles in one dimension, each on a periodic grid of
//! `2^k` points over a box of length `L`, evolved by split-operator steps.
//!
//! Particle `i` occupies qubits `[i·k, (i+1)·k)`; the register value `j`
//! encodes position `j·L/2^k`. The kinetic factor is applied in the momentum
//! basis reached by a gate-level QFT on the particle's register; potentials
//! are a single diagonal phase over the whole state.

mod evolve;
mod observables;
mod potential;
mod step;

pub use evolve::{evolve_particles, DensityRecord, MomentKind, ParticleEvolution, ParticleObservable};
pub use observables::{particle_observables, ParticleMoments};
pub use potential::{OneBodyPotential, PotentialKind, PotentialSpec, TwoBodyPotential};
pub use step::{
    kinetic_phase_step, potential_phase_step, split_step, ParticleStepper, PhaseConvention,
    SplitMode,
};

pub(crate) use potential::PotentialTables;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{check_cap, Register, StateVector, DEFAULT_QUBIT_CAP};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleSystem {
    num_particles: usize,
    qubits_per_particle: usize,
    box_length: f64,
    masses: Vec<f64>,
    hbar: f64,
}

impl ParticleSystem {
    pub fn new(
        num_particles: usize,
        qubits_per_particle: usize,
        box_length: f64,
        masses: Vec<f64>,
        hbar: f64,
    ) -> Result<Self> {
        if num_particles == 0 {
            return Err(Error::validation("num_particles must be at least 1"));
        }
        if qubits_per_particle == 0 {
            return Err(Error::validation("qubits_per_particle must be at least 1"));
        }
        if qubits_per_particle >= usize::BITS as usize / 2 {
            return Err(Error::CapExceeded {
                requested: num_particles * qubits_per_particle,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(Error::validation(format!(
                "box_length must be positive, got {box_length}"
            )));
        }
        if masses.len() != num_particles {
            return Err(Error::validation(format!(
                "{} masses given for {num_particles} particles",
                masses.len()
            )));
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::validation(format!("masses must be positive, got {m}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::validation(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            num_particles,
            qubits_per_particle,
            box_length,
            masses,
            hbar,
        })
    }

    /// Equal masses, `ℏ = 1`.
    pub fn uniform(num_particles: usize, qubits_per_particle: usize, box_length: f64, mass: f64) -> Result<Self> {
        Self::new(num_particles, qubits_per_particle, box_length, vec![mass; num_particles], 1.0)
    }

    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    pub fn qubits_per_particle(&self) -> usize {
        self.qubits_per_particle
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn total_qubits(&self) -> usize {
        self.num_particles * self.qubits_per_particle
    }

    pub fn grid_points(&self) -> usize {
        1 << self.qubits_per_particle
    }

    /// `Δx = L/2^k`.
    pub fn dx(&self) -> f64 {
        self.box_length / self.grid_points() as f64
    }

    pub fn register(&self, particle: usize) -> Register {
        Register::new(particle * self.qubits_per_particle, self.qubits_per_particle)
    }

    pub fn check_cap(&self, cap: usize) -> Result<()> {
        check_cap(self.total_qubits(), cap)
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.grid_points() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: self.grid_points(),
            });
        }
        Ok(())
    }

    /// `x_j = j·L/2^k`.
    pub fn position_of_index(&self, j: usize) -> Result<f64> {
        self.check_index(j)?;
        Ok(j as f64 * self.dx())
    }

    /// `p_l = (2πℏ/L)·s` with `s = l` below `2^{k−1}` and `l − 2^k` above.
    pub fn momentum_of_index(&self, l: usize) -> Result<f64> {
        self.check_index(l)?;
        Ok(self.signed_mode(l) as f64 * 2.0 * PI * self.hbar / self.box_length)
    }

    fn signed_mode(&self, l: usize) -> isize {
        let g = self.grid_points();
        if l < g / 2 {
            l as isize
        } else {
            l as isize - g as isize
        }
    }

    pub(crate) fn positions(&self) -> Vec<f64> {
        (0..self.grid_points()).map(|j| j as f64 * self.dx()).collect()
    }

    pub(crate) fn momenta(&self) -> Vec<f64> {
        let unit = 2.0 * PI * self.hbar / self.box_length;
        (0..self.grid_points())
            .map(|l| self.signed_mode(l) as f64 * unit)
            .collect()
    }
}

/// Gaussian packet `exp(−(x−x₀)²/(4σ²))·exp(i·p₀x/ℏ)` for one particle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wavepacket {
    pub center: f64,
    #[serde(default)]
    pub momentum: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavepacketSpec {
    pub packets: Vec<Wavepacket>,
}

impl WavepacketSpec {
    pub fn validate(&self, system: &ParticleSystem) -> Result<()> {
        if self.packets.len() != system.num_particles() {
            return Err(Error::validation(format!(
                "{} wavepackets given for {} particles",
                self.packets.len(),
                system.num_particles()
            )));
        }
        let (l, dx) = (system.box_length(), system.dx());
        for (i, p) in self.packets.iter().enumerate() {
            if !(p.center >= 0.0 && p.center < l) {
                return Err(Error::validation(format!(
                    "packet {i}: center {} outside [0, {l})",
                    p.center
                )));
            }
            if !p.momentum.is_finite() {
                return Err(Error::validation(format!("packet {i}: momentum must be finite")));
            }
            if p.width.is_nan() || p.width < 2.0 * dx {
                return Err(Error::UnresolvableWidth { width: p.width, dx });
            }
        }
        Ok(())
    }
}

/// Product state of per-particle Gaussian packets, each register normalized.
pub fn prepare_product_wavepackets(system: &ParticleSystem, spec: &WavepacketSpec) -> Result<StateVector> {
    prepare_product_wavepackets_with_cap(system, spec, DEFAULT_QUBIT_CAP)
}

pub fn prepare_product_wavepackets_with_cap(
    system: &ParticleSystem,
    spec: &WavepacketSpec,
    cap: usize,
) -> Result<StateVector> {
    system.check_cap(cap)?;
    spec.validate(system)?;
    let xs = system.positions();
    let l = system.box_length();
    let factors: Vec<Vec<Complex64>> = spec
        .packets
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let envelope = |x: f64| (-(x - p.center).powi(2) / (4.0 * p.width * p.width)).exp();
            let edge = envelope(0.0).max(envelope(l));
            if edge > 1e-8 {
                log::warn!(
                    "packet {i}: Gaussian tail at the box edge is {edge:.2e} of the peak; periodic wrap-around may matter"
                );
            }
            let mut amps: Vec<Complex64> = xs
                .iter()
                .map(|&x| Complex64::from_polar(envelope(x), p.momentum * x / system.hbar()))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            amps.iter_mut().for_each(|a| *a /= norm);
            amps
        })
        .collect();

    let regs: Vec<Register> = (0..system.num_particles()).map(|i| system.register(i)).collect();
    let amps = (0..1usize << system.total_qubits())
        .map(|b| {
            regs.iter()
                .zip(&factors)
                .map(|(r, f)| f[r.read(b)])
                .product()
        })
        .collect();
    StateVector::from_amplitudes(amps)
}

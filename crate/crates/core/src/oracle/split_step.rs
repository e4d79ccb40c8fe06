use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::particle::{ParticleSystem, PhaseConvention, PotentialKind, PotentialSpec, SplitMode};
use crate::statevec::StateVector;

/// Array-FFT split-step integrator, the gate-free twin of the QFT path.
///
/// The amplitude array is treated as an `N`-dimensional grid with particle 0
/// on the fastest axis. The "forward" transform along an axis carries the
/// kernel `e^{+2πi·jl/g}/√g` (rustfft's inverse direction, rescaled) so it
/// matches the gate-level QFT convention.
pub struct ClassicalSplitStep {
    grid: usize,
    num_particles: usize,
    hbar: f64,
    kinetic: Vec<Vec<f64>>,
    potential: Vec<f64>,
    convention: PhaseConvention,
    plus_kernel: Arc<dyn Fft<f64>>,
    minus_kernel: Arc<dyn Fft<f64>>,
}

impl ClassicalSplitStep {
    pub fn new(system: &ParticleSystem, potentials: &PotentialSpec, convention: PhaseConvention) -> Result<Self> {
        potentials.validate(system)?;
        let g = system.grid_points();
        let n = system.num_particles();
        let l = system.box_length();
        let hbar = system.hbar();
        let dx = l / g as f64;

        let kinetic = system
            .masses()
            .iter()
            .map(|&m| {
                (0..g)
                    .map(|idx| {
                        let s = if 2 * idx < g { idx as f64 } else { idx as f64 - g as f64 };
                        let p = 2.0 * PI * hbar * s / l;
                        p * p / (2.0 * m)
                    })
                    .collect()
            })
            .collect();

        let total = g.pow(n as u32);
        let mut potential = vec![0.0; total];
        let mut coords = vec![0usize; n];
        for (flat, v) in potential.iter_mut().enumerate() {
            let mut rest = flat;
            for c in coords.iter_mut() {
                *c = rest % g;
                rest /= g;
            }
            for term in &potentials.one_body {
                let j = coords[term.particle];
                *v += term.kind.value(j as f64 * dx, j);
            }
            for term in &potentials.two_body {
                let (a, b) = term.particles;
                let mut r = (coords[a] as f64 - coords[b] as f64) * dx;
                if potentials.minimal_image {
                    r -= l * ((r + 0.5 * l) / l).floor();
                }
                let idx = match term.kind {
                    PotentialKind::Tabulated { .. } => ((r / dx).round() as isize + g as isize - 1) as usize,
                    _ => 0,
                };
                *v += term.kind.value(r, idx);
            }
        }

        let mut planner = FftPlanner::new();
        Ok(Self {
            grid: g,
            num_particles: n,
            hbar,
            kinetic,
            potential,
            convention,
            plus_kernel: planner.plan_fft_inverse(g),
            minus_kernel: planner.plan_fft_forward(g),
        })
    }

    /// Kinetic factor for one particle: transform along its axis, scale by the
    /// kinetic phase, transform back.
    fn kinetic(&self, amps: &mut [Complex64], particle: usize, dt: f64) {
        let g = self.grid;
        let stride = g.pow(particle as u32);
        let norm = 1.0 / g as f64;
        let scale = self.convention.factor() * dt / self.hbar;
        let phases: Vec<Complex64> = self.kinetic[particle]
            .iter()
            .map(|e| Complex64::from_polar(norm, scale * e))
            .collect();
        let mut line = vec![Complex64::new(0.0, 0.0); g];
        for outer in (0..amps.len()).step_by(g * stride) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, x) in line.iter_mut().enumerate() {
                    *x = amps[base + i * stride];
                }
                self.plus_kernel.process(&mut line);
                for (x, ph) in line.iter_mut().zip(&phases) {
                    *x *= ph;
                }
                self.minus_kernel.process(&mut line);
                for (i, x) in line.iter().enumerate() {
                    amps[base + i * stride] = *x;
                }
            }
        }
    }

    fn potential(&self, amps: &mut [Complex64], dt: f64) {
        let scale = self.convention.factor() * dt / self.hbar;
        for (a, v) in amps.iter_mut().zip(&self.potential) {
            *a *= Complex64::cis(scale * v);
        }
    }

    fn kinetic_sweep(&self, amps: &mut [Complex64], dt: f64) {
        for i in 0..self.num_particles {
            self.kinetic(amps, i, dt);
        }
    }

    pub fn step(&self, state: &mut StateVector, dt: f64, mode: SplitMode) -> Result<()> {
        if state.dim() != self.potential.len() {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: self.potential.len(),
            });
        }
        let amps = state.amplitudes_mut();
        match mode {
            SplitMode::Lie => {
                self.kinetic_sweep(amps, dt);
                self.potential(amps, dt);
            }
            SplitMode::Strang => {
                self.kinetic_sweep(amps, 0.5 * dt);
                self.potential(amps, dt);
                self.kinetic_sweep(amps, 0.5 * dt);
            }
        }
        Ok(())
    }
}

/// Runs `steps` classical split-operator steps from `psi0`.
pub fn classical_split_step(
    system: &ParticleSystem,
    potentials: &PotentialSpec,
    psi0: &StateVector,
    dt: f64,
    steps: u64,
    mode: SplitMode,
) -> Result<StateVector> {
    let twin = ClassicalSplitStep::new(system, potentials, PhaseConvention::Physical)?;
    let mut state = psi0.clone();
    for _ in 0..steps {
        twin.step(&mut state, dt, mode)?;
    }
    Ok(state)
}

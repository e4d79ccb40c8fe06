use serde::{Deserialize, Serialize};

use super::ParticleSystem;
use crate::error::{Error, Result};
use crate::qft::{apply_qft, QftDirection};
use crate::statevec::StateVector;

/// Position and momentum moments of one particle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleMoments {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub density: Vec<f64>,
}

impl ParticleMoments {
    pub fn sigma_x(&self) -> f64 {
        (self.mean_x2 - self.mean_x * self.mean_x).max(0.0).sqrt()
    }

    pub fn sigma_p(&self) -> f64 {
        (self.mean_p2 - self.mean_p * self.mean_p).max(0.0).sqrt()
    }
}

/// Moments for every particle of a normalized state.
///
/// Momentum moments come from a copy with every register transformed by the
/// inverse QFT, whose kernel `e^{−2πi·jl/2^k}` sends `e^{ip₀x/ℏ}` to the
/// index of `+p₀` under `momentum_of_index`.
pub fn particle_observables(state: &StateVector, system: &ParticleSystem) -> Result<Vec<ParticleMoments>> {
    state.ensure_normalized()?;
    moments(state, system, true)
}

pub(crate) fn moments(
    state: &StateVector,
    system: &ParticleSystem,
    with_momentum: bool,
) -> Result<Vec<ParticleMoments>> {
    if state.num_qubits() != system.total_qubits() {
        return Err(Error::DimensionMismatch {
            left: state.num_qubits(),
            right: system.total_qubits(),
        });
    }
    let norm_sqr = state.norm_sqr();
    let xs = system.positions();
    let ps = system.momenta();

    let momentum_state = if with_momentum {
        let mut copy = state.clone();
        for i in 0..system.num_particles() {
            apply_qft(&mut copy, system.register(i), QftDirection::Inverse)?;
        }
        Some(copy)
    } else {
        None
    };

    (0..system.num_particles())
        .map(|i| {
            let reg = system.register(i);
            let density: Vec<f64> = state
                .marginal_probabilities(reg)?
                .into_iter()
                .map(|p| p / norm_sqr)
                .collect();
            let (mean_x, mean_x2) = first_two_moments(&density, &xs);
            let (mean_p, mean_p2) = match &momentum_state {
                Some(m) => {
                    let pd = m.marginal_probabilities(reg)?;
                    let (a, b) = first_two_moments(&pd, &ps);
                    (a / norm_sqr, b / norm_sqr)
                }
                None => (f64::NAN, f64::NAN),
            };
            Ok(ParticleMoments {
                mean_x,
                mean_x2,
                mean_p,
                mean_p2,
                density,
            })
        })
        .collect()
}

fn first_two_moments(weights: &[f64], points: &[f64]) -> (f64, f64) {
    weights
        .iter()
        .zip(points)
        .fold((0.0, 0.0), |(m1, m2), (w, x)| (m1 + w * x, m2 + w * x * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particle::{prepare_product_wavepackets, Wavepacket, WavepacketSpec};

    #[test]
    fn point_mass() {
        let sys = ParticleSystem::uniform(2, 3, 2.0, 1.0).unwrap();
        // particle 0 at j = 5, particle 1 at j = 2
        let s = StateVector::basis(6, 5 | (2 << 3)).unwrap();
        let m = particle_observables(&s, &sys).unwrap();
        assert_eq!(m[0].mean_x, 1.25);
        assert_eq!(m[0].sigma_x(), 0.0);
        assert_eq!(m[1].mean_x, 0.5);
        assert_eq!(m[0].density[5], 1.0);
    }

    #[test]
    fn symmetric_packet_has_zero_momentum() {
        let sys = ParticleSystem::uniform(1, 7, 1.0, 1.0).unwrap();
        let spec = WavepacketSpec {
            packets: vec![Wavepacket { center: 0.5, momentum: 0.0, width: 0.05 }],
        };
        let s = prepare_product_wavepackets(&sys, &spec).unwrap();
        let m = particle_observables(&s, &sys).unwrap();
        assert!(m[0].mean_p.abs() < 1e-10);
        assert!((m[0].mean_x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn momentum_sign_follows_packet() {
        let sys = ParticleSystem::uniform(1, 8, 1.0, 1.0).unwrap();
        let p0 = 2.0 * std::f64::consts::PI * 10.0;
        let spec = WavepacketSpec {
            packets: vec![Wavepacket { center: 0.5, momentum: p0, width: 0.06 }],
        };
        let s = prepare_product_wavepackets(&sys, &spec).unwrap();
        let m = particle_observables(&s, &sys).unwrap();
        assert!((m[0].mean_p - p0).abs() < 1e-6, "{}", m[0].mean_p);
    }
}

use serde::{Deserialize, Serialize};

use super::ParticleSystem;
use crate::error::{Error, Result};
use crate::statevec::Register;

/// Shape of a one-body potential `V(x)` or a two-body potential `V(x_a − x_b)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialKind {
    /// `½·stiffness·(u − center)²`.
    Harmonic { center: f64, stiffness: f64 },
    /// `Σ_n coefficients[n]·u^n`.
    Polynomial { coefficients: Vec<f64> },
    /// `strength / √((u − center)² + softening²)`.
    CoulombSoft {
        strength: f64,
        softening: f64,
        #[serde(default)]
        center: f64,
    },
    /// Grid values: `2^k` entries indexed by grid point for one-body terms,
    /// `2^{k+1} − 1` entries indexed by `(j_a − j_b) + 2^k − 1` for two-body terms.
    Tabulated { values: Vec<f64> },
}

impl PotentialKind {
    /// Value at coordinate `u`; tabulated kinds read `table_index` instead.
    pub fn value(&self, u: f64, table_index: usize) -> f64 {
        match self {
            PotentialKind::Harmonic { center, stiffness } => 0.5 * stiffness * (u - center).powi(2),
            PotentialKind::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * u + c)
            }
            PotentialKind::CoulombSoft {
                strength,
                softening,
                center,
            } => strength / ((u - center).powi(2) + softening * softening).sqrt(),
            PotentialKind::Tabulated { values } => values[table_index],
        }
    }

    fn validate(&self, expected_table_len: usize, what: &str) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(format!("{what}: {name} must be finite, got {v}")))
            }
        };
        match self {
            PotentialKind::Harmonic { center, stiffness } => {
                finite("center", *center)?;
                finite("stiffness", *stiffness)?;
            }
            PotentialKind::Polynomial { coefficients } => {
                for c in coefficients {
                    finite("coefficient", *c)?;
                }
            }
            PotentialKind::CoulombSoft {
                strength,
                softening,
                center,
            } => {
                finite("strength", *strength)?;
                finite("center", *center)?;
                if !(*softening > 0.0 && softening.is_finite()) {
                    return Err(Error::validation(format!(
                        "{what}: coulomb_soft softening must be > 0, got {softening}"
                    )));
                }
            }
            PotentialKind::Tabulated { values } => {
                if values.len() != expected_table_len {
                    return Err(Error::validation(format!(
                        "{what}: tabulated potential has {} values, grid needs {expected_table_len}",
                        values.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneBodyPotential {
    pub particle: usize,
    pub kind: PotentialKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoBodyPotential {
    pub particles: (usize, usize),
    pub kind: PotentialKind,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    #[serde(default)]
    pub one_body: Vec<OneBodyPotential>,
    #[serde(default)]
    pub two_body: Vec<TwoBodyPotential>,
    /// Wrap two-body separations into `[−L/2, L/2)` instead of using the raw difference.
    #[serde(default)]
    pub minimal_image: bool,
}

impl PotentialSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.one_body.is_empty() && self.two_body.is_empty()
    }

    pub fn validate(&self, system: &ParticleSystem) -> Result<()> {
        let n = system.num_particles();
        let g = system.grid_points();
        for (i, term) in self.one_body.iter().enumerate() {
            if term.particle >= n {
                return Err(Error::validation(format!(
                    "one_body[{i}]: particle {} out of range for {n} particles",
                    term.particle
                )));
            }
            term.kind.validate(g, &format!("one_body[{i}]"))?;
        }
        for (i, term) in self.two_body.iter().enumerate() {
            let (a, b) = term.particles;
            if a >= n || b >= n {
                return Err(Error::validation(format!(
                    "two_body[{i}]: particle pair ({a}, {b}) out of range for {n} particles"
                )));
            }
            if a == b {
                return Err(Error::validation(format!(
                    "two_body[{i}]: particles distinct, got ({a}, {b})"
                )));
            }
            term.kind.validate(2 * g - 1, &format!("two_body[{i}]"))?;
        }
        Ok(())
    }
}

/// Potential energy per basis index, factored into per-register lookup tables.
#[derive(Clone, Debug)]
pub(crate) struct PotentialTables {
    one_body: Vec<(Register, Vec<f64>)>,
    /// (register a, register b, table indexed by j_a − j_b + 2^k − 1)
    two_body: Vec<(Register, Register, Vec<f64>)>,
    offset: isize,
}

impl PotentialTables {
    pub(crate) fn build(system: &ParticleSystem, spec: &PotentialSpec) -> Result<Self> {
        spec.validate(system)?;
        let g = system.grid_points() as isize;
        let dx = system.dx();
        let one_body = spec
            .one_body
            .iter()
            .map(|t| {
                let table = (0..g as usize)
                    .map(|j| t.kind.value(j as f64 * dx, j))
                    .collect();
                (system.register(t.particle), table)
            })
            .collect();
        let two_body = spec
            .two_body
            .iter()
            .map(|t| {
                let table = (-(g - 1)..g)
                    .map(|d| {
                        let d = if spec.minimal_image { wrap_index(d, g) } else { d };
                        t.kind.value(d as f64 * dx, (d + g - 1) as usize)
                    })
                    .collect();
                (system.register(t.particles.0), system.register(t.particles.1), table)
            })
            .collect();
        Ok(Self {
            one_body,
            two_body,
            offset: g - 1,
        })
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.one_body.is_empty() && self.two_body.is_empty()
    }

    /// Total potential energy of basis index `b`.
    #[inline]
    pub(crate) fn energy(&self, b: usize) -> f64 {
        let mut v = 0.0;
        for (reg, table) in &self.one_body {
            v += table[reg.read(b)];
        }
        for (ra, rb, table) in &self.two_body {
            let d = ra.read(b) as isize - rb.read(b) as isize;
            v += table[(d + self.offset) as usize];
        }
        v
    }
}

/// Wraps a grid-index separation into `[−g/2, g/2)`.
fn wrap_index(d: isize, g: isize) -> isize {
    (d + g / 2).rem_euclid(g) - g / 2
}

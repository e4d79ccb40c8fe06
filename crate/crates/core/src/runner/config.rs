//! JSON problem files.
//!
//! ```json
//! {
//!   "problem_type": "spins" | "particles",
//!   "system": { ... },
//!   "potentials": { ... },          // particles only, optional
//!   "initial_state": { ... },
//!   "plan": { ... },
//!   "tolerances": { ... }           // optional
//! }
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::AnalyticCase;
use crate::particle::{
    OneBodyPotential, ParticleObservable, ParticleSystem, PotentialKind, PotentialSpec, TwoBodyPotential,
    Wavepacket, WavepacketSpec,
};
use crate::plan::{EvolutionPlan, Sign, StepMode};
use crate::spin::{PauliProduct, PauliTerm, SpinSystem};
use crate::statevec::{check_cap, DEFAULT_QUBIT_CAP};

/// Environment variable overriding the emulator qubit cap.
pub const CAP_ENV_VAR: &str = "QSIM_CAP_QUBITS";

/// Emulator cap from `QSIM_CAP_QUBITS`, or the default.
pub fn cap_from_env() -> Result<usize> {
    match std::env::var(CAP_ENV_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::validation(format!("{CAP_ENV_VAR}={v} is not a qubit count"))),
        Err(_) => Ok(DEFAULT_QUBIT_CAP),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemType {
    Spins,
    Particles,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem_type: ProblemType,
    system: serde_json::Value,
    #[serde(default)]
    potentials: Option<serde_json::Value>,
    initial_state: serde_json::Value,
    plan: serde_json::Value,
    #[serde(default)]
    tolerances: Option<serde_json::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpinSystemConfig {
    num_spins: usize,
    #[serde(default = "one")]
    hbar: f64,
    terms: Vec<TermConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermConfig {
    coefficient: f64,
    /// Pauli label such as `X0` or `Z0Z1`.
    paulis: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParticleSystemConfig {
    num_particles: usize,
    qubits_per_particle: usize,
    #[serde(default = "one")]
    box_length: f64,
    #[serde(default)]
    masses: Option<Vec<f64>>,
    #[serde(default = "one")]
    hbar: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialsConfig {
    #[serde(default)]
    one_body: Vec<OneBodyConfig>,
    #[serde(default)]
    two_body: Vec<TwoBodyConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OneBodyConfig {
    particle: usize,
    kind: KindConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoBodyConfig {
    particles: (usize, usize),
    kind: KindConfig,
}

/// Mirrors [`PotentialKind`], with the soft-Coulomb softening optional
/// (default `2Δx`).
#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum KindConfig {
    Harmonic {
        center: f64,
        stiffness: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    CoulombSoft {
        strength: f64,
        #[serde(default)]
        softening: Option<f64>,
        #[serde(default)]
        center: f64,
    },
    Tabulated {
        values: Vec<f64>,
    },
}

impl KindConfig {
    fn into_kind(self, dx: f64) -> PotentialKind {
        match self {
            KindConfig::Harmonic { center, stiffness } => PotentialKind::Harmonic { center, stiffness },
            KindConfig::Polynomial { coefficients } => PotentialKind::Polynomial { coefficients },
            KindConfig::CoulombSoft {
                strength,
                softening,
                center,
            } => PotentialKind::CoulombSoft {
                strength,
                softening: softening.unwrap_or(2.0 * dx),
                center,
            },
            KindConfig::Tabulated { values } => PotentialKind::Tabulated { values },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialStateConfig {
    #[serde(default)]
    basis_index: Option<usize>,
    #[serde(default)]
    wavepackets: Option<Vec<Wavepacket>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanConfig {
    dt: f64,
    total_time: f64,
    mode: StepMode,
    #[serde(default = "one_u64")]
    sample_stride: u64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    shots: u64,
    #[serde(default = "plus")]
    literal_sign: Sign,
    #[serde(default)]
    renormalize_after_step: bool,
    #[serde(default)]
    paper_literal_signs: bool,
    #[serde(default)]
    minimal_image: bool,
    #[serde(default)]
    observables: Vec<String>,
}

/// Embedded pass/fail checks evaluated after a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on `|‖ψ‖ − 1|` over every trajectory record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_drift_max: Option<f64>,
    /// Lower bound on `|⟨ψ_oracle|ψ⟩|/‖ψ‖` at the realized final time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_fidelity_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub analytic: Vec<AnalyticCheck>,
}

/// Compares a trajectory column against `offset + closed_form(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticCheck {
    pub observable: String,
    pub case: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rel_error: Option<f64>,
    /// Only records with `t ≤ until_time` are compared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub until_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParticleInitial {
    Basis(usize),
    Wavepackets(WavepacketSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Spins {
        system: SpinSystem,
        initial_basis: usize,
        observables: Vec<PauliProduct>,
    },
    Particles {
        system: ParticleSystem,
        potentials: PotentialSpec,
        initial: ParticleInitial,
        observables: Vec<ParticleObservable>,
    },
}

impl Problem {
    pub fn problem_type(&self) -> ProblemType {
        match self {
            Problem::Spins { .. } => ProblemType::Spins,
            Problem::Particles { .. } => ProblemType::Particles,
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            Problem::Spins { system, .. } => system.num_spins(),
            Problem::Particles { system, .. } => system.total_qubits(),
        }
    }

    /// Trajectory column names, in declared order (densities excluded).
    pub fn observable_columns(&self) -> Vec<String> {
        match self {
            Problem::Spins { observables, .. } => observables.iter().map(|o| o.to_string()).collect(),
            Problem::Particles { observables, .. } => observables
                .iter()
                .filter(|o| matches!(o, ParticleObservable::Moment { .. }))
                .map(|o| o.to_string())
                .collect(),
        }
    }
}

/// A fully validated problem file.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub problem: Problem,
    pub plan: EvolutionPlan,
    pub tolerances: Tolerances,
    pub cap: usize,
    /// The parsed document, echoed into reports.
    pub source: serde_json::Value,
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<LoadedProblem> {
    load_problem_with_cap(path, cap_from_env()?)
}

pub fn load_problem_with_cap(path: impl AsRef<Path>, cap: usize) -> Result<LoadedProblem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text, cap).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn section<T: DeserializeOwned>(name: &str, value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Parse(format!("in `{name}`: {e}")))
}

pub fn parse_problem(text: &str, cap: usize) -> Result<LoadedProblem> {
    let source: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let raw: RawConfig = serde_json::from_value(source.clone()).map_err(|e| Error::Parse(e.to_string()))?;

    let plan_cfg: PlanConfig = section("plan", raw.plan)?;
    let tolerances: Tolerances = match raw.tolerances {
        Some(v) => section("tolerances", v)?,
        None => Tolerances::default(),
    };
    let initial: InitialStateConfig = section("initial_state", raw.initial_state)?;

    let plan = EvolutionPlan {
        dt: plan_cfg.dt,
        total_time: plan_cfg.total_time,
        mode: plan_cfg.mode,
        sample_stride: plan_cfg.sample_stride,
        seed: plan_cfg.seed,
        shots: plan_cfg.shots,
        literal_sign: plan_cfg.literal_sign,
        renormalize_after_step: plan_cfg.renormalize_after_step,
        paper_literal_signs: plan_cfg.paper_literal_signs,
        minimal_image: plan_cfg.minimal_image,
    };
    plan.validate().map_err(|e| Error::validation(e.to_string()))?;

    let problem = match raw.problem_type {
        ProblemType::Spins => {
            if raw.potentials.is_some() {
                return Err(Error::validation("`potentials` only applies to particle problems"));
            }
            if !matches!(plan.mode, StepMode::LiteralPaper | StepMode::ExactTerm | StepMode::Strang) {
                return Err(Error::validation(
                    "spin problems use mode literal_paper, exact_term or strang",
                ));
            }
            let cfg: SpinSystemConfig = section("system", raw.system)?;
            check_cap(cfg.num_spins, cap)?;
            let terms = cfg
                .terms
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let product = PauliProduct::parse(&t.paulis).map_err(|e| match e {
                        Error::Validation(msg) => Error::validation(format!("term {i}: {msg}")),
                        other => other,
                    })?;
                    PauliTerm::new(t.coefficient, product.ops().to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            let system = SpinSystem::new(cfg.num_spins, terms, cfg.hbar)?;

            if initial.wavepackets.is_some() {
                return Err(Error::validation("spin problems take `initial_state.basis_index`"));
            }
            let initial_basis = initial.basis_index.unwrap_or(0);
            if initial_basis >= 1usize << system.num_spins() {
                return Err(Error::validation(format!(
                    "initial basis index {initial_basis} out of range for {} spins",
                    system.num_spins()
                )));
            }
            let observables = plan_cfg
                .observables
                .iter()
                .map(|o| PauliProduct::parse(o))
                .collect::<Result<Vec<_>>>()?;
            for o in &observables {
                if let Some(site) = o.sites().find(|&s| s >= system.num_spins()) {
                    return Err(Error::validation(format!("observable {o}: site {site} out of range")));
                }
            }
            Problem::Spins {
                system,
                initial_basis,
                observables,
            }
        }
        ProblemType::Particles => {
            if !matches!(plan.mode, StepMode::Lie | StepMode::Strang) {
                return Err(Error::validation("particle problems use mode lie or strang"));
            }
            let cfg: ParticleSystemConfig = section("system", raw.system)?;
            if cfg.num_particles == 0 || cfg.qubits_per_particle == 0 {
                return Err(Error::validation("num_particles and qubits_per_particle must be at least 1"));
            }
            check_cap(cfg.num_particles.saturating_mul(cfg.qubits_per_particle), cap)?;
            let masses = cfg.masses.unwrap_or_else(|| vec![1.0; cfg.num_particles]);
            let system = ParticleSystem::new(
                cfg.num_particles,
                cfg.qubits_per_particle,
                cfg.box_length,
                masses,
                cfg.hbar,
            )?;
            let pot_cfg: PotentialsConfig = match raw.potentials {
                Some(v) => section("potentials", v)?,
                None => PotentialsConfig::default(),
            };
            let dx = system.dx();
            let potentials = PotentialSpec {
                one_body: pot_cfg
                    .one_body
                    .into_iter()
                    .map(|t| OneBodyPotential {
                        particle: t.particle,
                        kind: t.kind.into_kind(dx),
                    })
                    .collect(),
                two_body: pot_cfg
                    .two_body
                    .into_iter()
                    .map(|t| TwoBodyPotential {
                        particles: t.particles,
                        kind: t.kind.into_kind(dx),
                    })
                    .collect(),
                minimal_image: plan.minimal_image,
            };
            potentials.validate(&system)?;

            let initial = match (initial.basis_index, initial.wavepackets) {
                (Some(b), None) => {
                    if b >= 1usize << system.total_qubits() {
                        return Err(Error::validation(format!(
                            "initial basis index {b} out of range for {} qubits",
                            system.total_qubits()
                        )));
                    }
                    ParticleInitial::Basis(b)
                }
                (None, Some(packets)) => {
                    let spec = WavepacketSpec { packets };
                    spec.validate(&system)?;
                    ParticleInitial::Wavepackets(spec)
                }
                _ => {
                    return Err(Error::validation(
                        "initial_state needs exactly one of `basis_index` or `wavepackets`",
                    ))
                }
            };
            let observables = plan_cfg
                .observables
                .iter()
                .map(|o| ParticleObservable::parse(o))
                .collect::<Result<Vec<_>>>()?;
            if let Some(o) = observables.iter().find(|o| o.particle() >= system.num_particles()) {
                return Err(Error::validation(format!("observable {o}: particle out of range")));
            }
            Problem::Particles {
                system,
                potentials,
                initial,
                observables,
            }
        }
    };

    let columns = problem.observable_columns();
    for check in &tolerances.analytic {
        AnalyticCase::from_name(&check.case, &check.params)?;
        if !columns.contains(&check.observable) {
            return Err(Error::validation(format!(
                "analytic check references undeclared observable `{}`",
                check.observable
            )));
        }
        if check.max_abs_error.is_none() && check.max_rel_error.is_none() {
            return Err(Error::validation(format!(
                "analytic check on `{}` needs max_abs_error or max_rel_error",
                check.observable
            )));
        }
    }

    Ok(LoadedProblem {
        problem,
        plan,
        tolerances,
        cap,
        source,
    })
}

fn one() -> f64 {
    1.0
}

fn one_u64() -> u64 {
    1
}

fn plus() -> Sign {
    Sign::Plus
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_SPIN: &str = r#"{
        "problem_type": "spins",
        "system": { "num_spins": 1, "terms": [ { "coefficient": 1.0, "paulis": "X0" } ] },
        "initial_state": { "basis_index": 0 },
        "plan": { "dt": 0.01, "total_time": 1.0, "mode": "exact_term", "observables": ["Z0"] }
    }"#;

    #[test]
    fn minimal_spin_config() {
        let p = parse_problem(MINIMAL_SPIN, 26).unwrap();
        match p.problem {
            Problem::Spins { system, observables, .. } => {
                assert_eq!(system.num_spins(), 1);
                assert_eq!(system.terms().len(), 1);
                assert_eq!(observables.len(), 1);
            }
            _ => panic!("expected spins"),
        }
        assert_eq!(p.plan.steps().unwrap(), 100);
    }

    #[test]
    fn repeated_site_is_rejected() {
        let text = MINIMAL_SPIN.replace("\"X0\"", "\"Z1Z1\"").replace("\"num_spins\": 1", "\"num_spins\": 2");
        let err = parse_problem(&text, 26).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("sites distinct"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL_SPIN.replace("\"mode\"", "\"modee\": 1, \"mode\"");
        assert!(matches!(parse_problem(&text, 26), Err(Error::Parse(_))));
        let text = MINIMAL_SPIN.replace("\"problem_type\"", "\"extra\": 0, \"problem_type\"");
        assert!(matches!(parse_problem(&text, 26), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_problem("{\n  \"problem_type\": \"spins\",\n  oops\n}", 26).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn cap_is_enforced() {
        let text = MINIMAL_SPIN.replace("\"num_spins\": 1", "\"num_spins\": 5");
        assert!(matches!(parse_problem(&text, 4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn mode_must_match_problem() {
        let text = MINIMAL_SPIN.replace("exact_term", "lie");
        assert!(matches!(parse_problem(&text, 26), Err(Error::Validation(_))));
    }

    #[test]
    fn particle_config_defaults() {
        let text = r#"{
            "problem_type": "particles",
            "system": { "num_particles": 2, "qubits_per_particle": 3, "box_length": 4.0 },
            "potentials": { "two_body": [ { "particles": [0, 1], "kind": { "coulomb_soft": { "strength": 1.0 } } } ] },
            "initial_state": { "basis_index": 9 },
            "plan": { "dt": 0.01, "total_time": 0.1, "mode": "strang", "observables": ["mean_x:1", "density:0"] }
        }"#;
        let p = parse_problem(text, 26).unwrap();
        let Problem::Particles { system, potentials, observables, .. } = &p.problem else {
            panic!("expected particles");
        };
        assert_eq!(system.masses(), &[1.0, 1.0]);
        assert_eq!(
            potentials.two_body[0].kind,
            PotentialKind::CoulombSoft { strength: 1.0, softening: 1.0, center: 0.0 }
        );
        assert_eq!(observables.len(), 2);
        assert_eq!(p.problem.observable_columns(), vec!["mean_x:1".to_string()]);
    }

    #[test]
    fn analytic_checks_are_validated() {
        let with_check = |check: &str| {
            MINIMAL_SPIN.replace(
                "\"initial_state\"",
                &format!("\"tolerances\": {{ \"analytic\": [{check}] }}, \"initial_state\""),
            )
        };
        let ok = with_check(r#"{"observable": "Z0", "case": "rabi", "params": {"omega": 1}, "max_abs_error": 1e-3}"#);
        assert!(parse_problem(&ok, 26).is_ok());
        let bad_case = with_check(r#"{"observable": "Z0", "case": "nope", "max_abs_error": 1e-3}"#);
        assert!(matches!(parse_problem(&bad_case, 26), Err(Error::UnknownAnalyticCase(_))));
        let bad_obs = with_check(r#"{"observable": "X0", "case": "rabi", "params": {"omega": 1}, "max_abs_error": 1e-3}"#);
        assert!(parse_problem(&bad_obs, 26).is_err());
    }
}

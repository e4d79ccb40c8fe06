//! Problem intake, run orchestration, sweeps and gate accounting.

mod census;
mod config;
mod run;
mod sweep;

pub use census::{
    format_scaling_table, gate_census, predicted_step_counts, scaling_table, CensusReport, ScalingRow,
};
pub use config::{
    cap_from_env, load_problem, load_problem_with_cap, parse_problem, AnalyticCheck, LoadedProblem,
    ParticleInitial, Problem, ProblemType, Tolerances, CAP_ENV_VAR,
};
pub use run::{
    fidelity, initial_state, oracle_propagator, oracle_state, run, CheckResult, RunReport, SampledEstimate,
    SamplingReport,
};
pub use sweep::{convergence_sweep, expected_order, SweepReport, SweepRow};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// Process exit code for an error raised while loading or running a problem.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_)
        | Error::Parse(_)
        | Error::InvalidPlan(_)
        | Error::UnresolvableWidth { .. }
        | Error::UnknownAnalyticCase(_) => EXIT_VALIDATION,
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_OTHER,
    }
}

mod common;

use common::config_path;
use qsim_core::particle::{PotentialKind, SplitMode};
use qsim_core::runner::{
    convergence_sweep, exit_code, format_scaling_table, gate_census, load_problem_with_cap, parse_problem, run,
    scaling_table, ParticleInitial, Problem, EXIT_CAP, EXIT_OTHER, EXIT_VALIDATION,
};
use qsim_core::Error;

const CONFIGS: [&str; 6] = [
    "rabi.json",
    "rabi_literal.json",
    "heisenberg3.json",
    "free_gaussian.json",
    "harmonic.json",
    "two_particle_coulomb.json",
];

#[test]
fn bundled_configs_pass_their_tolerances() {
    for name in CONFIGS {
        let loaded = load_problem_with_cap(config_path(name), 26).unwrap();
        assert!(
            loaded.tolerances.oracle_fidelity_min.is_some(),
            "{name} should check against the oracle"
        );
        let report = run(&loaded).unwrap();
        let failed: Vec<_> = report.failed_checks().collect();
        assert!(failed.is_empty(), "{name}: {failed:?}");
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn two_particle_fixture_loads_as_documented() {
    let loaded = load_problem_with_cap(config_path("two_particle_coulomb.json"), 26).unwrap();
    let Problem::Particles {
        system,
        potentials,
        initial,
        observables,
    } = &loaded.problem
    else {
        panic!("expected a particle problem");
    };
    assert_eq!(system.num_particles(), 2);
    assert_eq!(system.qubits_per_particle(), 5);
    assert_eq!(system.box_length(), 10.0);
    assert_eq!(potentials.one_body.len(), 2);
    assert_eq!(
        potentials.two_body[0].kind,
        PotentialKind::CoulombSoft {
            strength: 1.0,
            softening: 2.0 * system.dx(),
            center: 0.0
        }
    );
    assert!(matches!(initial, ParticleInitial::Wavepackets(spec) if spec.packets.len() == 2));
    assert_eq!(observables.len(), 4);
    assert_eq!(loaded.plan.steps().unwrap(), 1000);
}

#[test]
fn reports_are_deterministic_apart_from_timestamp() {
    let loaded = load_problem_with_cap(config_path("heisenberg3.json"), 26).unwrap();
    let mut a = run(&loaded).unwrap();
    let mut b = run(&loaded).unwrap();
    a.generated_at = 0;
    b.generated_at = 0;
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());

    let mut reseeded = loaded.clone();
    reseeded.plan.seed += 1;
    let c = run(&reseeded).unwrap();
    assert_ne!(a.sampling.unwrap().histogram, c.sampling.unwrap().histogram);
}

#[test]
fn report_json_has_the_documented_fields() {
    let loaded = load_problem_with_cap(config_path("rabi.json"), 26).unwrap();
    let report = run(&loaded).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    for key in [
        "config",
        "rng_algorithm",
        "seed",
        "steps",
        "realized_time",
        "gate_counts",
        "trajectory",
        "sampling",
        "checks",
        "generated_at",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["steps"], 5000);
    assert_eq!(v["trajectory"].as_array().unwrap().len(), 101);
    let sampling = &v["sampling"];
    assert_eq!(sampling["shots"], 2000);
    let est = &sampling["estimates"][0];
    let (e, se, exact) = (
        est["estimate"].as_f64().unwrap(),
        est["standard_error"].as_f64().unwrap(),
        est["exact"].as_f64().unwrap(),
    );
    assert!((e - exact).abs() < 5.0 * se);
}

#[test]
fn csv_has_header_and_one_row_per_record() {
    let loaded = load_problem_with_cap(config_path("heisenberg3.json"), 26).unwrap();
    let report = run(&loaded).unwrap();
    let csv = report.trajectory_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "step,t,norm,Z0,Z1,Z2,Z0Z1,X1");
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), report.trajectory.len());
    assert!(rows[0].starts_with("0,0,"));
    assert_eq!(rows[1].split(',').count(), 8);
}

#[test]
fn no_histogram_without_shots() {
    let loaded = load_problem_with_cap(config_path("rabi_literal.json"), 26).unwrap();
    let report = run(&loaded).unwrap();
    assert!(report.sampling.is_none());
    assert!(!report.to_json().unwrap().contains("\"sampling\""));
}

#[test]
fn sweep_orders() {
    for (name, lo, hi) in [("heisenberg3.json", 3.4, 4.6), ("two_particle_coulomb.json", 3.4, 4.6)] {
        let mut loaded = load_problem_with_cap(config_path(name), 26).unwrap();
        loaded.plan.dt = 1e-2;
        loaded.plan.total_time = 0.5;
        let report = convergence_sweep(&loaded, 2).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows[1..] {
            let ratio = row.ratio.unwrap();
            assert!((lo..=hi).contains(&ratio), "{name}: ratio {ratio}");
        }
        assert!(report.to_table().contains("expected order 2"));
    }
}

#[test]
fn census_matches_prediction_for_every_config() {
    for name in CONFIGS {
        let mut loaded = load_problem_with_cap(config_path(name), 26).unwrap();
        loaded.plan.total_time = 10.0 * loaded.plan.dt;
        let census = gate_census(&loaded).unwrap();
        assert!(census.matches, "{name}: {census:?}");
        assert_eq!(census.steps, 10);
        assert_eq!(census.amplitudes, 1 << census.num_qubits);
    }
}

#[test]
fn strang_scaling_rows_match() {
    let rows = scaling_table(1..=2, 2..=4, SplitMode::Strang, 26).unwrap();
    assert!(rows.iter().all(|r| r.matches()));
    assert_eq!(rows[0].measured.diagonal_phase_applications, 3);
    assert_eq!(format_scaling_table(&rows).lines().count(), rows.len() + 1);
}

#[test]
fn errors_map_to_exit_codes() {
    let base = std::fs::read_to_string(config_path("rabi.json")).unwrap();
    let bad_site = base.replace("\"X0\"", "\"Z0Z0\"");
    let err = parse_problem(&bad_site, 26).unwrap_err();
    assert!(err.to_string().contains("sites distinct"));
    assert_eq!(exit_code(&err), EXIT_VALIDATION);

    let unknown = base.replace("\"shots\"", "\"shotz\"");
    assert_eq!(exit_code(&parse_problem(&unknown, 26).unwrap_err()), EXIT_VALIDATION);

    let big = base.replace("\"num_spins\": 1", "\"num_spins\": 30");
    assert_eq!(exit_code(&parse_problem(&big, 26).unwrap_err()), EXIT_CAP);

    assert_eq!(exit_code(&Error::NonHermitian { deviation: 1.0 }), EXIT_OTHER);
}

#[test]
fn cap_override_applies_to_particles() {
    let text = std::fs::read_to_string(config_path("two_particle_coulomb.json")).unwrap();
    assert!(matches!(parse_problem(&text, 9), Err(Error::CapExceeded { requested: 10, cap: 9 })));
    assert!(parse_problem(&text, 10).is_ok());
}

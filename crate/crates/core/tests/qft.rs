mod common;

use common::{max_abs_diff, random_state, rng};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qsim_core::oracle::{dense_circuit_matrix, dft_matrix};
use qsim_core::qft::{apply_qft, qft_circuit, QftDirection};
use qsim_core::statevec::Register;
use rustfft::FftPlanner;

#[test]
fn circuit_matrix_equals_dft_for_four_qubits() {
    let k = 4;
    let reg = Register::new(0, k);
    let f = dft_matrix(1 << k);
    let forward = dense_circuit_matrix(&qft_circuit(reg, QftDirection::Forward), k);
    let inverse = dense_circuit_matrix(&qft_circuit(reg, QftDirection::Inverse), k);
    assert!((forward.matrix() - &f).camax() < 1e-12);
    assert!((inverse.matrix() - f.adjoint()).camax() < 1e-12);
}

#[test]
fn circuit_matrices_are_unitary() {
    for k in 1..=6 {
        let m = dense_circuit_matrix(&qft_circuit(Register::new(0, k), QftDirection::Forward), k);
        let id = DMatrix::<Complex64>::identity(1 << k, 1 << k);
        assert!((m.matrix().adjoint() * m.matrix() - id).camax() < 1e-12, "k={k}");
    }
}

/// QFT on particle 1's register equals a length-32 DFT along the slow axis
/// of the 32×32 amplitude array.
#[test]
fn register_qft_is_an_axis_fft() {
    let k = 5;
    let g = 1usize << k;
    let mut r = rng(20);
    let s0 = random_state(&mut r, 2 * k);

    let mut planner = FftPlanner::<f64>::new();
    let plus = planner.plan_fft_inverse(g);
    let scale = 1.0 / (g as f64).sqrt();
    for (axis, reg) in [(0, Register::new(0, k)), (1, Register::new(k, k))] {
        let mut want = s0.amplitudes().to_vec();
        let mut line = vec![Complex64::new(0.0, 0.0); g];
        for other in 0..g {
            let idx = |j: usize| if axis == 0 { other * g + j } else { j * g + other };
            for (j, v) in line.iter_mut().enumerate() {
                *v = want[idx(j)];
            }
            plus.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                want[idx(j)] = v * scale;
            }
        }
        let mut s = s0.clone();
        apply_qft(&mut s, reg, QftDirection::Forward).unwrap();
        assert!(max_abs_diff(s.amplitudes(), &want) < 1e-12, "axis {axis}");
    }
}

#[test]
fn register_qft_leaves_other_marginals_alone() {
    let mut r = rng(21);
    let s0 = random_state(&mut r, 9);
    let (a, b) = (Register::new(0, 4), Register::new(4, 5));
    let mut s = s0.clone();
    apply_qft(&mut s, a, QftDirection::Forward).unwrap();
    for (p, q) in s
        .marginal_probabilities(b)
        .unwrap()
        .iter()
        .zip(s0.marginal_probabilities(b).unwrap())
    {
        assert!((p - q).abs() < 1e-13);
    }
    for gate in qft_circuit(a, QftDirection::Forward) {
        assert!(gate.qubits().iter().all(|&q| q < 4));
    }
}

#[test]
fn register_out_of_range_is_an_error() {
    let mut s = random_state(&mut rng(22), 4);
    assert!(apply_qft(&mut s, Register::new(2, 3), QftDirection::Forward).is_err());
}

proptest! {
    #[test]
    fn forward_then_inverse_is_identity(seed in any::<u64>(), n in 1usize..8, start in 0usize..7, width in 1usize..8) {
        prop_assume!(start + width <= n);
        let s0 = random_state(&mut rng(seed), n);
        let mut s = s0.clone();
        let reg = Register::new(start, width);
        apply_qft(&mut s, reg, QftDirection::Forward).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        apply_qft(&mut s, reg, QftDirection::Inverse).unwrap();
        prop_assert!(s.max_deviation(&s0).unwrap() < 1e-12);
    }
}

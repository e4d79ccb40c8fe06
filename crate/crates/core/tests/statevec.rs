mod common;

use common::{c, max_abs_diff, random_amplitudes, random_state, rng};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use qsim_core::oracle::dense_gate_matrix;
use qsim_core::statevec::{Matrix2, Register};
use qsim_core::{GateOp, StateVector};
use rand::Rng;

fn random_unitary(rng: &mut impl Rng) -> Matrix2 {
    let mut angle = || rng.random::<f64>() * std::f64::consts::TAU;
    let (a, b, d, g) = (angle(), angle(), angle(), angle());
    let phase = Complex64::cis(a);
    [
        [phase * Complex64::cis(b) * g.cos(), phase * Complex64::cis(d) * g.sin()],
        [-phase * Complex64::cis(-d) * g.sin(), phase * Complex64::cis(-b) * g.cos()],
    ]
}

fn random_gate(rng: &mut impl Rng, n: usize) -> GateOp {
    let q = rng.random_range(0..n);
    let mut other = rng.random_range(0..n - 1);
    if other >= q {
        other += 1;
    }
    match rng.random_range(0..3) {
        0 => GateOp::SingleQubit {
            target: q,
            matrix: random_unitary(rng),
        },
        1 => GateOp::ControlledPhase {
            control: q,
            target: other,
            angle: rng.random::<f64>() * 7.0 - 3.5,
        },
        _ => GateOp::Swap { a: q, b: other },
    }
}

fn dense_apply(gate: &GateOp, state: &StateVector) -> Vec<Complex64> {
    let m = dense_gate_matrix(gate, state.num_qubits());
    let v = m.matrix() * DVector::from_column_slice(state.amplitudes());
    v.as_slice().to_vec()
}

#[test]
fn gates_match_dense_kron_products() {
    let mut r = rng(1);
    for n in 2..=5 {
        for _ in 0..40 {
            let gate = random_gate(&mut r, n);
            let mut s = random_state(&mut r, n);
            let want = dense_apply(&gate, &s);
            s.apply_gate(&gate).unwrap();
            assert!(max_abs_diff(s.amplitudes(), &want) < 1e-12, "{gate:?}");
        }
    }
}

#[test]
fn gates_are_linear() {
    let mut r = rng(2);
    let n = 4;
    for _ in 0..30 {
        let gate = random_gate(&mut r, n);
        let (a, b) = (random_amplitudes(&mut r, 1 << n), random_amplitudes(&mut r, 1 << n));
        let (x, y) = (c(0.3, -1.2), c(-0.7, 0.4));
        let mut sum = StateVector::from_amplitudes(a.iter().zip(&b).map(|(p, q)| x * p + y * q).collect()).unwrap();
        let mut sa = StateVector::from_amplitudes(a).unwrap();
        let mut sb = StateVector::from_amplitudes(b).unwrap();
        sum.apply_gate(&gate).unwrap();
        sa.apply_gate(&gate).unwrap();
        sb.apply_gate(&gate).unwrap();
        let combined: Vec<Complex64> = sa
            .amplitudes()
            .iter()
            .zip(sb.amplitudes())
            .map(|(p, q)| x * p + y * q)
            .collect();
        assert!(max_abs_diff(sum.amplitudes(), &combined) < 1e-12);
    }
}

#[test]
fn norm_survives_ten_thousand_gates() {
    let mut r = rng(3);
    let n = 6;
    let mut s = random_state(&mut r, n);
    for _ in 0..10_000 {
        let g = random_gate(&mut r, n);
        s.apply_gate(&g).unwrap();
    }
    assert!((s.norm() - 1.0).abs() < 1e-10, "norm {}", s.norm());
}

#[test]
fn marginals_match_brute_force() {
    let mut r = rng(4);
    let s = random_state(&mut r, 7);
    for (start, width) in [(0, 3), (2, 4), (4, 3), (0, 7), (6, 1)] {
        let reg = Register::new(start, width);
        let got = s.marginal_probabilities(reg).unwrap();
        let mut want = vec![0.0; 1 << width];
        for (b, a) in s.amplitudes().iter().enumerate() {
            let mut v = 0;
            for i in 0..width {
                v |= ((b >> (start + i)) & 1) << i;
            }
            want[v] += a.norm_sqr();
        }
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-14);
        }
    }
}

#[test]
fn inner_product_is_conjugate_symmetric() {
    let mut r = rng(5);
    for _ in 0..20 {
        let a = random_state(&mut r, 5);
        let b = random_state(&mut r, 5);
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
        let brute: Complex64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
        assert!((ab - brute).norm() < 1e-14);
    }
}

#[test]
fn adjoint_undoes_gate() {
    let mut r = rng(6);
    for _ in 0..50 {
        let g = random_gate(&mut r, 4);
        let s0 = random_state(&mut r, 4);
        let mut s = s0.clone();
        s.apply_gate(&g).unwrap();
        s.apply_gate(&g.adjoint()).unwrap();
        assert!(s.max_deviation(&s0).unwrap() < 1e-13);
    }
}

proptest! {
    #[test]
    fn random_circuits_preserve_norm(seed in any::<u64>(), n in 1usize..7, len in 1usize..60) {
        let mut r = rng(seed);
        let mut s = random_state(&mut r, n);
        for _ in 0..len {
            let g = if n == 1 {
                GateOp::SingleQubit { target: 0, matrix: random_unitary(&mut r) }
            } else {
                random_gate(&mut r, n)
            };
            s.apply_gate(&g).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_phase_preserves_probabilities(seed in any::<u64>(), n in 1usize..7, scale in -50.0f64..50.0) {
        let mut r = rng(seed);
        let s0 = random_state(&mut r, n);
        let mut s = s0.clone();
        s.apply_diagonal_phase(|b| scale * (b as f64).sin()).unwrap();
        for (p, q) in s.probabilities().iter().zip(s0.probabilities()) {
            prop_assert!((p - q).abs() < 1e-15);
        }
    }

    #[test]
    fn marginals_sum_to_norm(seed in any::<u64>(), n in 1usize..8, start in 0usize..7, width in 1usize..8) {
        prop_assume!(start + width <= n);
        let mut r = rng(seed);
        let s = random_state(&mut r, n);
        let total: f64 = s.marginal_probabilities(Register::new(start, width)).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}

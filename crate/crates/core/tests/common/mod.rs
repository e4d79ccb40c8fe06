#![allow(dead_code)]

use num_complex::Complex64;
use qsim_core::StateVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_amplitudes(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

/// Normalized state with independent uniform real and imaginary parts.
pub fn random_state(rng: &mut impl Rng, num_qubits: usize) -> StateVector {
    let mut s = StateVector::from_amplitudes(random_amplitudes(rng, 1 << num_qubits)).unwrap();
    s.normalize();
    s
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn config_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series. Independent of the eigendecomposition route; used to cross-check it.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm: f64 = (0..n)
        .map(|r| a.row(r).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let scaled = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_and_rotation() {
        let a = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        assert!((expm(&a)[(0, 0)].re - std::f64::consts::E).abs() < 1e-14);

        // exp([[0, −θ], [θ, 0]]) is a rotation by θ
        let t = 2.3;
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.0, 0.0), Complex64::new(-t, 0.0), Complex64::new(t, 0.0), Complex64::new(0.0, 0.0)],
        );
        let e = expm(&a);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-13);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-13);
    }
}

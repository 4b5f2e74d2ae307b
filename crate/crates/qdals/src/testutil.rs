//! Shared helpers for unit tests.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::rng::SeededRng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random Hermitian matrix with entries of order one.
pub fn rand_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SeededRng::new(seed);
    let b = ComplexMatrix::from_fn(n, n, |_, _| c(rng.uniform_sym(), rng.uniform_sym()));
    ComplexMatrix::lincomb(0.5, &b, 0.5, &b.adjoint()).unwrap()
}

/// Random Hermitian matrix with spectrum inside `[0, 1]`.
pub fn rand_hermitian_unit_spectrum(n: usize, seed: u64) -> ComplexMatrix {
    let h = rand_hermitian(n, seed);
    let eig = crate::linalg::herm_eig(&h).unwrap();
    let (lo, hi) = (eig.min(), eig.max());
    let span = (hi - lo).max(1e-12);
    // (H - lo I) / span
    let shifted = h
        .sub(&ComplexMatrix::identity(n).scale(c(lo, 0.0)))
        .unwrap();
    shifted.scale(c(1.0 / span, 0.0))
}

pub fn rand_vector(n: usize, seed: u64) -> ComplexVector {
    let mut rng = SeededRng::new(seed);
    ComplexVector::new((0..n).map(|_| rng.normal_complex()).collect())
}

pub fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
    assert_eq!(actual.len(), expected.len());
    for (k, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!(
            (a - e).abs() <= tol,
            "index {k}: actual {a} vs expected {e} (tol {tol})"
        );
    }
}

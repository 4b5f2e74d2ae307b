//! Quantum linear-system problem instances.
//!
//! An instance is a Hermitian, invertible coefficient matrix `A` of
//! power-of-two dimension together with a normalized right-hand side `|b>`.
//! The goal state is `|x> = A^-1 |b> / |A^-1 |b>|`, and solver quality is
//! measured by the fidelity `|<x~|x>|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, linear_solve, ComplexMatrix, ComplexVector};
use crate::rng::SeededRng;

/// Relative floor on `min |eigenvalue(A)|` used when rejecting nearly
/// singular random draws.
pub const MIN_SINGULAR_REL: f64 = 1e-6;

/// A quantum linear-system problem instance.
#[derive(Debug, Clone)]
pub struct QlspInstance {
    a: ComplexMatrix,
    b: ComplexVector,
    label: String,
    seed: Option<u64>,
}

impl QlspInstance {
    /// Validate and build an instance. The right-hand side is normalized
    /// here; pass it as printed or measured.
    pub fn new(a: ComplexMatrix, b: ComplexVector, label: impl Into<String>) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::OutOfRange(format!(
                "dimension must be a power of two >= 2, got {n}"
            )));
        }
        if b.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "rhs dimension {} does not match matrix dimension {}",
                b.dim(),
                n
            )));
        }
        if !a.is_hermitian() {
            return Err(Error::NotHermitian(a.hermiticity_defect()));
        }
        // idempotent: an already-unit rhs keeps its exact bits
        let b = if b.is_normalized() { b } else { b.normalized()? };
        let a = a.hermitized();
        // invertibility probe
        linear_solve(&a, &b)?;
        Ok(Self {
            a,
            b,
            label: label.into(),
            seed: None,
        })
    }

    pub(crate) fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &ComplexVector {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// `log2` of the dimension: the number of main qubits.
    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Normalized exact solution and the elimination residual it was checked at.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: ComplexVector,
    pub residual: f64,
}

/// Classical solution oracle: `x = normalize(A^-1 b)`.
pub fn exact_solution(p: &QlspInstance) -> Result<Solution> {
    let raw = linear_solve(p.matrix(), p.rhs())?;
    let residual = p
        .matrix()
        .matvec(&raw)?
        .sub(p.rhs())?
        .norm();
    Ok(Solution {
        x: raw.normalized()?,
        residual,
    })
}

/// Fidelity `|<xt|x>|`, clamped into `[0, 1]`.
///
/// The magnitude convention makes the value real, symmetric, and invariant
/// under global phases on either argument.
pub fn fidelity(xt: &ComplexVector, x: &ComplexVector) -> Result<f64> {
    let ov = xt.inner(x)?;
    Ok(ov.norm().min(1.0))
}

/// Seeded random instance: `A = (B + B†)/2` with `B` entries uniform in
/// `[-1, 1]` (real and imaginary parts), `b` complex standard normal, both
/// redrawn while `A` is nearly singular.
pub fn random_instance(dim: usize, seed: u64) -> Result<QlspInstance> {
    if !matches!(dim, 2 | 4 | 8 | 16 | 32) {
        return Err(Error::OutOfRange(format!(
            "random instances support dim in {{2,4,8,16,32}}, got {dim}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    for _ in 0..1000 {
        let b_mat = ComplexMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.uniform_sym(), rng.uniform_sym())
        });
        let a = ComplexMatrix::lincomb(0.5, &b_mat, 0.5, &b_mat.adjoint())?;
        let rhs = ComplexVector::new((0..dim).map(|_| rng.normal_complex()).collect());

        // reject nearly singular coefficient matrices
        let eig = herm_eig(&a)?;
        let min_abs = eig.values.iter().fold(f64::INFINITY, |m, &l| m.min(l.abs()));
        let max_abs = a.max_abs_element()?;
        if min_abs < MIN_SINGULAR_REL * max_abs {
            continue;
        }
        let label = format!("rand{dim}-{seed}");
        return Ok(QlspInstance::new(a, rhs, label)?.with_seed(seed));
    }
    Err(Error::GenerationFailed)
}

/// Seeded random square matrix with an exact count of zero entries and the
/// remaining entries split evenly between positive reals, pure imaginaries,
/// and general complex values, magnitudes in `(0, 2]`.
pub fn random_sparse_matrix(dim: usize, zero_fraction: f64, seed: u64) -> Result<ComplexMatrix> {
    if !(0.0..1.0).contains(&zero_fraction) {
        return Err(Error::OutOfRange(format!(
            "zero_fraction must lie in [0, 1), got {zero_fraction}"
        )));
    }
    let total = dim * dim;
    let n_zero = (zero_fraction * total as f64).ceil() as usize;
    let mut rng = SeededRng::new(seed);

    let mut positions: Vec<usize> = (0..total).collect();
    rng.shuffle(&mut positions);

    let mut entries = vec![Complex64::ZERO; total];
    for (ordinal, &pos) in positions.iter().skip(n_zero).enumerate() {
        let magnitude = 2.0 * rng.uniform_open_low();
        let value = match ordinal % 3 {
            0 => Complex64::new(magnitude, 0.0),
            1 => {
                let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
                Complex64::new(0.0, sign * magnitude)
            }
            _ => {
                let phase = std::f64::consts::PI * rng.uniform_sym();
                Complex64::from_polar(magnitude, phase)
            }
        };
        entries[pos] = value;
    }
    // positions index row-major
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::c;

    #[test]
    fn exact_solution_identity() {
        let p = QlspInstance::new(
            ComplexMatrix::identity(2),
            ComplexVector::from_reals(&[0.6, 0.8]),
            "id",
        )
        .unwrap();
        let sol = exact_solution(&p).unwrap();
        assert!((sol.x.get(0) - c(0.6, 0.0)).norm() < 1e-12);
        assert!((sol.x.get(1) - c(0.8, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_solution_diagonal() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let p = QlspInstance::new(a, ComplexVector::from_reals(&[1.0, 0.0]), "diag").unwrap();
        let sol = exact_solution(&p).unwrap();
        assert!((fidelity(&sol.x, &ComplexVector::basis(2, 0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_conventions() {
        let v = ComplexVector::from_reals(&[0.6, 0.8]);
        assert!((fidelity(&v, &v).unwrap() - 1.0).abs() < 1e-14);
        let e0 = ComplexVector::basis(2, 0);
        let e1 = ComplexVector::basis(2, 1);
        assert_eq!(fidelity(&e0, &e1).unwrap(), 0.0);
        // global phase invariance
        let phased = v.scale(Complex64::from_polar(1.0, 0.7));
        assert!((fidelity(&phased, &v).unwrap() - 1.0).abs() < 1e-14);
        // symmetry
        let w = ComplexVector::from_reals(&[1.0, 0.0]);
        assert!(
            (fidelity(&v, &w).unwrap() - fidelity(&w, &v).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn random_instance_is_reproducible() {
        let p1 = random_instance(2, 1).unwrap();
        let p2 = random_instance(2, 1).unwrap();
        assert_eq!(p1.matrix(), p2.matrix());
        assert_eq!(p1.rhs(), p2.rhs());
    }

    #[test]
    fn random_instance_invariants() {
        let p = random_instance(16, 9).unwrap();
        assert!(p.matrix().is_hermitian());
        assert!(p.rhs().is_normalized());
        assert_eq!(p.dim(), 16);
    }

    #[test]
    fn random_instances_solve_cleanly() {
        for seed in 0..100u64 {
            let p = random_instance(4, seed).unwrap();
            let sol = exact_solution(&p).unwrap();
            assert!(sol.residual <= 1e-9, "seed {seed}: residual {}", sol.residual);
        }
    }

    #[test]
    fn solution_proportionality() {
        // A x proportional to b, up to a unit phase
        for seed in 0..20u64 {
            let p = random_instance(8, 1000 + seed).unwrap();
            let x = exact_solution(&p).unwrap().x;
            let ax = p.matrix().matvec(&x).unwrap().normalized().unwrap();
            let ov = ax.inner(p.rhs()).unwrap();
            let phase = ov / ov.norm();
            let diff = ax.sub(&p.rhs().scale(phase)).unwrap().norm();
            assert!(diff <= 1e-8, "seed {seed}: {diff}");
        }
    }

    #[test]
    fn sparse_matrix_zero_counts() {
        let m = random_sparse_matrix(2, 0.5, 3).unwrap();
        let zeros = m.data().iter().filter(|v| **v == Complex64::ZERO).count();
        assert_eq!(zeros, 2);

        let m = random_sparse_matrix(4, 0.0, 3).unwrap();
        assert!(m.data().iter().all(|v| *v != Complex64::ZERO));

        for (dim, zf) in [(4usize, 0.3), (8, 0.5), (16, 0.75)] {
            let m = random_sparse_matrix(dim, zf, 17).unwrap();
            let zeros = m.data().iter().filter(|v| **v == Complex64::ZERO).count();
            assert_eq!(zeros, (zf * (dim * dim) as f64).ceil() as usize);
        }
    }

    #[test]
    fn sparse_matrix_magnitudes_bounded() {
        let m = random_sparse_matrix(8, 0.5, 5).unwrap();
        for v in m.data() {
            let mag = v.norm();
            assert!(mag == 0.0 || (mag > 0.0 && mag <= 2.0));
        }
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(matches!(random_instance(3, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(random_instance(64, 0), Err(Error::OutOfRange(_))));
    }
}

//! Dense complex linear algebra at desk scale.
//!
//! Everything downstream — Hamiltonian construction, eigenvalue separation,
//! the statevector simulator, the solvers — moves data through the two types
//! here: [`ComplexMatrix`] (column-major, dense) and [`ComplexVector`].
//! The eigensolver is a cyclic Jacobi iteration specialized to Hermitian
//! matrices, chosen for determinism at the dimensions this crate targets
//! (N <= 64).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for the Hermiticity test.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Relative pivot threshold below which elimination reports `Singular`.
pub const SINGULARITY_TOL: f64 = 1e-12;
/// Largest dimension accepted by the dense eigensolver.
pub const MAX_EIG_DIM: usize = 64;

/// Dense complex matrix, column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Complex64::ONE);
        }
        m
    }

    /// Build from a row-major slice of rows (convenience for literals).
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i + j * self.rows] = v;
    }

    /// Raw column-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `alpha * A + beta * B` with real coefficients.
    pub fn lincomb(alpha: f64, a: &Self, beta: f64, b: &Self) -> Result<Self> {
        a.check_same_shape(b)?;
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| x * alpha + y * beta)
            .collect();
        Ok(Self {
            rows: a.rows,
            cols: a.cols,
            data,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == Complex64::ZERO {
                    continue;
                }
                for i in 0..self.rows {
                    let v = out.get(i, j) + self.get(i, k) * b;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} times vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = ComplexVector::zeros(self.rows);
        self.matvec_into(v, &mut out);
        Ok(out)
    }

    /// Allocation-free matvec for hot loops; panics on shape mismatch.
    pub fn matvec_into(&self, v: &ComplexVector, out: &mut ComplexVector) {
        assert_eq!(self.cols, v.dim());
        assert_eq!(self.rows, out.dim());
        out.data.iter_mut().for_each(|x| *x = Complex64::ZERO);
        for j in 0..self.cols {
            let x = v.data[j];
            if x == Complex64::ZERO {
                continue;
            }
            let col = &self.data[j * self.rows..(j + 1) * self.rows];
            for i in 0..self.rows {
                out.data[i] += col[i] * x;
            }
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Symmetrize as `(M + M†)/2`, making the storage exactly Hermitian.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude; errors on the zero matrix.
    pub fn max_abs_element(&self) -> Result<f64> {
        let m = self.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        Ok(m)
    }

    /// `max|A[i,j] - conj(A[j,i])|` over all entries (0 for non-square input
    /// is never meaningful; callers check squareness first).
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.cols {
            for i in 0..=j.min(self.rows - 1) {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Hermitian within `HERMITICITY_TOL` relative to the largest entry.
    pub fn is_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return true;
        }
        self.hermiticity_defect() <= HERMITICITY_TOL * scale
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if !self.is_hermitian() {
            return Err(Error::NotHermitian(self.hermiticity_defect()));
        }
        Ok(())
    }
}

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::ZERO; dim],
        }
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::ONE;
        v
    }

    pub fn from_reals(reals: &[f64]) -> Self {
        Self {
            data: reals.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: Complex64) {
        self.data[i] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.data.iter()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>` with the left argument conjugated.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("vector add".into()));
        }
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("vector sub".into()));
        }
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Unit-norm copy; errors on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn normalize_in_place(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / n;
        self.data.iter_mut().for_each(|v| *v *= inv);
        Ok(())
    }

    /// True iff `| |v| - 1 | <= 1e-12`.
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    /// First `n` components as a new vector.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            data: self.data[..n].to_vec(),
        }
    }

    /// Zero-pad to `dim` (components appended at the tail).
    pub fn padded(&self, dim: usize) -> Self {
        let mut data = self.data.clone();
        data.resize(dim, Complex64::ZERO);
        Self { data }
    }
}

/// Full spectrum of a Hermitian matrix: eigenvalues ascending with matching
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenPairs {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Eigenvector column `k`.
    pub fn vector(&self, k: usize) -> ComplexVector {
        let n = self.vectors.rows();
        ComplexVector::new((0..n).map(|i| self.vectors.get(i, k)).collect())
    }

    /// `sum_k lambda_k v_k v_k^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * self.vectors.get(j, k).conj() * self.values[k])
                .sum()
        })
    }
}

/// Full Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Deterministic: identical input bits give identical output bits. Eigenvalues
/// come back sorted ascending, ties keeping diagonalization order.
pub fn herm_eig(h: &ComplexMatrix) -> Result<EigenPairs> {
    h.check_hermitian()?;
    let n = h.rows();
    if n > MAX_EIG_DIM {
        return Err(Error::TooLarge(format!(
            "eigensolver accepts dimension <= {MAX_EIG_DIM}, got {n}"
        )));
    }
    let mut a = h.hermitized();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let stop = 1e-15 * scale;
    // skip rotations too small to matter; keeps sweeps from churning on noise
    let skip = 1e-18 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let f = apq.norm();
                if f <= skip {
                    continue;
                }
                // phase factor turning the 2x2 block real symmetric
                let phase = apq / f; // e^{i alpha}
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * f);
                // small root of t^2 - 2 tau t - 1 = 0 (zeroes the rotated
                // off-diagonal under the [[c, -s], [s, c]] convention)
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, -s], [s e^{-i a}, c e^{-i a}]] acting on columns p, q
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(-s, 0.0);
                let jqp = phase.conj() * s;
                let jqq = phase.conj() * c;

                // A <- A J (columns), then A <- J† A (rows); V <- V J
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * jpp + aiq * jqp);
                    a.set(i, q, aip * jpq + aiq * jqq);
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * jpp + viq * jqp);
                    v.set(i, q, vip * jpq + viq * jqq);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, jpp.conj() * apj + jqp.conj() * aqj);
                    a.set(q, j, jpq.conj() * apj + jqq.conj() * aqj);
                }
                // pin the rotated pair exactly
                a.set(p, q, Complex64::ZERO);
                a.set(q, p, Complex64::ZERO);
                let dp = a.get(p, p);
                let dq = a.get(q, q);
                a.set(p, p, Complex64::new(dp.re, 0.0));
                a.set(q, q, Complex64::new(dq.re, 0.0));
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .unwrap()
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(EigenPairs { values, vectors })
}

/// `exp(-i tau H)` for Hermitian `H`, via the eigendecomposition.
pub fn herm_exp_i(h: &ComplexMatrix, tau: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    let n = h.rows();
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -tau * l))
        .collect();
    // V diag(phases) V†
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| eig.vectors.get(i, k) * phases[k] * eig.vectors.get(j, k).conj())
            .sum()
    }))
}

/// Apply `exp(-i tau H)` to a vector given a precomputed eigendecomposition.
/// Cheaper than materializing the full exponential in per-step loops.
pub fn apply_exp_i(eig: &EigenPairs, tau: f64, v: &ComplexVector) -> Result<ComplexVector> {
    let n = eig.vectors.rows();
    if v.dim() != n {
        return Err(Error::DimensionMismatch("apply_exp_i".into()));
    }
    // coefficients in the eigenbasis
    let mut coeff = vec![Complex64::ZERO; n];
    for (k, ck) in coeff.iter_mut().enumerate() {
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            acc += eig.vectors.get(i, k).conj() * v.get(i);
        }
        *ck = acc * Complex64::from_polar(1.0, -tau * eig.values[k]);
    }
    let mut out = ComplexVector::zeros(n);
    for k in 0..n {
        let ck = coeff[k];
        if ck == Complex64::ZERO {
            continue;
        }
        for i in 0..n {
            let v = out.get(i) + eig.vectors.get(i, k) * ck;
            out.set(i, v);
        }
    }
    Ok(out)
}

/// Solve `A x = b` by LU elimination with partial pivoting.
pub fn linear_solve(a: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "linear_solve needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if b.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} with rhs of dim {}",
            n,
            n,
            b.dim()
        )));
    }
    let pivot_floor = SINGULARITY_TOL * a.max_abs_element().unwrap_or(0.0);

    let mut lu = a.clone();
    let mut x: Vec<Complex64> = b.data().to_vec();

    for k in 0..n {
        // partial pivot
        let mut best = k;
        let mut best_mag = lu.get(k, k).norm();
        for i in (k + 1)..n {
            let m = lu.get(i, k).norm();
            if m > best_mag {
                best = i;
                best_mag = m;
            }
        }
        if best_mag <= pivot_floor {
            return Err(Error::Singular(best_mag));
        }
        if best != k {
            for j in 0..n {
                let t = lu.get(k, j);
                lu.set(k, j, lu.get(best, j));
                lu.set(best, j, t);
            }
            x.swap(k, best);
        }
        let inv = Complex64::ONE / lu.get(k, k);
        for i in (k + 1)..n {
            let factor = lu.get(i, k) * inv;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in (k + 1)..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
            let xk = x[k];
            x[i] -= factor * xk;
        }
    }
    // back substitution
    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in (k + 1)..n {
            acc -= lu.get(k, j) * x[j];
        }
        x[k] = acc / lu.get(k, k);
    }
    Ok(ComplexVector::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{assert_close, c, rand_hermitian, rand_vector};

    #[test]
    fn diagonal_eigendecomposition_sorts_ascending() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let eig = herm_eig(&h).unwrap();
        assert_close(&eig.values, &[1.0, 2.0, 3.0], 1e-14);
        // vectors are permuted identity columns
        for (k, &val) in eig.values.iter().enumerate() {
            let v = eig.vector(k);
            let hv = h.matvec(&v).unwrap();
            let diff = hv.sub(&v.scale(c(val, 0.0))).unwrap();
            assert!(diff.norm() < 1e-13);
            assert!((v.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..8u64 {
            let h = rand_hermitian(8, seed);
            let eig = herm_eig(&h).unwrap();
            let rec = eig.reconstruct();
            let err = rec.sub(&h).unwrap().frobenius_norm();
            assert!(err < 1e-9 * h.max_abs_element().unwrap().max(1.0), "err {err}");
            // orthonormality
            let gram = eig.vectors.adjoint().mul(&eig.vectors).unwrap();
            let dev = gram.sub(&ComplexMatrix::identity(8)).unwrap().frobenius_norm();
            assert!(dev < 1e-10, "gram deviation {dev}");
            // residuals per pair
            for k in 0..8 {
                let v = eig.vector(k);
                let hv = h.matvec(&v).unwrap();
                let r = hv.sub(&v.scale(c(eig.values[k], 0.0))).unwrap().norm();
                assert!(r <= 1e-9 * h.max_abs_element().unwrap(), "residual {r}");
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.5, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let h = ComplexMatrix::zeros(3, 3);
        let u = herm_exp_i(&h, 1.7).unwrap();
        let err = u.sub(&ComplexMatrix::identity(3)).unwrap().frobenius_norm();
        assert!(err < 1e-14);
    }

    #[test]
    fn exp_of_diagonal_pi() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(std::f64::consts::PI, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let u = herm_exp_i(&h, 1.0).unwrap();
        assert!((u.get(0, 0) - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((u.get(1, 1) - c(1.0, 0.0)).norm() < 1e-12);
        assert!(u.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn exp_matches_taylor_series() {
        let h = rand_hermitian(4, 42);
        let tau = 0.3;
        let u = herm_exp_i(&h, tau).unwrap();
        // truncated series for exp(-i tau H)
        let mut series = ComplexMatrix::identity(4);
        let mut term = ComplexMatrix::identity(4);
        for k in 1..=30 {
            term = term.mul(&h).unwrap().scale(c(0.0, -tau / k as f64));
            series = series.add(&term).unwrap();
        }
        let err = u.sub(&series).unwrap().frobenius_norm();
        assert!(err < 1e-10, "taylor mismatch {err}");
        // unitarity
        let dev = u
            .adjoint()
            .mul(&u)
            .unwrap()
            .sub(&ComplexMatrix::identity(4))
            .unwrap()
            .frobenius_norm();
        assert!(dev < 1e-10);
    }

    #[test]
    fn exp_group_property() {
        let h = rand_hermitian(5, 7);
        let ua = herm_exp_i(&h, 0.4).unwrap();
        let ub = herm_exp_i(&h, 0.9).unwrap();
        let uab = herm_exp_i(&h, 1.3).unwrap();
        let err = ua.mul(&ub).unwrap().sub(&uab).unwrap().frobenius_norm();
        assert!(err < 1e-10);
    }

    #[test]
    fn apply_exp_matches_full_exponential() {
        let h = rand_hermitian(6, 11);
        let eig = herm_eig(&h).unwrap();
        let v = rand_vector(6, 3).normalized().unwrap();
        let direct = herm_exp_i(&h, 0.77).unwrap().matvec(&v).unwrap();
        let applied = apply_exp_i(&eig, 0.77, &v).unwrap();
        assert!(direct.sub(&applied).unwrap().norm() < 1e-11);
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexVector::from_reals(&[0.6, 0.8]);
        let x = linear_solve(&a, &b).unwrap();
        assert!((x.get(0) - c(0.6, 0.0)).norm() < 1e-15);
        assert!((x.get(1) - c(0.8, 0.0)).norm() < 1e-15);

        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let b = ComplexVector::from_reals(&[1.0, 0.0]);
        let x = linear_solve(&a, &b).unwrap();
        assert!((x.get(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(x.get(1).norm() < 1e-15);
    }

    #[test]
    fn solve_residual_on_random_systems() {
        for seed in 0..6u64 {
            let a = rand_hermitian(8, 100 + seed);
            let b = rand_vector(8, 200 + seed);
            let x = linear_solve(&a, &b).unwrap();
            let r = a.matvec(&x).unwrap().sub(&b).unwrap().norm();
            assert!(r <= 1e-9 * b.norm(), "residual {r}");
        }
    }

    #[test]
    fn solve_reports_singular() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let b = ComplexVector::from_reals(&[1.0, 0.0]);
        assert!(matches!(linear_solve(&a, &b), Err(Error::Singular(_))));
    }

    #[test]
    fn max_abs_element_cases() {
        assert!((ComplexMatrix::identity(3).max_abs_element().unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            ComplexMatrix::zeros(2, 2).max_abs_element(),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn frobenius_norm_cases() {
        assert_eq!(ComplexMatrix::zeros(3, 3).frobenius_norm(), 0.0);
        assert!((ComplexMatrix::identity(2).frobenius_norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn frobenius_dominates_spectral_radius() {
        for seed in 0..6u64 {
            let h = rand_hermitian(6, 300 + seed);
            let eig = herm_eig(&h).unwrap();
            let rho = eig.values.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
            assert!(h.frobenius_norm() + 1e-12 >= rho);
        }
    }
}

//! Hamiltonian families for discrete adiabatic evolution.
//!
//! Two constructions are supported for an instance `(A, |b>)`:
//!
//! * the original pair on a doubled space,
//!   `H0 = sigma_x (x) Q_b` and `H1 = [[0, A Q_b], [Q_b A, 0]]`, whose shared
//!   null space carries the adiabatic path, and
//! * the new pair on the problem space itself,
//!   `H0 = |b><b|` and `H1 = I - A Q_b A / |A Q_b A|_F`, which instead track
//!   the solution as the unique top eigenvector at eigenvalue 1.
//!
//! The interpolation is linear, `H(s) = (1-s) H0 + s H1`, with the uniform
//! schedule `s_m = m/M`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, ComplexVector};
use crate::qlsp::QlspInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Doubled-dimension pair with the solution in the null space.
    Original,
    /// Problem-dimension pair with the solution at eigenvalue 1.
    New,
}

/// Initial and final Hamiltonians of one scheme. Both are stored exactly
/// Hermitian (entrywise `(m + m†)/2`).
#[derive(Debug, Clone)]
pub struct HamiltonianPair {
    pub h0: ComplexMatrix,
    pub h1: ComplexMatrix,
    pub scheme: Scheme,
}

impl HamiltonianPair {
    pub fn dim(&self) -> usize {
        self.h0.rows()
    }
}

/// Uniform evolution schedule `s_m = m/M`, `m = 1..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    steps: usize,
}

impl Schedule {
    pub fn new(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::OutOfRange("schedule needs at least one step".into()));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step_size(&self) -> f64 {
        1.0 / self.steps as f64
    }

    /// The points `s_1, ..., s_M`; `s_M = 1` exactly.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.steps as f64;
        (1..=self.steps).map(move |k| k as f64 / m)
    }
}

/// Projector onto the complement of `|b>`: `Q_b = I - |b><b|`.
pub fn projector_qb(b: &ComplexVector) -> Result<ComplexMatrix> {
    if !b.is_normalized() {
        return Err(Error::NotNormalized((b.norm() - 1.0).abs()));
    }
    let n = b.dim();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { Complex64::ONE } else { Complex64::ZERO };
        delta - b.get(i) * b.get(j).conj()
    }))
}

/// Original-scheme pair on the doubled space (`2N x 2N`).
pub fn original_pair(p: &QlspInstance) -> Result<HamiltonianPair> {
    let n = p.dim();
    let qb = projector_qb(p.rhs())?;
    let aqb = p.matrix().mul(&qb)?;
    let qba = qb.mul(p.matrix())?;

    let mut h0 = ComplexMatrix::zeros(2 * n, 2 * n);
    let mut h1 = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // top-right and bottom-left blocks; diagonal blocks stay zero
            h0.set(i, n + j, qb.get(i, j));
            h0.set(n + i, j, qb.get(i, j));
            h1.set(i, n + j, aqb.get(i, j));
            h1.set(n + i, j, qba.get(i, j));
        }
    }
    Ok(HamiltonianPair {
        h0: h0.hermitized(),
        h1: h1.hermitized(),
        scheme: Scheme::Original,
    })
}

/// New-scheme pair on the problem space (`N x N`).
pub fn new_pair(p: &QlspInstance) -> Result<HamiltonianPair> {
    let n = p.dim();
    let b = p.rhs();
    let qb = projector_qb(b)?;
    let aqba = p.matrix().mul(&qb)?.mul(p.matrix())?.hermitized();
    let fnorm = aqba.frobenius_norm();
    if fnorm < 1e-12 {
        return Err(Error::DegenerateInstance);
    }
    let h0 = ComplexMatrix::from_fn(n, n, |i, j| b.get(i) * b.get(j).conj());
    let h1 = ComplexMatrix::identity(n)
        .sub(&aqba.scale(Complex64::new(1.0 / fnorm, 0.0)))?
        .hermitized();
    Ok(HamiltonianPair {
        h0: h0.hermitized(),
        h1,
        scheme: Scheme::New,
    })
}

/// Tolerances for the spectral checks below.
#[derive(Debug, Clone, Copy)]
pub struct LemmaTolerances {
    /// Allowed deviation of eigenvalues from their nominal values/interval.
    pub eigenvalue: f64,
    /// Allowed phase-free distance between eigenvectors.
    pub eigenvector: f64,
    /// Minimal gap below the top eigenvalue for non-degeneracy.
    pub degeneracy_gap: f64,
}

impl Default for LemmaTolerances {
    fn default() -> Self {
        Self {
            eigenvalue: 1e-10,
            eigenvector: 1e-8,
            degeneracy_gap: 1e-8,
        }
    }
}

/// Outcome of checking the initial-Hamiltonian spectrum (one eigenvalue 1 on
/// `|b>`, all others 0).
#[derive(Debug, Clone)]
pub struct Lemma1Report {
    pub spectrum_ok: bool,
    pub eigenvector_ok: bool,
    /// Largest eigenvalue found.
    pub top_eigenvalue: f64,
    /// Largest magnitude among the remaining eigenvalues.
    pub max_other: f64,
    /// Phase-free distance between the top eigenvector and `|b>`.
    pub eigenvector_distance: f64,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.spectrum_ok && self.eigenvector_ok
    }
}

/// Outcome of checking the final-Hamiltonian spectrum (top eigenvalue exactly
/// 1 and non-degenerate on `|x>`, everything else inside `[0, 1)`).
#[derive(Debug, Clone)]
pub struct Lemma2Report {
    pub in_range: bool,
    pub top_is_unit: bool,
    pub nondegenerate: bool,
    pub eigenvector_ok: bool,
    pub eigenvalues: Vec<f64>,
    /// Gap between the top and second eigenvalue.
    pub top_gap: f64,
    pub eigenvector_distance: f64,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.in_range && self.top_is_unit && self.nondegenerate && self.eigenvector_ok
    }
}

/// Phase-free distance `min_phi | v e^{i phi} - w |`, assuming unit inputs.
///
/// Computed componentwise at the optimal phase. The algebraically equal form
/// `sqrt(2 (1 - |<v|w>|))` loses half the significant digits to cancellation
/// near zero distance and cannot resolve below ~1e-8.
pub fn phase_free_distance(v: &ComplexVector, w: &ComplexVector) -> Result<f64> {
    let ov = v.inner(w)?;
    let phase = if ov.norm() == 0.0 {
        Complex64::ONE
    } else {
        ov / ov.norm()
    };
    v.scale(phase).sub(w).map(|d| d.norm())
}

pub fn lemma1_check(h0: &ComplexMatrix, b: &ComplexVector) -> Result<Lemma1Report> {
    lemma1_check_with(h0, b, &LemmaTolerances::default())
}

pub fn lemma1_check_with(
    h0: &ComplexMatrix,
    b: &ComplexVector,
    tol: &LemmaTolerances,
) -> Result<Lemma1Report> {
    let eig = herm_eig(h0)?;
    let top = eig.max();
    let max_other = eig.values[..eig.values.len() - 1]
        .iter()
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    let spectrum_ok = (top - 1.0).abs() <= tol.eigenvalue && max_other <= tol.eigenvalue;
    let dist = phase_free_distance(&eig.vector(eig.values.len() - 1), b)?;
    Ok(Lemma1Report {
        spectrum_ok,
        eigenvector_ok: dist <= tol.eigenvector,
        top_eigenvalue: top,
        max_other,
        eigenvector_distance: dist,
    })
}

pub fn lemma2_check(h1: &ComplexMatrix, x: &ComplexVector) -> Result<Lemma2Report> {
    lemma2_check_with(h1, x, &LemmaTolerances::default())
}

pub fn lemma2_check_with(
    h1: &ComplexMatrix,
    x: &ComplexVector,
    tol: &LemmaTolerances,
) -> Result<Lemma2Report> {
    let eig = herm_eig(h1)?;
    let k = eig.values.len();
    let top = eig.max();
    let second = if k >= 2 { eig.values[k - 2] } else { f64::NEG_INFINITY };
    let in_range = eig
        .values
        .iter()
        .all(|&l| l >= -tol.eigenvalue && l <= 1.0 + tol.eigenvalue);
    let top_gap = top - second;
    let dist = phase_free_distance(&eig.vector(k - 1), x)?;
    Ok(Lemma2Report {
        in_range,
        top_is_unit: (top - 1.0).abs() <= tol.eigenvalue,
        nondegenerate: top_gap >= tol.degeneracy_gap,
        eigenvector_ok: dist <= tol.eigenvector,
        eigenvalues: eig.values,
        top_gap,
        eigenvector_distance: dist,
    })
}

/// Linear interpolation `(1-s) H0 + s H1`.
pub fn interpolate(pair: &HamiltonianPair, s: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange(format!(
            "interpolation parameter must lie in [0, 1], got {s}"
        )));
    }
    ComplexMatrix::lincomb(1.0 - s, &pair.h0, s, &pair.h1)
}

/// First-order step operator `I - iH` (non-unitary in general).
pub fn first_order_step(hs: &ComplexMatrix) -> ComplexMatrix {
    let n = hs.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let delta = if i == j { Complex64::ONE } else { Complex64::ZERO };
        delta - Complex64::i() * hs.get(i, j)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlsp::{exact_solution, random_instance};
    use crate::testutil::c;

    fn unit(v: &[Complex64]) -> ComplexVector {
        ComplexVector::new(v.to_vec()).normalized().unwrap()
    }

    #[test]
    fn projector_basics() {
        let b = ComplexVector::basis(2, 0);
        let q = projector_qb(&b).unwrap();
        assert!(q.get(0, 0).norm() < 1e-15 && (q.get(1, 1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(q.get(0, 1).norm() < 1e-15 && q.get(1, 0).norm() < 1e-15);

        let b = unit(&[c(0.3, 0.4), c(-0.2, 0.9)]);
        let q = projector_qb(&b).unwrap();
        // idempotent and annihilates b
        let q2 = q.mul(&q).unwrap();
        assert!(q2.sub(&q).unwrap().frobenius_norm() < 1e-12);
        assert!(q.matvec(&b).unwrap().norm() < 1e-12);
        // trace equals N - 1
        let trace: Complex64 = (0..2).map(|k| q.get(k, k)).sum();
        assert!((trace - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn projector_rejects_unnormalized() {
        let b = ComplexVector::from_reals(&[1.0, 1.0]);
        assert!(matches!(projector_qb(&b), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn original_pair_shape_and_nullspace() {
        let p = QlspInstance::new(
            ComplexMatrix::identity(2),
            ComplexVector::from_reals(&[1.0, 0.0]),
            "id2",
        )
        .unwrap();
        let pair = original_pair(&p).unwrap();
        // H0 = sigma_x (x) diag(0, 1) for b = e0
        assert!(pair.h0.get(0, 2).norm() < 1e-15);
        assert!((pair.h0.get(1, 3) - c(1.0, 0.0)).norm() < 1e-15);
        // top-left and bottom-right blocks are zero
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(pair.h0.get(i, j), Complex64::ZERO);
                assert_eq!(pair.h0.get(2 + i, 2 + j), Complex64::ZERO);
                assert_eq!(pair.h1.get(i, j), Complex64::ZERO);
                assert_eq!(pair.h1.get(2 + i, 2 + j), Complex64::ZERO);
            }
        }
        assert!(pair.h0.is_hermitian() && pair.h1.is_hermitian());
    }

    #[test]
    fn original_h1_annihilates_solution() {
        for seed in 0..10u64 {
            let p = random_instance(4, 40 + seed).unwrap();
            let pair = original_pair(&p).unwrap();
            let x = exact_solution(&p).unwrap().x;
            let embedded = x.padded(8); // |x, 0>
            assert!(pair.h1.matvec(&embedded).unwrap().norm() <= 1e-8);
            // |0, b> in the null space of every interpolation point
            let mut zb = ComplexVector::zeros(8);
            for k in 0..4 {
                zb.set(4 + k, p.rhs().get(k));
            }
            for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let hs = interpolate(&pair, s).unwrap();
                assert!(hs.matvec(&zb).unwrap().norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn new_pair_identity_coefficient() {
        // A = I: H1 = I - Q_b / sqrt(N-1); for N = 2 this equals |b><b| = H0
        let p = QlspInstance::new(
            ComplexMatrix::identity(2),
            ComplexVector::from_reals(&[0.6, 0.8]),
            "id",
        )
        .unwrap();
        let pair = new_pair(&p).unwrap();
        assert!(pair.h1.sub(&pair.h0).unwrap().frobenius_norm() < 1e-12);

        let p4 = QlspInstance::new(
            ComplexMatrix::identity(4),
            ComplexVector::from_reals(&[0.5, 0.5, 0.5, 0.5]),
            "id4",
        )
        .unwrap();
        let pair4 = new_pair(&p4).unwrap();
        let qb = projector_qb(p4.rhs()).unwrap();
        let expect = ComplexMatrix::identity(4)
            .sub(&qb.scale(c(1.0 / 3f64.sqrt(), 0.0)))
            .unwrap();
        assert!(pair4.h1.sub(&expect).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn new_h1_fixes_solution() {
        for seed in 0..10u64 {
            let p = random_instance(8, 80 + seed).unwrap();
            let pair = new_pair(&p).unwrap();
            let x = exact_solution(&p).unwrap().x;
            let hx = pair.h1.matvec(&x).unwrap();
            assert!(hx.sub(&x).unwrap().norm() <= 1e-8);
        }
    }

    #[test]
    fn new_pair_scale_invariance() {
        let p = random_instance(4, 7).unwrap();
        let scaled = QlspInstance::new(
            p.matrix().scale(c(3.5, 0.0)),
            p.rhs().clone(),
            "scaled",
        )
        .unwrap();
        let h1a = new_pair(&p).unwrap().h1;
        let h1b = new_pair(&scaled).unwrap().h1;
        assert!(h1a.sub(&h1b).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn lemma1_valid_and_negative() {
        let p = QlspInstance::new(
            ComplexMatrix::identity(2),
            ComplexVector::from_reals(&[1.0, 0.0]),
            "id",
        )
        .unwrap();
        let pair = new_pair(&p).unwrap();
        let rep = lemma1_check(&pair.h0, p.rhs()).unwrap();
        assert!(rep.passed(), "{rep:?}");

        // perturbed projector shifts the zero eigenvalues
        let bad = pair
            .h0
            .add(&ComplexMatrix::identity(2).scale(c(1e-3, 0.0)))
            .unwrap();
        let rep = lemma1_check(&bad, p.rhs()).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn lemma2_valid_and_degenerate() {
        for seed in 0..20u64 {
            let p = random_instance(4, 400 + seed).unwrap();
            let pair = new_pair(&p).unwrap();
            let x = exact_solution(&p).unwrap().x;
            let rep = lemma2_check(&pair.h1, &x).unwrap();
            assert!(rep.passed(), "seed {seed}: {rep:?}");
        }
        // degenerate top eigenvalue fails
        let x = ComplexVector::basis(2, 0);
        let rep = lemma2_check(&ComplexMatrix::identity(2), &x).unwrap();
        assert!(!rep.nondegenerate && !rep.passed());
    }

    #[test]
    fn interpolation_endpoints_and_range() {
        let p = random_instance(2, 3).unwrap();
        let pair = new_pair(&p).unwrap();
        let h_at_0 = interpolate(&pair, 0.0).unwrap();
        let h_at_1 = interpolate(&pair, 1.0).unwrap();
        assert_eq!(h_at_0, pair.h0);
        assert_eq!(h_at_1, pair.h1);
        assert!(matches!(
            interpolate(&pair, 1.5),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn endpoint_expectations_are_unit() {
        for seed in 0..10u64 {
            let p = random_instance(8, 700 + seed).unwrap();
            let pair = new_pair(&p).unwrap();
            let x = exact_solution(&p).unwrap().x;
            let hb = interpolate(&pair, 0.0).unwrap().matvec(p.rhs()).unwrap();
            let bhb = p.rhs().inner(&hb).unwrap();
            assert!((bhb - Complex64::ONE).norm() <= 1e-10);
            let hx = interpolate(&pair, 1.0).unwrap().matvec(&x).unwrap();
            let xhx = x.inner(&hx).unwrap();
            assert!((xhx - Complex64::ONE).norm() <= 1e-8);
        }
    }

    #[test]
    fn step_operator_cases() {
        let z = ComplexMatrix::zeros(2, 2);
        let step = first_order_step(&z);
        assert!(step.sub(&ComplexMatrix::identity(2)).unwrap().frobenius_norm() < 1e-15);

        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let step = first_order_step(&h);
        assert!((step.get(0, 0) - c(1.0, -1.0)).norm() < 1e-15);
        assert!((step.get(1, 1) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn step_operator_adjoint_is_exact() {
        let p = random_instance(4, 5).unwrap();
        let h = new_pair(&p).unwrap().h1;
        let step = first_order_step(&h);
        let plus = ComplexMatrix::from_fn(4, 4, |i, j| {
            let delta = if i == j { Complex64::ONE } else { Complex64::ZERO };
            delta + Complex64::i() * h.get(i, j)
        });
        assert_eq!(step.adjoint(), plus);
    }

    #[test]
    fn step_operator_amplifies_top_eigenvalue() {
        // eigenvalues of I - iH have magnitude sqrt(1 + l^2), increasing in |l|
        use crate::testutil::rand_hermitian_unit_spectrum;
        let h = rand_hermitian_unit_spectrum(4, 21);
        let eig = herm_eig(&h).unwrap();
        let step = first_order_step(&h);
        for (k, &l) in eig.values.iter().enumerate() {
            let v = eig.vector(k);
            let sv = step.matvec(&v).unwrap();
            let expect = (1.0 + l * l).sqrt();
            assert!((sv.norm() - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn schedule_points() {
        let s = Schedule::new(4).unwrap();
        let pts: Vec<f64> = s.points().collect();
        assert_eq!(pts, vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(*pts.last().unwrap(), 1.0);
        assert!(Schedule::new(0).is_err());
    }
}

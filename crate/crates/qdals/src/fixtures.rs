//! Bundled reference problems.
//!
//! Small fixtures with four-decimal entries used throughout the tests, the
//! examples, and the CLI (`--fixture <name>`):
//!
//! * `c2_1` — a 2-dimensional complex linear system;
//! * `s2_1` — a 2-dimensional sparse matrix (two zero elements, one pure
//!   imaginary and one real entry) for block-encoding comparisons;
//! * `h1_c4_1` — a 4-dimensional final Hamiltonian with top eigenvalue 1,
//!   the standard input for eigenvalue-separation traces;
//! * `identity4` — the identity coefficient matrix, for which every solver
//!   must succeed immediately.
//!
//! Because the entries are printed to four decimals, derived spectral
//! quantities carry errors of order 1e-4; checks against these fixtures use
//! tolerances around 1e-3 rather than the solver-grade 1e-9.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::qlsp::QlspInstance;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2-dimensional complex linear system fixture.
pub fn c2_1() -> QlspInstance {
    let a = ComplexMatrix::from_rows(&[
        vec![c(1.3088, 0.0), c(1.3246, -0.6686)],
        vec![c(1.3246, 0.6686), c(0.1441, 0.0)],
    ])
    .unwrap();
    let b = ComplexVector::new(vec![c(0.7406, 0.3019), c(0.4177, 0.0914)]);
    QlspInstance::new(a, b, "c2_1").unwrap()
}

/// Raw right-hand side of `c2_1` as printed (not normalized).
pub fn c2_1_raw_rhs() -> ComplexVector {
    ComplexVector::new(vec![c(0.7406, 0.3019), c(0.4177, 0.0914)])
}

/// 2-dimensional sparse matrix fixture (not Hermitian; encoding target only).
pub fn s2_1() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, 1.5912)],
        vec![c(0.0, 0.0), c(0.5723, 0.0)],
    ])
    .unwrap()
}

/// 4-dimensional final Hamiltonian fixture with top eigenvalue 1.
pub fn h1_c4_1() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![
            c(0.8801, 0.0),
            c(-0.0149, -0.0557),
            c(-0.0092, 0.0280),
            c(0.0163, -0.0544),
        ],
        vec![
            c(-0.0149, 0.0557),
            c(0.3408, 0.0),
            c(-0.2841, -0.2685),
            c(0.0923, -0.1583),
        ],
        vec![
            c(-0.0092, -0.0280),
            c(-0.2841, 0.2685),
            c(0.6885, 0.0),
            c(-0.0113, -0.1592),
        ],
        vec![
            c(0.0163, 0.0544),
            c(0.0923, 0.1583),
            c(-0.0113, 0.1592),
            c(0.8759, 0.0),
        ],
    ])
    .unwrap()
}

/// Identity coefficient matrix on four dimensions with a uniform rhs.
pub fn identity4() -> QlspInstance {
    QlspInstance::new(
        ComplexMatrix::identity(4),
        ComplexVector::from_reals(&[0.5, 0.5, 0.5, 0.5]),
        "identity4",
    )
    .unwrap()
}

/// Names accepted by `--fixture`, in display order.
pub const NAMES: [&str; 4] = ["c2_1", "s2_1", "h1_c4_1", "identity4"];

/// A named fixture: either a full problem instance or a bare matrix.
pub enum Fixture {
    Instance(QlspInstance),
    Matrix { label: &'static str, matrix: ComplexMatrix, hermitian: bool },
}

pub fn by_name(name: &str) -> Option<Fixture> {
    match name {
        "c2_1" => Some(Fixture::Instance(c2_1())),
        "identity4" => Some(Fixture::Instance(identity4())),
        "s2_1" => Some(Fixture::Matrix {
            label: "s2_1",
            matrix: s2_1(),
            hermitian: false,
        }),
        "h1_c4_1" => Some(Fixture::Matrix {
            label: "h1_c4_1",
            matrix: h1_c4_1(),
            hermitian: true,
        }),
        _ => None,
    }
}

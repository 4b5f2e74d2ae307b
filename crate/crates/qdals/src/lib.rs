//! Quantum discrete adiabatic linear solvers on a dense statevector
//! simulator.
//!
//! Given a Hermitian system `A x = b`, this crate prepares the normalized
//! solution state by discrete adiabatic evolution and measures how well it
//! does so. Four pipelines are provided, differing along two axes:
//!
//! * **Hamiltonian scheme** — the original doubled-space pair holding the
//!   solution in a null space, or the new problem-space pair holding it at
//!   the top eigenvalue 1 ([`hamiltonian`]);
//! * **step operator** — exact Hamiltonian-simulation unitaries, or the
//!   first-order step `I - iH` realized as a non-unitary block-encoded
//!   operation with ancilla post-selection ([`solver`], [`blockenc`],
//!   [`statevec`]).
//!
//! The combination of the new Hamiltonians, the improved block encoding, and
//! the repeated-squaring eigenvalue separator ([`separator`]) is the
//! full-strength solver (method `NBE` at separation order 8).
//!
//! # Quick start
//!
//! ```
//! use qdals::fixtures;
//! use qdals::solver::{solve, Method, SolverConfig};
//!
//! let problem = fixtures::c2_1();
//! let report = solve(&problem, &SolverConfig::new(Method::Nbe, 200)).unwrap();
//! assert!(report.fidelity > 0.999);
//! ```
//!
//! Runnable walkthroughs for each capability live under `examples/`; the
//! `qdals` binary exposes the same machinery as a command-line harness.

pub mod bench;
pub mod blockenc;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod hamiltonian;
pub mod io;
pub mod linalg;
pub mod qlsp;
pub mod rng;
pub mod separator;
pub mod solver;
pub mod statevec;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use qlsp::QlspInstance;

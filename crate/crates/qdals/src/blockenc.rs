//! Precise block encoding of arbitrary square matrices.
//!
//! A matrix `M` (any complex entries) is first scaled by its largest entry
//! magnitude so every element `h = |h| e^{i eta}` satisfies `|h| <= 1`, then
//! each element is written into the amplitude of the top ancilla by a
//! value-controlled rotation pair selected by the binary row/column index.
//! Two variants are built:
//!
//! * **original**: `theta = arccos|h|`, `phi = -eta`, starting from
//!   `q_TOP = |0>`. Zero elements still cost an RY(pi) each.
//! * **improved**: `theta~ = arcsin(-|h|)`, `phi~ = -eta`, starting from
//!   `q_TOP = |1>` (one X gate up front). Zero elements need no gates at
//!   all, and RZ is skipped whenever the phase is zero.
//!
//! Either way the circuit's top-left block equals `M / (scale * 2^n)`, which
//! [`encode_mse`] verifies through the full unitary.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::statevec::full_unitary;

/// Rotation angles for one matrix element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleEntry {
    pub row: usize,
    pub col: usize,
    /// RY half-angle: `arccos|h|` (original) or `arcsin(-|h|)` (improved).
    pub theta: f64,
    /// RZ half-angle: `-arg(h)`, with `arg(0)` defined as 0.
    pub phi: f64,
}

/// Per-element angle table for a scaled matrix.
#[derive(Debug, Clone)]
pub struct AngleTable {
    pub entries: Vec<AngleEntry>,
}

fn check_scaled(m: &ComplexMatrix) -> Result<()> {
    for v in m.data() {
        if v.norm() > 1.0 + 1e-12 {
            return Err(Error::OutOfRange(format!(
                "scaled matrix entry magnitude {} exceeds 1",
                v.norm()
            )));
        }
    }
    Ok(())
}

/// Phase `eta` with the zero-element convention `arg(0) = 0`.
fn phase_of(v: Complex64) -> f64 {
    if v == Complex64::ZERO {
        0.0
    } else {
        v.arg()
    }
}

/// Original-scheme angles, one entry per element including zeros
/// (zeros get `theta = pi/2`, `phi = 0`).
pub fn angles_original(m_scaled: &ComplexMatrix) -> Result<AngleTable> {
    check_scaled(m_scaled)?;
    let mut entries = Vec::with_capacity(m_scaled.rows() * m_scaled.cols());
    for row in 0..m_scaled.rows() {
        for col in 0..m_scaled.cols() {
            let h = m_scaled.get(row, col);
            let theta = h.norm().min(1.0).acos();
            entries.push(AngleEntry {
                row,
                col,
                theta,
                phi: -phase_of(h),
            });
        }
    }
    Ok(AngleTable { entries })
}

/// Improved-scheme angles; zero elements are omitted from the table.
pub fn angles_improved(m_scaled: &ComplexMatrix) -> Result<AngleTable> {
    check_scaled(m_scaled)?;
    let mut entries = Vec::new();
    for row in 0..m_scaled.rows() {
        for col in 0..m_scaled.cols() {
            let h = m_scaled.get(row, col);
            if h == Complex64::ZERO {
                continue;
            }
            let theta = (-h.norm().min(1.0)).asin();
            entries.push(AngleEntry {
                row,
                col,
                theta,
                phi: -phase_of(h),
            });
        }
    }
    Ok(AngleTable { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EncodingScheme {
    Original,
    Improved,
}

fn check_encodable(m: &ComplexMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "block encoding needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::OutOfRange(format!(
            "block encoding needs dimension a power of two >= 2, got {n}"
        )));
    }
    Ok(n.trailing_zeros() as usize)
}

/// Control pattern selecting element `(row, col)`: the main register `q_j`
/// (qubits `0..n`) must read `col`, the index ancillas `q_i` (qubits
/// `n..2n`) must read `row`. Listed ascending by qubit.
fn element_controls(n: usize, row: usize, col: usize) -> Vec<(usize, bool)> {
    let mut controls = Vec::with_capacity(2 * n);
    for k in 0..n {
        controls.push((k, (col >> k) & 1 == 1));
    }
    for k in 0..n {
        controls.push((n + k, (row >> k) & 1 == 1));
    }
    controls
}

fn build(m: &ComplexMatrix, scheme: EncodingScheme) -> Result<Circuit> {
    let n = check_encodable(m)?;
    let scale = m.max_abs_element()?; // ZeroMatrix for all-zero input
    let scaled = m.scale(Complex64::new(1.0 / scale, 0.0));
    let table = match scheme {
        EncodingScheme::Original => angles_original(&scaled)?,
        EncodingScheme::Improved => angles_improved(&scaled)?,
    };

    let q_top = 2 * n;
    let mut circuit = Circuit::new(n, n + 1, scale);
    if scheme == EncodingScheme::Improved {
        circuit.push(Gate::x(q_top))?;
    }
    for k in 0..n {
        circuit.push(Gate::h(n + k))?;
    }
    for e in &table.entries {
        let controls = element_controls(n, e.row, e.col);
        circuit.push(Gate::cry(q_top, controls.clone(), 2.0 * e.theta))?;
        if e.phi != 0.0 {
            circuit.push(Gate::crz(q_top, controls, 2.0 * e.phi))?;
        }
    }
    for k in 0..n {
        circuit.push(Gate::swap(n + k, k))?;
    }
    for k in 0..n {
        circuit.push(Gate::h(n + k))?;
    }
    Ok(circuit)
}

/// Original precise block-encoding circuit (rotations for every element).
pub fn build_original(m: &ComplexMatrix) -> Result<Circuit> {
    build(m, EncodingScheme::Original)
}

/// Improved block-encoding circuit (zero elements cost nothing).
pub fn build_improved(m: &ComplexMatrix) -> Result<Circuit> {
    build(m, EncodingScheme::Improved)
}

/// Mean squared error between the rescaled effective block of `c` and `m`.
///
/// The effective block (ancillas in and out of `|0...0>`) is extracted from
/// the full unitary and multiplied back by `scale * 2^n` before comparison.
pub fn encode_mse(c: &Circuit, m: &ComplexMatrix) -> Result<f64> {
    let n_dim = 1usize << c.n_main;
    if m.rows() != n_dim || m.cols() != n_dim {
        return Err(Error::DimensionMismatch(format!(
            "circuit encodes a {n_dim}x{n_dim} block, matrix is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let u = full_unitary(c)?;
    let factor = c.scale * n_dim as f64;
    let mut total = 0.0;
    for i in 0..n_dim {
        for j in 0..n_dim {
            total += (u.get(i, j) * factor - m.get(i, j)).norm_sqr();
        }
    }
    Ok(total / (n_dim * n_dim) as f64)
}

/// Effective block rescaled to the encoded matrix (test/inspection helper).
pub fn decoded_block(c: &Circuit) -> Result<ComplexMatrix> {
    let n_dim = 1usize << c.n_main;
    let u = full_unitary(c)?;
    let factor = c.scale * n_dim as f64;
    Ok(ComplexMatrix::from_fn(n_dim, n_dim, |i, j| {
        u.get(i, j) * factor
    }))
}

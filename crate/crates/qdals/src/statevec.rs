//! Dense statevector simulation of the gate IR.
//!
//! Amplitude `amps[k]` belongs to the basis state whose qubit `q` holds bit
//! `(k >> q) & 1`. With ancillas occupying the most significant positions,
//! the "all ancillas zero" branch is simply the first `2^n_main` amplitudes,
//! which makes post-selection a prefix operation.
//!
//! Controlled gates enumerate only the amplitudes whose controls match, so a
//! fully controlled rotation costs O(1) regardless of register width.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Hard cap on simulated qubits (4096 amplitudes for the full-unitary path).
pub const MAX_QUBITS: usize = 12;
/// Post-selection success probabilities below this are treated as an
/// annihilated state.
pub const ZERO_PROJECTION_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits`.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[0] = Complex64::ONE;
        Self { n_qubits, amps }
    }

    /// Basis state `|index>`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[index] = Complex64::ONE;
        Self { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude count must be a power of two >= 2, got {len}"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// `|0_anc> (x) |psi>`: the main-register state in the low qubits, all
    /// ancillas (most significant qubits) zeroed.
    pub fn embed(main: &ComplexVector, n_anc: usize) -> Result<Self> {
        let dim = main.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "main register dimension must be a power of two >= 2, got {dim}"
            )));
        }
        let n_main = dim.trailing_zeros() as usize;
        let n_qubits = n_main + n_anc;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooLarge(format!(
                "{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit simulator cap"
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[..dim].copy_from_slice(main.data());
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amps.clone())
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.max_qubit() >= self.n_qubits {
            return Err(Error::IndexOutOfRange(format!(
                "gate touches qubit {} on a {}-qubit state",
                gate.max_qubit(),
                self.n_qubits
            )));
        }
        match gate.kind {
            GateKind::PauliX => {
                let u = [
                    [Complex64::ZERO, Complex64::ONE],
                    [Complex64::ONE, Complex64::ZERO],
                ];
                self.apply_single(gate.targets[0], &gate.controls, &u);
            }
            GateKind::Hadamard => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                let u = [[h, h], [h, -h]];
                self.apply_single(gate.targets[0], &gate.controls, &u);
            }
            GateKind::ControlledRy => {
                let half = gate.angle / 2.0;
                let (s, c) = half.sin_cos();
                let u = [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ];
                self.apply_single(gate.targets[0], &gate.controls, &u);
            }
            GateKind::ControlledRz => {
                let half = gate.angle / 2.0;
                let u = [
                    [Complex64::from_polar(1.0, -half), Complex64::ZERO],
                    [Complex64::ZERO, Complex64::from_polar(1.0, half)],
                ];
                self.apply_single(gate.targets[0], &gate.controls, &u);
            }
            GateKind::Swap => {
                self.apply_swap(gate.targets[0], gate.targets[1], &gate.controls);
            }
        }
        Ok(())
    }

    /// Run every gate of `c` in order.
    pub fn run_circuit(&mut self, c: &Circuit) -> Result<()> {
        if self.n_qubits != c.n_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "state has {} qubits, circuit needs {}",
                self.n_qubits,
                c.n_qubits()
            )));
        }
        for gate in &c.gates {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    fn apply_single(&mut self, target: usize, controls: &[(usize, bool)], u: &[[Complex64; 2]; 2]) {
        let tbit = 1usize << target;
        let iter = MatchingIndices::new(self.n_qubits, controls, &[target]);
        for idx0 in iter {
            let idx1 = idx0 | tbit;
            let a0 = self.amps[idx0];
            let a1 = self.amps[idx1];
            self.amps[idx0] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[idx1] = u[1][0] * a0 + u[1][1] * a1;
        }
    }

    fn apply_swap(&mut self, qa: usize, qb: usize, controls: &[(usize, bool)]) {
        let abit = 1usize << qa;
        let bbit = 1usize << qb;
        // fix both swap qubits to zero in the base index; the pair to exchange
        // is (base | a-bit, base | b-bit)
        let iter = MatchingIndices::new(self.n_qubits, controls, &[qa, qb]);
        for idx in iter {
            self.amps.swap(idx | abit, idx | bbit);
        }
    }
}

/// Iterator over base indices whose control bits hold their required values
/// and whose `fixed` qubits are zero. Free qubits range over all assignments,
/// so a gate with `c` controls visits `2^(n - c - |fixed|)` indices.
struct MatchingIndices {
    free: Vec<usize>,
    control_value: usize,
    next: usize,
    count: usize,
}

impl MatchingIndices {
    fn new(n_qubits: usize, controls: &[(usize, bool)], fixed: &[usize]) -> Self {
        let mut cmask = 0usize;
        let mut cval = 0usize;
        for &(q, v) in controls {
            cmask |= 1 << q;
            if v {
                cval |= 1 << q;
            }
        }
        let free: Vec<usize> = (0..n_qubits)
            .filter(|q| cmask & (1 << q) == 0 && !fixed.contains(q))
            .collect();
        let count = 1usize << free.len();
        Self {
            free,
            control_value: cval,
            next: 0,
            count,
        }
    }
}

impl Iterator for MatchingIndices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.next >= self.count {
            return None;
        }
        let mut idx = self.control_value;
        let mut bits = self.next;
        for &q in &self.free {
            if bits & 1 == 1 {
                idx |= 1 << q;
            }
            bits >>= 1;
        }
        self.next += 1;
        Some(idx)
    }
}

/// Outcome of projecting the ancillas onto `|0...0>`.
#[derive(Debug, Clone)]
pub struct PostSelection {
    /// Renormalized main-register state.
    pub kept_state: StateVector,
    /// Squared norm of the ancilla-zero branch before renormalization.
    pub success_prob: f64,
}

/// Project the top `n_anc` qubits onto zero, renormalize what remains.
pub fn post_select_ancillas(state: &StateVector, n_anc: usize) -> Result<PostSelection> {
    if n_anc >= state.n_qubits() {
        return Err(Error::OutOfRange(format!(
            "cannot post-select {} ancillas out of {} qubits",
            n_anc,
            state.n_qubits()
        )));
    }
    let n_main = state.n_qubits() - n_anc;
    let keep = 1usize << n_main;
    let success_prob: f64 = state.amps[..keep].iter().map(|a| a.norm_sqr()).sum();
    if success_prob < ZERO_PROJECTION_TOL {
        return Err(Error::ZeroProjection);
    }
    let inv = 1.0 / success_prob.sqrt();
    let kept = state.amps[..keep].iter().map(|a| a * inv).collect();
    Ok(PostSelection {
        kept_state: StateVector {
            n_qubits: n_main,
            amps: kept,
        },
        success_prob,
    })
}

/// Build the full unitary of a circuit column by column.
pub fn full_unitary(c: &Circuit) -> Result<ComplexMatrix> {
    let nq = c.n_qubits();
    if nq > MAX_QUBITS {
        return Err(Error::TooLarge(format!(
            "{nq} qubits exceeds the {MAX_QUBITS}-qubit full-unitary cap"
        )));
    }
    let dim = 1usize << nq;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = StateVector::basis_state(nq, col);
        state.run_circuit(c)?;
        for row in 0..dim {
            u.set(row, col, state.amps[row]);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::testutil::c;

    #[test]
    fn x_flips_basis() {
        let mut s = StateVector::zero_state(1);
        s.apply_gate(&Gate::x(0)).unwrap();
        assert!((s.amplitudes()[1] - Complex64::ONE).norm() < 1e-15);
        assert!(s.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn hadamard_superposes() {
        let mut s = StateVector::zero_state(1);
        s.apply_gate(&Gate::h(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unmet_control_is_identity() {
        let mut s = StateVector::zero_state(2);
        let before = s.amplitudes().to_vec();
        s.apply_gate(&Gate::cry(1, vec![(0, true)], 1.234)).unwrap();
        assert_eq!(s.amplitudes(), &before[..]);

        // met control rotates
        let mut s = StateVector::basis_state(2, 1);
        s.apply_gate(&Gate::cry(1, vec![(0, true)], std::f64::consts::PI))
            .unwrap();
        // RY(pi)|0> = |1> on the target
        assert!((s.amplitudes()[3] - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn control_on_zero_matches() {
        let mut s = StateVector::zero_state(2);
        s.apply_gate(&Gate::cry(1, vec![(0, false)], std::f64::consts::PI))
            .unwrap();
        assert!((s.amplitudes()[2] - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn swap_exchanges_bits() {
        let mut s = StateVector::basis_state(2, 1); // |q1=0, q0=1>
        s.apply_gate(&Gate::swap(0, 1)).unwrap();
        assert!((s.amplitudes()[2] - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn rz_phases() {
        let mut s = StateVector::basis_state(1, 1);
        s.apply_gate(&Gate::crz(0, vec![], std::f64::consts::PI))
            .unwrap();
        // RZ(pi)|1> = e^{i pi/2}|1> = i|1>
        assert!((s.amplitudes()[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn single_gate_unitaries() {
        let mut cx = Circuit::new(1, 0, 1.0);
        cx.push(Gate::x(0)).unwrap();
        let u = full_unitary(&cx).unwrap();
        assert!((u.get(0, 1) - Complex64::ONE).norm() < 1e-15);
        assert!((u.get(1, 0) - Complex64::ONE).norm() < 1e-15);

        let mut ch = Circuit::new(1, 0, 1.0);
        ch.push(Gate::h(0)).unwrap();
        let u = full_unitary(&ch).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.get(1, 1) - c(-r, 0.0)).norm() < 1e-15);
        assert!((u.get(0, 0) - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn circuit_then_inverse_is_identity() {
        let mut circ = Circuit::new(2, 1, 1.0);
        circ.push(Gate::h(0)).unwrap();
        circ.push(Gate::cry(2, vec![(0, true), (1, false)], 0.83)).unwrap();
        circ.push(Gate::crz(2, vec![(0, true)], -0.31)).unwrap();
        circ.push(Gate::swap(1, 2)).unwrap();
        circ.push(Gate::x(2)).unwrap();

        let mut s = StateVector::zero_state(3);
        // some arbitrary prep
        s.apply_gate(&Gate::h(1)).unwrap();
        s.apply_gate(&Gate::cry(0, vec![(1, true)], 0.4)).unwrap();
        let before = s.clone();
        s.run_circuit(&circ).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        s.run_circuit(&circ.inverted()).unwrap();
        let diff: f64 = s
            .amplitudes()
            .iter()
            .zip(before.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10);
    }

    #[test]
    fn post_selection_trivial_and_annihilating() {
        // |0_anc> (x) |psi>
        let psi = ComplexVector::from_reals(&[0.6, 0.8]);
        let s = StateVector::embed(&psi, 2).unwrap();
        let sel = post_select_ancillas(&s, 2).unwrap();
        assert!((sel.success_prob - 1.0).abs() < 1e-12);
        assert!((sel.kept_state.amplitudes()[0] - c(0.6, 0.0)).norm() < 1e-12);

        // ancilla in |1>: projection annihilates
        let mut s = StateVector::embed(&psi, 1).unwrap();
        s.apply_gate(&Gate::x(1)).unwrap();
        assert!(matches!(
            post_select_ancillas(&s, 1),
            Err(Error::ZeroProjection)
        ));
    }

    #[test]
    fn embed_checks_sizes() {
        let psi = ComplexVector::from_reals(&[1.0, 0.0]);
        assert!(StateVector::embed(&psi, 12).is_err());
        let odd = ComplexVector::from_reals(&[1.0, 0.0, 0.0]);
        assert!(StateVector::embed(&odd, 1).is_err());
    }

    #[test]
    fn norm_preserved_across_many_gates() {
        let mut s = StateVector::zero_state(4);
        for k in 0..1000usize {
            let q = k % 4;
            match k % 3 {
                0 => s.apply_gate(&Gate::h(q)).unwrap(),
                1 => s
                    .apply_gate(&Gate::cry(q, vec![((q + 1) % 4, true)], 0.1 + k as f64 * 1e-3))
                    .unwrap(),
                _ => s
                    .apply_gate(&Gate::crz(q, vec![((q + 2) % 4, false)], -0.2))
                    .unwrap(),
            }
        }
        assert!((s.norm() - 1.0).abs() < 1e-11);
    }
}

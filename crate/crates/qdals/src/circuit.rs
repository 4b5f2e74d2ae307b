//! Gate-level intermediate representation for block-encoding circuits.
//!
//! Circuits act on three registers laid out over `n_main + n_anc` qubits:
//! the main register `q_j` occupies qubits `0..n` (little-endian), the index
//! ancillas `q_i` occupy `n..2n`, and the single `q_TOP` ancilla is qubit
//! `2n` — the most significant position. Controls carry an explicit required
//! bit value, so control-on-zero needs no basis change.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    PauliX,
    Hadamard,
    Swap,
    ControlledRy,
    ControlledRz,
}

impl GateKind {
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::PauliX => "X",
            GateKind::Hadamard => "H",
            GateKind::Swap => "SWAP",
            GateKind::ControlledRy => "CRY",
            GateKind::ControlledRz => "CRZ",
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::ControlledRy | GateKind::ControlledRz)
    }
}

/// One gate: a kind, target qubit(s), value-matched controls, and a rotation
/// angle (radians; meaningful for rotation kinds only).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    /// `(qubit, required bit value)` pairs; all must match for the gate to act.
    pub controls: Vec<(usize, bool)>,
    pub angle: f64,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Self {
            kind: GateKind::PauliX,
            targets: vec![target],
            controls: Vec::new(),
            angle: 0.0,
        }
    }

    pub fn h(target: usize) -> Self {
        Self {
            kind: GateKind::Hadamard,
            targets: vec![target],
            controls: Vec::new(),
            angle: 0.0,
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "swap needs two distinct qubits");
        Self {
            kind: GateKind::Swap,
            targets: vec![a, b],
            controls: Vec::new(),
            angle: 0.0,
        }
    }

    pub fn cry(target: usize, controls: Vec<(usize, bool)>, angle: f64) -> Self {
        Self::rotation(GateKind::ControlledRy, target, controls, angle)
    }

    pub fn crz(target: usize, controls: Vec<(usize, bool)>, angle: f64) -> Self {
        Self::rotation(GateKind::ControlledRz, target, controls, angle)
    }

    fn rotation(kind: GateKind, target: usize, controls: Vec<(usize, bool)>, angle: f64) -> Self {
        assert!(angle.is_finite(), "rotation angle must be finite");
        assert!(
            controls.iter().all(|&(q, _)| q != target),
            "controls must be disjoint from the target"
        );
        Self {
            kind,
            targets: vec![target],
            controls,
            angle: 0.0 + angle,
        }
    }

    /// Largest qubit index this gate touches.
    pub fn max_qubit(&self) -> usize {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|&(q, _)| q))
            .max()
            .unwrap_or(0)
    }
}

/// An ordered gate list over main + ancilla registers, together with the
/// scalar `scale` that relates the encoded block back to the source matrix:
/// the effective block equals `M / (scale * 2^n)`.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub n_main: usize,
    pub n_anc: usize,
    pub gates: Vec<Gate>,
    pub scale: f64,
}

impl Circuit {
    pub fn new(n_main: usize, n_anc: usize, scale: f64) -> Self {
        assert!(scale > 0.0, "scale must be positive");
        Self {
            n_main,
            n_anc,
            gates: Vec::new(),
            scale,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_main + self.n_anc
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.n_qubits() {
            return Err(Error::IndexOutOfRange(format!(
                "gate touches qubit {} but the circuit has {} qubits",
                gate.max_qubit(),
                self.n_qubits()
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Gates in reverse order with inverted rotations: the circuit inverse
    /// (all kinds here are self-inverse apart from the rotation angle sign).
    pub fn inverted(&self) -> Self {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                let mut g = g.clone();
                if g.kind.is_rotation() {
                    g.angle = -g.angle;
                }
                g
            })
            .collect();
        Self {
            n_main: self.n_main,
            n_anc: self.n_anc,
            gates,
            scale: self.scale,
        }
    }

    /// Plain-text listing, one gate per line:
    /// `KIND target(s) [q=b q=b ...] angle`.
    ///
    /// Controls are listed ascending by qubit; the angle column appears only
    /// for rotation gates. The header line records the register split and
    /// scale so a listing is self-describing.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# circuit n_main={} n_anc={} scale={}",
            self.n_main, self.n_anc, self.scale
        );
        for g in &self.gates {
            let _ = write!(out, "{}", g.kind.mnemonic());
            for t in &g.targets {
                let _ = write!(out, " {t}");
            }
            if !g.controls.is_empty() {
                let _ = write!(out, " [");
                for (k, &(q, v)) in g.controls.iter().enumerate() {
                    if k > 0 {
                        let _ = write!(out, " ");
                    }
                    let _ = write!(out, "{}={}", q, if v { 1 } else { 0 });
                }
                let _ = write!(out, "]");
            }
            if g.kind.is_rotation() {
                let _ = write!(out, " {}", g.angle);
            }
            let _ = writeln!(out);
        }
        out
    }
}

/// Gate-count breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateMetrics {
    /// Controlled-rotation count (RY + RZ).
    pub rotations: usize,
    /// Structural gates: X, H, SWAP.
    pub frame: usize,
    pub total: usize,
}

pub fn gate_metrics(c: &Circuit) -> GateMetrics {
    let rotations = c.gates.iter().filter(|g| g.kind.is_rotation()).count();
    let frame = c.gates.len() - rotations;
    GateMetrics {
        rotations,
        frame,
        total: c.gates.len(),
    }
}

//! Matchgate circuits: the gate-list representation, the text format, and
//! the dense and rotation evaluators.
//!
//! Gates are listed in time order. The first gate in a circuit is the first
//! one applied, so the dense unitary is `U_m ... U_2 U_1`.

pub mod gates;
mod parser;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{paulis, Operator, Tolerances, MAX_QUBITS};
use crate::majorana::jw_majoranas;

pub use parser::{parse_angle, parse_circuit, ParseError, ParseErrorKind};

/// A one-qubit block, as used inside `G`/`J` gates. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneQubitGate {
    I,
    X,
    Y,
    Z,
    H,
    P(f64),
    Rx(f64),
    Ry(f64),
    Rz(f64),
}

impl OneQubitGate {
    pub fn operator(&self) -> Operator {
        match *self {
            OneQubitGate::I => paulis::identity(),
            OneQubitGate::X => paulis::x(),
            OneQubitGate::Y => paulis::y(),
            OneQubitGate::Z => paulis::z(),
            OneQubitGate::H => paulis::h(),
            OneQubitGate::P(t) => gates::phase_gate(t),
            OneQubitGate::Rx(t) => gates::rx(t),
            OneQubitGate::Ry(t) => gates::ry(t),
            OneQubitGate::Rz(t) => gates::rz(t),
        }
    }
}

impl fmt::Display for OneQubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneQubitGate::I => write!(f, "I"),
            OneQubitGate::X => write!(f, "X"),
            OneQubitGate::Y => write!(f, "Y"),
            OneQubitGate::Z => write!(f, "Z"),
            OneQubitGate::H => write!(f, "H"),
            OneQubitGate::P(t) => write!(f, "P({t})"),
            OneQubitGate::Rx(t) => write!(f, "RX({t})"),
            OneQubitGate::Ry(t) => write!(f, "RY({t})"),
            OneQubitGate::Rz(t) => write!(f, "RZ({t})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoQubitGate {
    Fswap,
    Ghh,
    Swap,
    Cz,
    Cphase(f64),
}

impl TwoQubitGate {
    pub fn operator(&self) -> Operator {
        match *self {
            TwoQubitGate::Fswap => gates::fswap(),
            TwoQubitGate::Ghh => gates::ghh(),
            TwoQubitGate::Swap => gates::swap(),
            TwoQubitGate::Cz => gates::cz(),
            TwoQubitGate::Cphase(t) => gates::cphase(t),
        }
    }
}

impl fmt::Display for TwoQubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoQubitGate::Fswap => write!(f, "FSWAP"),
            TwoQubitGate::Ghh => write!(f, "GHH"),
            TwoQubitGate::Swap => write!(f, "SWAP"),
            TwoQubitGate::Cz => write!(f, "CZ"),
            TwoQubitGate::Cphase(t) => write!(f, "CPHASE({t})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    /// Even layout `G(A, B)` on wires `pos, pos + 1`.
    G(OneQubitGate, OneQubitGate),
    /// Odd layout `J(A, B)` on wires `pos, pos + 1`.
    J(OneQubitGate, OneQubitGate),
    /// Pauli `X` on wire `pos`; at wire 1 this is `c_1`.
    X,
    Named(TwoQubitGate),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateApp {
    pub op: GateOp,
    /// First (1-based) wire the gate acts on.
    pub pos: usize,
}

impl GateApp {
    pub fn new(op: GateOp, pos: usize) -> Self {
        Self { op, pos }
    }

    pub fn width(&self) -> usize {
        match self.op {
            GateOp::X => 1,
            _ => 2,
        }
    }

    pub fn is_odd(&self) -> bool {
        matches!(self.op, GateOp::J(..) | GateOp::X)
    }

    /// The gate as a one- or two-qubit operator.
    pub fn operator(&self) -> Operator {
        match self.op {
            GateOp::G(a, b) => gates::build_g(&a.operator(), &b.operator()).expect("unitary blocks"),
            GateOp::J(a, b) => gates::build_j(&a.operator(), &b.operator()).expect("unitary blocks"),
            GateOp::X => paulis::x(),
            GateOp::Named(g) => g.operator(),
        }
    }

    /// Block determinants `(|A|, |B|)`; `None` for the one-qubit `X`.
    pub fn block_determinants(&self) -> Option<(Complex64, Complex64)> {
        match self.op {
            GateOp::G(a, b) | GateOp::J(a, b) => Some((a.operator().det2(), b.operator().det2())),
            GateOp::X => None,
            GateOp::Named(_) => {
                let (a, b) = gates::layout_blocks(&self.operator(), false);
                Some((a.det2(), b.det2()))
            }
        }
    }

    /// Whether the gate satisfies `|A| = |B|` (always true for `X`).
    pub fn is_matchgate(&self, tol: &Tolerances) -> bool {
        self.block_determinants()
            .is_none_or(|(a, b)| (a - b).norm() < tol.residual)
    }

    /// The `4 x 4` rotation of a two-qubit gate, or the `2 x 2` sign pattern of `X`.
    fn local_rotation(&self) -> DMatrix<f64> {
        if let GateOp::X = self.op {
            return DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        }
        let u = self.operator();
        let cs = jw_majoranas(2);
        let ud = u.adjoint();
        DMatrix::from_fn(4, 4, |mu, nu| {
            let conj = u.matmul(&cs[mu]).matmul(&ud);
            (cs[nu].matmul(&conj).trace() / 4.0).re
        })
    }
}

impl fmt::Display for GateApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            GateOp::G(a, b) => write!(f, "G {a} {b} @ {}", self.pos),
            GateOp::J(a, b) => write!(f, "J {a} {b} @ {}", self.pos),
            GateOp::X => write!(f, "X @ {}", self.pos),
            GateOp::Named(g) => write!(f, "{g} @ {}", self.pos),
        }
    }
}

/// A validated circuit on `n_qubits` wires.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitIr {
    n_qubits: usize,
    freeform: bool,
    gates: Vec<GateApp>,
}

impl CircuitIr {
    /// Checks positions and, unless `freeform`, the determinant condition.
    pub fn new(n_qubits: usize, freeform: bool, gates: Vec<GateApp>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let tol = Tolerances::default();
        for g in &gates {
            validate_gate(g, n_qubits, freeform, &tol)?;
        }
        Ok(Self {
            n_qubits,
            freeform,
            gates,
        })
    }

    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, false, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn freeform(&self) -> bool {
        self.freeform
    }

    pub fn gates(&self) -> &[GateApp] {
        &self.gates
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &CircuitIr) -> Result<CircuitIr> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let gates = self.gates.iter().chain(&other.gates).copied().collect();
        Ok(CircuitIr {
            n_qubits: self.n_qubits,
            freeform: self.freeform || other.freeform,
            gates,
        })
    }

    /// Splits after the first `at` gates.
    pub fn split_at(&self, at: usize) -> (CircuitIr, CircuitIr) {
        let (a, b) = self.gates.split_at(at.min(self.gates.len()));
        let part = |g: &[GateApp]| CircuitIr {
            n_qubits: self.n_qubits,
            freeform: self.freeform,
            gates: g.to_vec(),
        };
        (part(a), part(b))
    }

    /// Canonical text; parsing it gives back an equal circuit.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CircuitIr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        if self.freeform {
            writeln!(f, "allow freeform")?;
        }
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

pub(crate) fn validate_gate(g: &GateApp, n: usize, freeform: bool, tol: &Tolerances) -> Result<()> {
    let last = g.pos + g.width() - 1;
    if g.pos == 0 || last > n {
        return Err(Error::WireOutOfRange {
            wire: if g.pos == 0 { 0 } else { last },
            n_qubits: n,
        });
    }
    if !freeform && !g.is_matchgate(tol) {
        let (det_a, det_b) = g.block_determinants().expect("two-qubit gate");
        return Err(Error::DeterminantMismatch { det_a, det_b });
    }
    Ok(())
}

/// Dense unitary of the whole circuit.
pub fn circuit_to_operator(c: &CircuitIr) -> Operator {
    let mut u = Operator::identity(c.n_qubits);
    for g in &c.gates {
        u.left_apply_local(&g.operator(), g.pos)
            .expect("positions validated on construction");
    }
    u
}

/// Rotation of one gate embedded in `2n` modes.
fn embedded_rotation(g: &GateApp, n: usize) -> DMatrix<f64> {
    let local = g.local_rotation();
    let first = 2 * (g.pos - 1);
    let width = local.nrows();
    let tail = if g.is_odd() { -1.0 } else { 1.0 };
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for mu in 0..first {
        r[(mu, mu)] = 1.0;
    }
    r.view_mut((first, first), (width, width)).copy_from(&local);
    for mu in first + width..2 * n {
        r[(mu, mu)] = tail;
    }
    r
}

/// `R` with `U c_mu U^dagger = sum_nu R[mu][nu] c_nu`, composed gate by gate.
///
/// Fails on the first gate that does not satisfy the determinant condition,
/// since such a gate has no rotation.
pub fn circuit_to_rotation(c: &CircuitIr) -> Result<DMatrix<f64>> {
    let tol = Tolerances::default();
    let n = c.n_qubits;
    let mut r = DMatrix::identity(2 * n, 2 * n);
    for (index, g) in c.gates.iter().enumerate() {
        if !g.is_matchgate(&tol) {
            return Err(Error::NotGaussian { index });
        }
        // earlier gates act first, so their rotation multiplies on the left
        r *= embedded_rotation(g, n);
    }
    Ok(r)
}

/// The Bell-pair preparation circuit on `2n` wires: `G(H,H)` on each pair,
/// then `n - 1` layers of fermionic swaps that put odd wires first.
pub fn build_bn(n: usize) -> Result<CircuitIr> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("B^(n) needs n >= 2, got {n}")));
    }
    let mut gates: Vec<GateApp> = (0..n)
        .map(|k| GateApp::new(GateOp::Named(TwoQubitGate::Ghh), 2 * k + 1))
        .collect();
    for layer in 1..n {
        gates.extend(
            (layer + 1..2 * n - layer)
                .step_by(2)
                .map(|k| GateApp::new(GateOp::Named(TwoQubitGate::Fswap), k)),
        );
    }
    CircuitIr::new(2 * n, false, gates)
}

//! Majorana operators, matchgate circuits and the matchgate hierarchy.
//!
//! Qubit 1 is the most significant bit of a basis index, operators are
//! stored row-major, and Majoranas follow the Jordan-Wigner convention
//! `c_{2k-1} = Z..Z X_k`, `c_{2k} = Z..Z Y_k`.

pub mod circuits;
pub mod error;
pub mod hierarchy;
pub mod linalg;
pub mod majorana;
pub mod random;
pub mod selftest;
pub mod svn;
pub mod teleport;

pub use circuits::{
    build_bn, circuit_to_operator, circuit_to_rotation, parse_circuit, CircuitIr, GateApp, GateOp,
    OneQubitGate, ParseError, TwoQubitGate,
};
pub use error::{Error, Result};
pub use linalg::{canonical_phase, equal_up_to_phase, Operator, PhaseMatch, StateVector, Tolerances};
pub use hierarchy::{classify, level_membership, min_level, HierarchyReport};
pub use majorana::{CarSet, MajoranaPoly, Parity};
pub use svn::{svn_reconstruct, verify_uniqueness, SvnResult};
pub use teleport::{
    magic_state, simulate_protocol, verify_protocol, MagicState, Outcome, ProtocolReport,
    TeleportTranscript,
};

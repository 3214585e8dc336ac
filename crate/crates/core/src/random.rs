//! Seeded random corpora: Haar unitaries, states, matchgates and planted
//! hierarchy gates. Every generator takes the RNG explicitly so a single
//! seed reproduces a whole run.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuits::{CircuitIr, GateApp, GateOp, OneQubitGate, TwoQubitGate};
use crate::circuits::gates::{build_g, build_j};
use crate::linalg::{Operator, StateVector, ONE};
use crate::majorana::jw_majorana;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random `d x d` unitary (QR of a Ginibre matrix with the phase fix).
pub fn haar_matrix(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { ONE };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_unitary(n_qubits: usize, rng: &mut impl Rng) -> Operator {
    let d = 1usize << n_qubits;
    let q = haar_matrix(d, rng);
    let data = (0..d).flat_map(|r| (0..d).map(move |c| (r, c))).map(|(r, c)| q[(r, c)]).collect();
    Operator::from_row_major(data).expect("power-of-two dimension")
}

pub fn random_state(n_qubits: usize, rng: &mut impl Rng) -> StateVector {
    let amps = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    StateVector::from_amplitudes(amps)
        .and_then(|s| s.normalized())
        .expect("nonzero gaussian vector")
}

/// Haar-random unitary that preserves parity: independent Haar blocks on the
/// even and odd subspaces. With `odd`, the result is multiplied by `c_1`.
pub fn random_fermionic_unitary(n_qubits: usize, odd: bool, rng: &mut impl Rng) -> Operator {
    let d = 1usize << n_qubits;
    let even_idx: Vec<usize> = (0..d).filter(|i| i.count_ones() % 2 == 0).collect();
    let odd_idx: Vec<usize> = (0..d).filter(|i| i.count_ones() % 2 == 1).collect();
    let mut u = Operator::zeros(n_qubits);
    for idx in [&even_idx, &odd_idx] {
        let block = haar_matrix(idx.len(), rng);
        for (a, &r) in idx.iter().enumerate() {
            for (b, &c) in idx.iter().enumerate() {
                u.set(r, c, block[(a, b)]);
            }
        }
    }
    if odd {
        u = u.matmul(&jw_majorana(n_qubits, 1).expect("mode 1 exists"));
    }
    u
}

/// Scales a Haar `B` so that `det(A) / det(B) = ratio` exactly.
fn blocks_with_ratio(ratio: Complex64, rng: &mut impl Rng) -> (Operator, Operator) {
    let a = haar_unitary(1, rng);
    let b = haar_unitary(1, rng);
    // det(s B) = s^2 det(B); pick s with s^2 = det(A) / (ratio det(B))
    let target = a.det2() / (ratio * b.det2());
    let s = target.sqrt();
    let b = b.scale(s / s.norm());
    (a, b)
}

/// Random two-qubit matchgate `G(A, B)` with Haar blocks and `|A| = |B|`.
pub fn random_matchgate(rng: &mut impl Rng) -> Operator {
    let (a, b) = blocks_with_ratio(ONE, rng);
    build_g(&a, &b).expect("unitary blocks")
}

/// `G(A, B)` (or `J(A, B)` when `odd`) with Haar blocks and
/// `|A| / |B| = e^{2 pi i j / 2^m}`.
pub fn planted_two_qubit(j: u64, m: u32, odd: bool, rng: &mut impl Rng) -> Operator {
    let angle = 2.0 * PI * (j as f64) / (1u64 << m) as f64;
    let (a, b) = blocks_with_ratio(Complex64::from_polar(1.0, angle), rng);
    if odd {
        build_j(&a, &b).expect("unitary blocks")
    } else {
        build_g(&a, &b).expect("unitary blocks")
    }
}

/// A random gate of level at most `k >= 2` on two qubits: its determinant
/// ratio is a uniformly chosen `2^(k-2)`-th root of unity.
pub fn random_level_two_qubit(k: u32, rng: &mut impl Rng) -> Operator {
    let m = k.saturating_sub(2);
    let j = rng.random_range(0..(1u64 << m));
    planted_two_qubit(j, m, rng.random_bool(0.5), rng)
}

/// Random one-qubit level-2 gate: a phase-rotated `RZ`, optionally times `X`.
pub fn random_level_two_one_qubit(rng: &mut impl Rng) -> Operator {
    let alpha: f64 = rng.random_range(0.0..2.0 * PI);
    let beta: f64 = rng.random_range(0.0..2.0 * PI);
    let phase = Complex64::from_polar(1.0, beta);
    let d = Operator::diagonal(
        1,
        &[
            phase * Complex64::from_polar(1.0, -alpha / 2.0),
            phase * Complex64::from_polar(1.0, alpha / 2.0),
        ],
    )
    .expect("two entries");
    if rng.random_bool(0.5) {
        crate::linalg::paulis::x().matmul(&d)
    } else {
        d
    }
}

fn random_angle(rng: &mut impl Rng) -> f64 {
    // coarse-grained so the canonical text stays short
    let a: f64 = rng.random_range(-PI..PI);
    (a * 1e6).round() / 1e6
}

fn random_block_pair(rng: &mut impl Rng) -> (OneQubitGate, OneQubitGate) {
    let rot = |axis: u8, t: f64| match axis {
        0 => OneQubitGate::Rx(t),
        1 => OneQubitGate::Ry(t),
        _ => OneQubitGate::Rz(t),
    };
    match rng.random_range(0..4) {
        0 | 1 => {
            let (ax, bx) = (rng.random_range(0..3u8), rng.random_range(0..3u8));
            (rot(ax, random_angle(rng)), rot(bx, random_angle(rng)))
        }
        2 => {
            let phi = random_angle(rng);
            (OneQubitGate::P(phi), OneQubitGate::P(phi))
        }
        _ => (OneQubitGate::H, OneQubitGate::H),
    }
}

/// Random nearest-neighbour matchgate circuit of the given depth.
pub fn random_matchgate_circuit(n_qubits: usize, depth: usize, rng: &mut impl Rng) -> CircuitIr {
    assert!(n_qubits >= 2, "matchgate circuits need at least two qubits");
    let gates = (0..depth)
        .map(|_| {
            let pos = rng.random_range(1..n_qubits);
            let op = match rng.random_range(0..6) {
                0 => GateOp::Named(TwoQubitGate::Fswap),
                1 => GateOp::Named(TwoQubitGate::Ghh),
                _ => {
                    let (a, b) = random_block_pair(rng);
                    GateOp::G(a, b)
                }
            };
            GateApp { op, pos }
        })
        .collect();
    CircuitIr::new(n_qubits, false, gates).expect("generated gates are valid matchgates")
}

/// Random real unit vector of length `len`.
pub fn random_unit_vector(len: usize, rng: &mut impl Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Random product of Majorana operators (a "word"), with random sign.
pub fn random_majorana_word(n_qubits: usize, rng: &mut impl Rng) -> Operator {
    let mask = rng.random_range(0..(1u64 << (2 * n_qubits)));
    let m = crate::majorana::majorana_monomial(n_qubits, mask).expect("mask in range");
    if rng.random_bool(0.5) {
        m.scale(-ONE)
    } else {
        m
    }
}

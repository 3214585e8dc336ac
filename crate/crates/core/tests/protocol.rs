use mgh_core::circuits::gates::{build_cnz, fswap, ghh};
use mgh_core::linalg::{Operator, StateVector, Tolerances};
use mgh_core::majorana::{parity_of, Parity};
use mgh_core::random::{random_fermionic_unitary, random_state};
use mgh_core::teleport::{correction_k, magic_state, simulate_protocol, verify_protocol, Outcome};
use mgh_core::{build_bn, circuit_to_operator, CircuitIr};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn bit(index: usize, wire: usize, n: usize) -> usize {
    index >> (n - wire) & 1
}

fn sign(e: usize) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[test]
fn fswap_action_on_basis_states() {
    let f = fswap();
    for x in 0..2 {
        for y in 0..2 {
            let out = f.apply(&StateVector::basis(2, 2 * x + y).unwrap());
            let want = StateVector::basis(2, 2 * y + x).unwrap().scale(Complex64::new(sign(x * y), 0.0));
            assert!(out.distance(&want) < 1e-15, "x={x} y={y}");
        }
    }
}

#[test]
fn ghh_action_on_basis_states() {
    let g = ghh();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for x in 0..2 {
        for y in 0..2 {
            let out = g.apply(&StateVector::basis(2, 2 * x + y).unwrap());
            let mut want = vec![Complex64::new(0.0, 0.0); 4];
            for a in 0..2 {
                want[2 * a + (x + y + a) % 2] += h * sign(a * x);
            }
            let want = StateVector::from_amplitudes(want).unwrap();
            assert!(out.distance(&want) < 1e-15, "x={x} y={y}");
        }
    }
}

#[test]
fn bell_circuit_action_two_qubits() {
    let b = circuit_to_operator(&build_bn(2).unwrap());
    for z in 0..16 {
        let zb = |j| bit(z, j, 4);
        let out = b.apply(&StateVector::basis(4, z).unwrap());
        let mut want = vec![Complex64::new(0.0, 0.0); 16];
        for a in 0..2 {
            for c in 0..2 {
                let e = a * zb(1) + c * zb(3) + c * zb(1) + c * zb(2) + a * c;
                let idx = (a << 3) | (c << 2) | ((zb(1) + zb(2) + a) % 2) << 1 | (zb(3) + zb(4) + c) % 2;
                want[idx] += 0.5 * sign(e);
            }
        }
        let want = StateVector::from_amplitudes(want).unwrap();
        assert!(out.distance(&want) < 1e-14, "z={z:04b}");
    }
}

/// The fermionic-swap layers alone list odd wires first, with the sign of
/// reordering occupied modes.
#[test]
fn swap_network_reorders_wires_fermionically() {
    for n in 2..=4 {
        let bn = build_bn(n).unwrap();
        let (_, swaps) = bn.split_at(n);
        let s = circuit_to_operator(&CircuitIr::new(2 * n, false, swaps.gates().to_vec()).unwrap());
        let m = 2 * n;
        let order: Vec<usize> = (1..=m).step_by(2).chain((2..=m).step_by(2)).collect();
        for x in 0..1usize << m {
            let mut target = 0;
            for &w in &order {
                target = (target << 1) | bit(x, w, m);
            }
            let mut inversions = 0;
            for (i, &wi) in order.iter().enumerate() {
                for &wj in &order[i + 1..] {
                    if wi > wj {
                        inversions += bit(x, wi, m) * bit(x, wj, m);
                    }
                }
            }
            let out = s.apply(&StateVector::basis(m, x).unwrap());
            let want = StateVector::basis(m, target).unwrap().scale(Complex64::new(sign(inversions), 0.0));
            assert!(out.distance(&want) < 1e-14, "n={n} x={x:b}");
        }
    }
}

#[test]
fn raw_branch_is_gate_times_correction_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..=3 {
        let u = random_fermionic_unitary(n, n == 3, &mut rng);
        let psi = random_state(n, &mut rng);
        let t = simulate_protocol(&u, &psi, &tol()).unwrap();
        for b in &t.branches {
            let want = u.apply(&correction_k(&b.z, n).unwrap().apply(&psi));
            assert!(b.raw_state.distance(&want) < 1e-10, "n={n} z={}", b.z);
        }
    }
}

#[test]
fn four_qubit_controlled_z_teleports() {
    let u = build_cnz(4).unwrap();
    let psi = random_state(4, &mut ChaCha8Rng::seed_from_u64(3));
    let t = simulate_protocol(&u, &psi, &tol()).unwrap();
    assert_eq!(t.branches.len(), 256);
    assert!(t.max_probability_deviation() < 1e-13);
    assert!(t.max_residual() < 1e-9);
    assert_eq!(t.branches[255].z, "11111111".parse::<Outcome>().unwrap());
}

#[test]
fn odd_gates_teleport_and_flip_magic_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let u = random_fermionic_unitary(2, true, &mut rng);
    assert_eq!(parity_of(&u, &tol()), Parity::Odd);
    let m = magic_state(&u, "odd", &tol()).unwrap();
    assert_eq!(m.parity, Parity::Odd);
    assert!(m.parity_residual() < 1e-12);
    let r = verify_protocol(&u, 4, 9, 2, &tol()).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn identity_teleportation_returns_input() {
    let psi = random_state(3, &mut ChaCha8Rng::seed_from_u64(0));
    let t = simulate_protocol(&Operator::identity(3), &psi, &tol()).unwrap();
    for b in &t.branches {
        assert!(b.corrected.distance(&psi) < 1e-12);
    }
}

#[test]
fn transcripts_are_deterministic() {
    let u = build_cnz(2).unwrap();
    let a = verify_protocol(&u, 3, 42, 3, &tol()).unwrap();
    let b = verify_protocol(&u, 3, 42, 3, &tol()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

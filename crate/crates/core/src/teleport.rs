//! Gate teleportation through a magic state, simulated over every outcome.
//!
//! The joint register holds the input on wires `1..n` and the magic state on
//! wires `n+1..3n`. The inverse Bell circuit acts on wires `1..2n`, which are
//! then measured; outcome bits are listed wire by wire, so `z_1` is the most
//! significant bit of the outcome index.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{build_bn, circuit_to_operator};
use crate::error::{Error, Result};
use crate::hierarchy::{is_gaussian_state_lambda, min_level};
use crate::linalg::{equal_up_to_phase, Operator, StateVector, Tolerances, MAX_QUBITS, ONE};
use crate::majorana::{majorana_right_mul, parity_of, Parity};
use crate::random::random_state;

/// Measurement outcome on wires `1..2n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<bool>);

impl Outcome {
    pub fn new(bits: Vec<bool>) -> Self {
        Outcome(bits)
    }

    /// Outcome with `len` bits read from `index`, most significant first.
    pub fn from_index(index: usize, len: usize) -> Self {
        Outcome((0..len).rev().map(|b| index >> b & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    /// `z_j`, 1-based.
    fn z(&self, j: usize) -> usize {
        self.0[j - 1] as usize
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("bad outcome string `{s}`"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Outcome)
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(1 (x) U) B^(n) |0^{2n}>`.
#[derive(Debug, Clone, Serialize)]
pub struct MagicState {
    pub n: usize,
    pub psi: StateVector,
    pub gate_label: String,
    pub parity: Parity,
    /// `None` when the Lambda test would need more than the dense limit.
    pub is_gaussian: Option<bool>,
}

impl MagicState {
    /// `|| Z^{(x)2n} psi - s psi ||` with `s` the parity sign of the gate.
    pub fn parity_residual(&self) -> f64 {
        let s = self.parity.sign().unwrap_or(0.0);
        self.psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let z = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                (a * (z - s)).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

fn check_gate(u: &Operator, tol: &Tolerances) -> Result<Parity> {
    if u.n_qubits() < 2 {
        return Err(Error::InvalidArgument(format!(
            "teleportation needs a gate on at least 2 qubits, got {}",
            u.n_qubits()
        )));
    }
    if 3 * u.n_qubits() > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: 3 * u.n_qubits(),
            max: MAX_QUBITS,
        });
    }
    let residual = u.unitarity_residual();
    if residual > tol.unitary {
        return Err(Error::NonUnitary { residual });
    }
    match parity_of(u, tol) {
        Parity::Mixed => Err(Error::NonFermionic),
        p => Ok(p),
    }
}

pub fn magic_state(u: &Operator, label: &str, tol: &Tolerances) -> Result<MagicState> {
    let parity = check_gate(u, tol)?;
    let n = u.n_qubits();
    let b = circuit_to_operator(&build_bn(n)?);
    let mut psi = b.apply(&StateVector::basis(2 * n, 0)?);
    psi.apply_local(u, n + 1)?;
    let is_gaussian = if 4 * n <= MAX_QUBITS {
        Some(is_gaussian_state_lambda(&psi, tol)?)
    } else {
        None
    };
    Ok(MagicState {
        n,
        psi,
        gate_label: label.to_string(),
        parity,
        is_gaussian,
    })
}

/// The operator `K_z` with raw branch state `U K_z psi`: a phase times the
/// Majorana word `c_1^{z_2} c_2^{z_1} ... c_{2n-1}^{z_{2n}} c_{2n}^{z_{2n-1}}`.
pub fn correction_k(z: &Outcome, n: usize) -> Result<Operator> {
    if z.bits().len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: z.bits().len(),
        });
    }
    let quarter_turns: usize = (1..=n).map(|p| z.z(2 * p - 1)).sum();
    let mut sign_exp = 0;
    for p in 1..n {
        let pair = z.z(2 * p - 1) + z.z(2 * p);
        let rest: usize = (2 * p + 1..=2 * n).map(|j| z.z(j)).sum();
        sign_exp += pair * rest;
    }
    let mut phase = [ONE, -Complex64::i(), -ONE, Complex64::i()][quarter_turns % 4];
    if sign_exp % 2 == 1 {
        phase = -phase;
    }
    let mut k = Operator::scalar(n, phase);
    for p in 1..=n {
        if z.z(2 * p) == 1 {
            k = majorana_right_mul(&k, 2 * p - 1)?;
        }
        if z.z(2 * p - 1) == 1 {
            k = majorana_right_mul(&k, 2 * p)?;
        }
    }
    Ok(k)
}

/// `R_z = U K_z^dagger U^dagger`, which maps the raw branch state to `U psi`.
pub fn correction_r(z: &Outcome, u: &Operator) -> Result<Operator> {
    let k = correction_k(z, u.n_qubits())?;
    Ok(u.conjugate(&k.adjoint()))
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    pub z: Outcome,
    pub probability: f64,
    /// Branch state on wires `2n+1..3n`, normalised by a positive factor.
    pub raw_state: StateVector,
    pub correction: Operator,
    pub corrected: StateVector,
    /// `|| corrected - U psi ||`, phase included.
    pub residual_vs_target: f64,
    /// `e^{i theta}` with `corrected ~ e^{i theta} U psi`.
    pub phase: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportTranscript {
    pub n: usize,
    pub input: StateVector,
    pub gate: Operator,
    pub branches: Vec<Branch>,
}

impl TeleportTranscript {
    pub fn max_residual(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.residual_vs_target)
            .fold(0.0, f64::max)
    }

    /// Largest `|p_z - 4^{-n}|`.
    pub fn max_probability_deviation(&self) -> f64 {
        let uniform = 0.25f64.powi(self.n as i32);
        self.branches
            .iter()
            .map(|b| (b.probability - uniform).abs())
            .fold(0.0, f64::max)
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// JSON; without `full`, matrices and state vectors are left out.
    pub fn to_json(&self, full: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("transcript serializes");
        if !full {
            let obj = v.as_object_mut().expect("object");
            obj.remove("input");
            obj.remove("gate");
            for b in obj["branches"].as_array_mut().expect("array") {
                let b = b.as_object_mut().expect("object");
                for key in ["raw_state", "correction", "corrected"] {
                    b.remove(key);
                }
            }
        }
        v
    }
}

/// Runs the protocol for one input and records every outcome.
pub fn simulate_protocol(
    u: &Operator,
    psi_in: &StateVector,
    tol: &Tolerances,
) -> Result<TeleportTranscript> {
    let n = u.n_qubits();
    if psi_in.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi_in.n_qubits(),
        });
    }
    if (psi_in.norm() - 1.0).abs() > tol.norm.max(1e-10) {
        return Err(Error::NotNormalized {
            norm: psi_in.norm(),
        });
    }
    let magic = magic_state(u, "", tol)?;
    let mut joint = psi_in.tensor(&magic.psi)?;
    for g in build_bn(n)?.gates().iter().rev() {
        joint.apply_local(&g.operator().adjoint(), g.pos)?;
    }
    let target = u.apply(psi_in);
    let dim = 1usize << n;
    let mut branches = Vec::with_capacity(dim * dim);
    for index in 0..dim * dim {
        let z = Outcome::from_index(index, 2 * n);
        let slice = joint.amplitudes()[index * dim..(index + 1) * dim].to_vec();
        let raw = StateVector::from_amplitudes(slice)?;
        let norm = raw.norm();
        if norm < tol.norm {
            return Err(Error::VanishingBranch {
                outcome: z.to_string(),
                norm,
            });
        }
        let raw_state = raw.scale(Complex64::new(1.0 / norm, 0.0));
        let correction = correction_r(&z, u)?;
        let corrected = correction.apply(&raw_state);
        let residual_vs_target = corrected.distance(&target);
        let phase = equal_up_to_phase(&corrected, &target, tol)?
            .phase
            .unwrap_or(Complex64::new(0.0, 0.0));
        branches.push(Branch {
            z,
            probability: norm * norm,
            raw_state,
            correction,
            corrected,
            residual_vs_target,
            phase,
        });
    }
    Ok(TeleportTranscript {
        n,
        input: psi_in.clone(),
        gate: u.clone(),
        branches,
    })
}

/// Number of distinct corrections found at a given level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCount {
    /// `None` when the bounded search did not settle the level.
    pub level: Option<u32>,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    pub n: usize,
    pub trials: usize,
    pub branches: usize,
    pub max_residual: f64,
    pub max_probability_deviation: f64,
    /// Corrections counted once up to a global phase.
    pub distinct_corrections: usize,
    pub k_max: u32,
    pub correction_levels: Vec<LevelCount>,
    pub passed: bool,
}

/// Runs the protocol on `trials` seeded random inputs and summarises it.
pub fn verify_protocol(
    u: &Operator,
    trials: usize,
    seed: u64,
    k_max: u32,
    tol: &Tolerances,
) -> Result<ProtocolReport> {
    let n = u.n_qubits();
    check_gate(u, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    let mut max_dev: f64 = 0.0;
    let mut branches = 0;
    let mut corrections: Vec<Operator> = Vec::new();
    for trial in 0..trials.max(1) {
        let psi = random_state(n, &mut rng);
        let t = simulate_protocol(u, &psi, tol)?;
        max_residual = max_residual.max(t.max_residual());
        max_dev = max_dev.max(t.max_probability_deviation());
        branches = t.branches.len();
        if trial == 0 {
            for b in t.branches {
                let seen = corrections.iter().any(|c| {
                    equal_up_to_phase(c, &b.correction, tol)
                        .map(|m| m.equal)
                        .unwrap_or(false)
                });
                if !seen {
                    corrections.push(b.correction);
                }
            }
        }
    }
    let mut levels: Vec<Option<u32>> = Vec::with_capacity(corrections.len());
    for c in &corrections {
        levels.push(match min_level(c, k_max, tol) {
            Ok(level) => level,
            Err(Error::CostGuard { .. }) => None,
            Err(e) => return Err(e),
        });
    }
    levels.sort();
    let mut correction_levels: Vec<LevelCount> = Vec::new();
    for level in levels {
        match correction_levels.last_mut() {
            Some(last) if last.level == level => last.count += 1,
            _ => correction_levels.push(LevelCount { level, count: 1 }),
        }
    }
    Ok(ProtocolReport {
        n,
        trials: trials.max(1),
        branches,
        max_residual,
        max_probability_deviation: max_dev,
        distinct_corrections: corrections.len(),
        k_max,
        correction_levels,
        passed: max_residual < tol.residual && max_dev < tol.norm,
    })
}

//! Membership in the levels of the matchgate hierarchy, Gaussianity tests and
//! the closed-form two-qubit classification.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuits::gates::layout_blocks;
use crate::error::{Error, Result};
use crate::linalg::{kron, Operator, StateVector, Tolerances};
use crate::majorana::{
    apply_majorana, jw_majoranas, majorana_left_mul, majorana_right_mul, monomial_coefficient,
    parity_of, Parity,
};

/// Angular tolerance when snapping a determinant ratio to a root of unity.
pub const TOL_ANGLE: f64 = 1e-8;

/// Largest `m` tried when snapping a phase to a `2^m`-th root of unity. The
/// root spacing at this order is still several hundred times `TOL_ANGLE`, so
/// a generic phase is not mistaken for a root.
pub const MAX_ROOT_EXPONENT: u32 = 20;

/// Default search bound for `min_level`.
pub const DEFAULT_K_MAX: u32 = 8;

/// Largest number of leaf checks `(2n)^(k-1)` a membership test may do.
pub const COST_LIMIT: u64 = 10_000_000;

/// Coefficients of a first-level gate `sum a_mu c_mu`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstLevelCoeffs {
    pub a: Vec<f64>,
}

impl FirstLevelCoeffs {
    pub fn norm(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `sum a_mu c_mu` as a dense operator.
    pub fn to_operator(&self) -> Result<Operator> {
        if self.a.is_empty() || self.a.len() % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector of length {} is not 2n",
                self.a.len()
            )));
        }
        let n = self.a.len() / 2;
        let mut out = Operator::zeros(n);
        for (c, &a) in jw_majoranas(n).iter().zip(&self.a) {
            out = &out + &c.scale(Complex64::new(a, 0.0));
        }
        Ok(out)
    }
}

/// Residual of the best first-level fit: `(coefficients, imag part, residual)`.
fn first_level_fit(u: &Operator) -> (Vec<Complex64>, f64) {
    let n = u.n_qubits();
    let coeffs: Vec<Complex64> = (0..2 * n)
        .map(|b| monomial_coefficient(u, 1u64 << b).expect("mode in range"))
        .collect();
    let mut fit = u.clone();
    for (mu, a) in coeffs.iter().enumerate() {
        let c = majorana_left_mul(mu + 1, &Operator::identity(n)).expect("mode in range");
        fit = &fit - &c.scale(*a);
    }
    (coeffs, fit.max_abs())
}

/// The first-level coefficients of `u`, if `u` is a real unit-norm
/// combination of Majoranas. Also returns the worst residual seen.
fn first_level_with_residual(u: &Operator, tol: &Tolerances) -> (Option<FirstLevelCoeffs>, f64) {
    let (coeffs, residual) = first_level_fit(u);
    let imag = coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let a: Vec<f64> = coeffs.iter().map(|c| c.re).collect();
    let coeffs = FirstLevelCoeffs { a };
    let norm_dev = (coeffs.norm() - 1.0).abs();
    let worst = residual.max(imag).max(norm_dev);
    // the norm deviation is bounded by the fit residual for unitary input, so
    // it is checked at the residual tolerance as well
    let ok = imag < tol.residual && residual < tol.residual && norm_dev < tol.residual;
    (ok.then_some(coeffs), worst)
}

pub fn first_level_coeffs(u: &Operator, tol: &Tolerances) -> Option<FirstLevelCoeffs> {
    first_level_with_residual(u, tol).0
}

/// `V_mu = U c_mu U^dagger` for every mode.
pub fn conjugate_majoranas(u: &Operator) -> Vec<Operator> {
    let ud = u.adjoint();
    (1..=2 * u.n_qubits())
        .map(|mu| majorana_right_mul(u, mu).expect("mode in range").matmul(&ud))
        .collect()
}

/// Least-squares rotation and how well it explains the conjugated Majoranas.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationFit {
    pub rotation: DMatrix<f64>,
    /// `max_mu || U c_mu U^dagger - sum_nu R[mu][nu] c_nu ||_max`.
    pub residual: f64,
    /// `|| R R^T - 1 ||_max`.
    pub orthogonality_residual: f64,
}

pub fn fit_rotation(u: &Operator) -> RotationFit {
    let n = u.n_qubits();
    let m = 2 * n;
    let identity = Operator::identity(n);
    let cs: Vec<Operator> = (1..=m)
        .map(|mu| majorana_left_mul(mu, &identity).expect("mode in range"))
        .collect();
    let mut rotation = DMatrix::zeros(m, m);
    let mut residual: f64 = 0.0;
    for (mu, v) in conjugate_majoranas(u).iter().enumerate() {
        let mut rest = v.clone();
        for nu in 0..m {
            let coeff = monomial_coefficient(v, 1u64 << nu).expect("mode in range");
            rotation[(mu, nu)] = coeff.re;
            rest = &rest - &cs[nu].scale(Complex64::new(coeff.re, 0.0));
        }
        residual = residual.max(rest.max_abs());
    }
    let orthogonality_residual = (&rotation * rotation.transpose() - DMatrix::identity(m, m))
        .abs()
        .max();
    RotationFit {
        rotation,
        residual,
        orthogonality_residual,
    }
}

/// `R` with `U c_mu U^dagger = sum_nu R[mu][nu] c_nu`, if `U` is Gaussian.
pub fn extract_rotation(u: &Operator, tol: &Tolerances) -> Option<DMatrix<f64>> {
    let fit = fit_rotation(u);
    (fit.residual < tol.residual && fit.orthogonality_residual < tol.residual).then_some(fit.rotation)
}

/// `Lambda_n = sum_k c_k (x) c_k` on `2n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaOperator {
    n: usize,
    matrix: Operator,
}

impl LambdaOperator {
    pub fn new(n: usize) -> Result<Self> {
        let mut matrix = Operator::zeros(2 * n);
        for c in jw_majoranas(n) {
            matrix = &matrix + &kron(&c, &c)?;
        }
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    /// `|| [Lambda, U (x) U] ||_max`.
    pub fn commutator_residual(&self, u: &Operator) -> Result<f64> {
        let uu = kron(u, u)?;
        Ok((&self.matrix.matmul(&uu) - &uu.matmul(&self.matrix)).max_abs())
    }
}

/// `|| sum_k c_k U (x) c_k U - U c_k (x) U c_k ||_max`, the Lambda commutator
/// assembled term by term.
pub fn lambda_residual(u: &Operator) -> Result<f64> {
    let n = u.n_qubits();
    let mut acc = Operator::zeros(2 * n);
    for mu in 1..=2 * n {
        let left = majorana_left_mul(mu, u)?;
        let right = majorana_right_mul(u, mu)?;
        acc = &acc + &kron(&left, &left)?;
        acc = &acc - &kron(&right, &right)?;
    }
    Ok(acc.max_abs())
}

/// Gaussianity of a fermionic unitary via `[Lambda, U (x) U] = 0`.
pub fn is_gaussian_lambda(u: &Operator, tol: &Tolerances) -> Result<bool> {
    if parity_of(u, tol) == Parity::Mixed {
        return Err(Error::NonFermionic);
    }
    Ok(lambda_residual(u)? < tol.residual)
}

/// `|| Lambda (psi (x) psi) ||`.
pub fn lambda_state_residual(psi: &StateVector) -> Result<f64> {
    let n = psi.n_qubits();
    let mut acc = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
    for mu in 1..=2 * n {
        let phi = apply_majorana(mu, psi)?;
        let t = phi.tensor(&phi)?;
        for (a, b) in acc.iter_mut().zip(t.amplitudes()) {
            *a += b;
        }
    }
    Ok(acc.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt())
}

/// Gaussianity of a state via `Lambda (psi (x) psi) = 0`.
pub fn is_gaussian_state_lambda(psi: &StateVector, tol: &Tolerances) -> Result<bool> {
    Ok(lambda_state_residual(psi)? < tol.residual)
}

/// Outcome of a membership test, with the largest residual consulted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub level: u32,
    pub member: bool,
    pub worst_residual: f64,
}

fn cost(n: usize, k: u32) -> u64 {
    (2 * n as u64).saturating_pow(k.saturating_sub(1))
}

fn member_rec(u: &Operator, k: u32, tol: &Tolerances, worst: &mut f64) -> bool {
    if k == 1 {
        let (coeffs, residual) = first_level_with_residual(u, tol);
        *worst = worst.max(residual);
        return coeffs.is_some();
    }
    let ud = u.adjoint();
    for mu in 1..=2 * u.n_qubits() {
        let v = majorana_right_mul(u, mu).expect("mode in range").matmul(&ud);
        if parity_of(&v, tol) != Parity::Odd {
            return false;
        }
        if !member_rec(&v, k - 1, tol, worst) {
            return false;
        }
    }
    true
}

/// Recursive membership test with diagnostics.
///
/// Level 1 needs `U` to be a real unit-norm combination of Majoranas; level
/// `k >= 2` needs every `U c_mu U^dagger` to be odd and in level `k - 1`.
/// This costs `(2n)^(k-1)` leaf checks.
pub fn membership(u: &Operator, k: u32, tol: &Tolerances) -> Result<Membership> {
    if k == 0 {
        return Err(Error::InvalidArgument("hierarchy levels start at 1".into()));
    }
    let products = cost(u.n_qubits(), k);
    if products > COST_LIMIT {
        return Err(Error::CostGuard {
            level: k,
            products,
            limit: COST_LIMIT,
        });
    }
    if k >= 2 {
        let residual = u.unitarity_residual();
        if residual >= tol.unitary {
            return Err(Error::NonUnitary { residual });
        }
    }
    let mut worst = 0.0;
    let member = member_rec(u, k, tol, &mut worst);
    Ok(Membership {
        level: k,
        member,
        worst_residual: worst,
    })
}

pub fn level_membership(u: &Operator, k: u32, tol: &Tolerances) -> Result<bool> {
    membership(u, k, tol).map(|m| m.member)
}

/// Smallest `k <= k_max` with `U` in level `k`.
pub fn min_level(u: &Operator, k_max: u32, tol: &Tolerances) -> Result<Option<u32>> {
    for k in 1..=k_max {
        if level_membership(u, k, tol)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Blocks of a two-qubit fermionic gate in the `G` or `J` layout.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitBlocks {
    pub parity: Parity,
    pub a: Operator,
    pub b: Operator,
}

impl TwoQubitBlocks {
    pub fn det_a(&self) -> Complex64 {
        self.a.det2()
    }

    pub fn det_b(&self) -> Complex64 {
        self.b.det2()
    }

    /// `|A| / |B|`.
    pub fn ratio(&self) -> Complex64 {
        self.det_a() / self.det_b()
    }
}

pub fn two_qubit_decompose(u: &Operator, tol: &Tolerances) -> Result<TwoQubitBlocks> {
    if u.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        });
    }
    let parity = parity_of(u, tol);
    if parity == Parity::Mixed {
        return Err(Error::NonFermionic);
    }
    let (a, b) = layout_blocks(u, parity == Parity::Odd);
    Ok(TwoQubitBlocks { parity, a, b })
}

/// Phase of `z` in `[0, 2 pi)`.
pub fn phase_of(z: Complex64) -> f64 {
    let t = z.arg();
    if t < 0.0 {
        (t + 2.0 * PI) % (2.0 * PI)
    } else {
        t
    }
}

/// Smallest `m` with `phi` within `TOL_ANGLE` of a `2^m`-th root of unity.
fn root_order(phi: f64) -> Option<u32> {
    (0..=MAX_ROOT_EXPONENT).find(|&m| {
        let step = 2.0 * PI / (1u64 << m) as f64;
        let j = (phi / step).round();
        (phi - j * step).abs() < TOL_ANGLE
    })
}

/// Closed-form level of a two-qubit fermionic gate from its block determinants.
pub fn two_qubit_min_level(u: &Operator, tol: &Tolerances) -> Result<u32> {
    let blocks = two_qubit_decompose(u, tol)?;
    if blocks.parity == Parity::Odd
        && blocks.b.max_diff(&blocks.a.adjoint()) < tol.residual
        && (blocks.det_a() + 1.0).norm() < tol.residual
    {
        return Ok(1);
    }
    let phi = phase_of(blocks.ratio());
    root_order(phi)
        .map(|m| m + 2)
        .ok_or(Error::GenericPhase { phi })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivClass {
    /// `arg(|A| / |B|)` in `[0, 2 pi)`; the gate is matchgate-equivalent to `CPHASE(phi)`.
    pub phi: f64,
    /// `min(phi, 2 pi - phi)`, the class under generalised matchgates.
    pub generalised_phi: f64,
    pub representative: Operator,
}

pub fn equiv_class(u: &Operator, tol: &Tolerances) -> Result<EquivClass> {
    let blocks = two_qubit_decompose(u, tol)?;
    let phi = phase_of(blocks.ratio());
    let phi = if 2.0 * PI - phi < TOL_ANGLE { 0.0 } else { phi };
    Ok(EquivClass {
        phi,
        generalised_phi: phi.min(2.0 * PI - phi),
        representative: crate::circuits::gates::cphase(phi),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitSummary {
    #[serde(rename = "detA")]
    pub det_a: Complex64,
    #[serde(rename = "detB")]
    pub det_b: Complex64,
    pub phi: f64,
    pub generalised_phi: f64,
    /// `None` when the ratio is not a root of unity of order `2^MAX_ROOT_EXPONENT` or less.
    pub level_closed_form: Option<u32>,
    pub class_representative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyReport {
    pub n_qubits: usize,
    pub parity: Parity,
    pub is_gaussian: bool,
    pub rotation: Option<Vec<Vec<f64>>>,
    pub rotation_det: Option<f64>,
    /// Absent when the gate is above `k_max` or the search was cut short.
    pub min_level: Option<u32>,
    pub k_max: u32,
    /// Largest level actually searched; below `k_max` only when the cost guard stopped the search.
    pub searched_to: u32,
    pub two_qubit: Option<TwoQubitSummary>,
}

pub fn classify(u: &Operator, k_max: u32, tol: &Tolerances) -> Result<HierarchyReport> {
    let residual = u.unitarity_residual();
    if residual >= tol.unitary {
        return Err(Error::NonUnitary { residual });
    }
    let n = u.n_qubits();
    let parity = parity_of(u, tol);
    let rotation = if parity.is_fermionic() {
        extract_rotation(u, tol)
    } else {
        None
    };
    let rotation_det = rotation
        .as_ref()
        .map(|r| if r.determinant() > 0.0 { 1.0 } else { -1.0 });
    let mut found = None;
    let mut searched_to = 0;
    for k in 1..=k_max {
        match level_membership(u, k, tol) {
            Ok(true) => {
                found = Some(k);
                searched_to = k;
                break;
            }
            Ok(false) => searched_to = k,
            Err(Error::CostGuard { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let two_qubit = if n == 2 && parity.is_fermionic() {
        let blocks = two_qubit_decompose(u, tol)?;
        let class = equiv_class(u, tol)?;
        Some(TwoQubitSummary {
            det_a: blocks.det_a(),
            det_b: blocks.det_b(),
            phi: class.phi,
            generalised_phi: class.generalised_phi,
            level_closed_form: two_qubit_min_level(u, tol).ok(),
            class_representative: format!("CPHASE({})", class.phi),
        })
    } else {
        None
    };
    Ok(HierarchyReport {
        n_qubits: n,
        parity,
        is_gaussian: rotation.is_some(),
        rotation: rotation.map(|r| r.row_iter().map(|row| row.iter().copied().collect()).collect()),
        rotation_det,
        min_level: found,
        k_max,
        searched_to,
        two_qubit,
    })
}

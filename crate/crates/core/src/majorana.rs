//! Jordan-Wigner Majorana operators and the Majorana monomial basis.
//!
//! Monomial masks are little-endian in the mode index: bit `mu - 1` set means
//! `c_mu` is a factor, and factors are always multiplied in ascending order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{paulis, Operator, StateVector, Tolerances, ONE, ZERO};

/// `i^phase X^x Z^z` on `n` qubits, with qubit `j` on bit `n - j`.
///
/// Every Majorana monomial is one of these, which makes traces against a
/// monomial an `O(2^n)` sum instead of a dense product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PauliWord {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliWord {
    fn identity(n: usize) -> Self {
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    fn majorana(n: usize, mu: usize) -> Self {
        let k = (mu + 1) / 2;
        let qubit = 1u64 << (n - k);
        let string: u64 = (1..k).map(|j| 1u64 << (n - j)).sum();
        if mu % 2 == 1 {
            Self {
                n,
                x: qubit,
                z: string,
                phase: 0,
            }
        } else {
            // Y = i X Z
            Self {
                n,
                x: qubit,
                z: string | qubit,
                phase: 1,
            }
        }
    }

    fn mul(self, rhs: Self) -> Self {
        let swap = (self.z & rhs.x).count_ones() as u8 % 2;
        Self {
            n: self.n,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: (self.phase + rhs.phase + 2 * swap) % 4,
        }
    }

    fn monomial(n: usize, mask: u64) -> Self {
        (1..=2 * n)
            .filter(|mu| mask >> (mu - 1) & 1 == 1)
            .fold(Self::identity(n), |acc, mu| acc.mul(Self::majorana(n, mu)))
    }

    fn phase(&self) -> Complex64 {
        [ONE, Complex64::new(0.0, 1.0), -ONE, Complex64::new(0.0, -1.0)][self.phase as usize]
    }

    /// Entry `<r ^ x| W |r>`, the only nonzero entry in column `r`.
    #[inline]
    fn column_entry(&self, r: usize) -> Complex64 {
        let sign = if (r as u64 & self.z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        self.phase() * sign
    }

    fn to_operator(self) -> Operator {
        let mut op = Operator::zeros(self.n);
        for r in 0..op.dim() {
            op.set(r ^ self.x as usize, r, self.column_entry(r));
        }
        op
    }

    /// `tr(W^dagger M)`.
    fn overlap(&self, m: &Operator) -> Complex64 {
        (0..m.dim())
            .map(|r| self.column_entry(r).conj() * m.get(r ^ self.x as usize, r))
            .sum()
    }

    fn apply(&self, psi: &StateVector) -> StateVector {
        let src = psi.amplitudes();
        let mut out = vec![ZERO; src.len()];
        for (r, &a) in src.iter().enumerate() {
            out[r ^ self.x as usize] = self.column_entry(r) * a;
        }
        StateVector::from_amplitudes(out).expect("same dimension")
    }
}

fn check_mode(n: usize, mu: usize) -> Result<()> {
    if mu == 0 || mu > 2 * n {
        Err(Error::MajoranaIndex { mu, max: 2 * n })
    } else {
        Ok(())
    }
}

/// Jordan-Wigner Majorana `c_mu` on `n` modes (`1 <= mu <= 2n`):
/// `c_{2k-1} = Z..Z X_k`, `c_{2k} = Z..Z Y_k`.
pub fn jw_majorana(n: usize, mu: usize) -> Result<Operator> {
    check_mode(n, mu)?;
    Ok(PauliWord::majorana(n, mu).to_operator())
}

pub fn jw_majoranas(n: usize) -> Vec<Operator> {
    (1..=2 * n)
        .map(|mu| PauliWord::majorana(n, mu).to_operator())
        .collect()
}

/// `c_mu |psi>` without building the dense operator.
pub fn apply_majorana(mu: usize, psi: &StateVector) -> Result<StateVector> {
    check_mode(psi.n_qubits(), mu)?;
    Ok(PauliWord::majorana(psi.n_qubits(), mu).apply(psi))
}

/// `c_mu M` without a dense product.
pub fn majorana_left_mul(mu: usize, m: &Operator) -> Result<Operator> {
    check_mode(m.n_qubits(), mu)?;
    let w = PauliWord::majorana(m.n_qubits(), mu);
    let mut out = Operator::zeros(m.n_qubits());
    for r in 0..m.dim() {
        let src = r ^ w.x as usize;
        let e = w.column_entry(src);
        for col in 0..m.dim() {
            out.set(r, col, e * m.get(src, col));
        }
    }
    Ok(out)
}

/// `M c_mu` without a dense product.
pub fn majorana_right_mul(m: &Operator, mu: usize) -> Result<Operator> {
    check_mode(m.n_qubits(), mu)?;
    let w = PauliWord::majorana(m.n_qubits(), mu);
    let mut out = Operator::zeros(m.n_qubits());
    for col in 0..m.dim() {
        let e = w.column_entry(col);
        let src = col ^ w.x as usize;
        for r in 0..m.dim() {
            out.set(r, col, m.get(r, src) * e);
        }
    }
    Ok(out)
}

fn check_mask(n: usize, mask: u64) -> Result<()> {
    if 2 * n < 64 && mask >> (2 * n) != 0 {
        let mu = 64 - mask.leading_zeros() as usize;
        return Err(Error::MajoranaIndex { mu, max: 2 * n });
    }
    Ok(())
}

/// Ordered product of the Majoranas selected by `mask`; the empty mask is `1`.
pub fn majorana_monomial(n: usize, mask: u64) -> Result<Operator> {
    check_mask(n, mask)?;
    Ok(PauliWord::monomial(n, mask).to_operator())
}

/// Mode indices (1-based, ascending) in a mask.
pub fn mask_modes(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn modes_mask(modes: &[usize]) -> u64 {
    modes.iter().fold(0, |acc, &mu| acc | 1u64 << (mu - 1))
}

/// Sign in `m(a) m(b) = sign * m(a ^ b)`: the parity of the number of pairs
/// `(mu in a, nu in b)` with `mu > nu`.
pub fn monomial_product_sign(a: u64, b: u64) -> f64 {
    let swaps: u32 = (0..64)
        .filter(|nu| b >> nu & 1 == 1)
        .map(|nu| {
            let above = if nu == 63 { 0 } else { !((2u64 << nu) - 1) };
            (a & above).count_ones()
        })
        .sum();
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sparse expansion of an operator in the Majorana monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolyJson", try_from = "PolyJson")]
pub struct MajoranaPoly {
    n_modes: usize,
    terms: BTreeMap<u64, Complex64>,
}

impl MajoranaPoly {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n_modes: usize,
        terms: impl IntoIterator<Item = (u64, Complex64)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let mut poly = Self::new(n_modes);
        for (mask, coeff) in terms {
            check_mask(n_modes, mask)?;
            *poly.terms.entry(mask).or_insert(ZERO) += coeff;
        }
        poly.prune(tol.norm);
        Ok(poly)
    }

    fn prune(&mut self, threshold: f64) {
        self.terms.retain(|_, c| c.norm() >= threshold);
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &BTreeMap<u64, Complex64> {
        &self.terms
    }

    pub fn coefficient(&self, mask: u64) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or(ZERO)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied()
    }

    /// Largest monomial degree present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.count_ones()).max()
    }

    /// Algebra product, computed with the reordering sign law.
    pub fn product(&self, other: &MajoranaPoly, tol: &Tolerances) -> Result<MajoranaPoly> {
        if self.n_modes != other.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        let terms = self.terms.iter().flat_map(|(&a, &x)| {
            other
                .terms
                .iter()
                .map(move |(&b, &y)| (a ^ b, x * y * monomial_product_sign(a, b)))
        });
        Self::from_terms(self.n_modes, terms.collect::<Vec<_>>(), tol)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    mask: Vec<usize>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl From<MajoranaPoly> for PolyJson {
    fn from(p: MajoranaPoly) -> Self {
        PolyJson {
            n: p.n_modes,
            terms: p
                .terms
                .iter()
                .map(|(&m, c)| TermJson {
                    mask: mask_modes(m),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MajoranaPoly {
    type Error = Error;

    fn try_from(p: PolyJson) -> Result<Self> {
        let mut poly = MajoranaPoly::new(p.n);
        for t in p.terms {
            for &mu in &t.mask {
                check_mode(p.n, mu)?;
            }
            *poly.terms.entry(modes_mask(&t.mask)).or_insert(ZERO) += Complex64::new(t.re, t.im);
        }
        Ok(poly)
    }
}

/// Coefficients `alpha_m = tr(m^dagger U) / 2^n` over all `4^n` monomials.
pub fn expand(u: &Operator, tol: &Tolerances) -> MajoranaPoly {
    let n = u.n_qubits();
    let scale = 1.0 / u.dim() as f64;
    let terms = (0..1u64 << (2 * n))
        .map(|mask| (mask, PauliWord::monomial(n, mask).overlap(u) * scale));
    MajoranaPoly::from_terms(n, terms.collect::<Vec<_>>(), tol).expect("masks in range")
}

/// Coefficient of a single monomial, `tr(m^dagger U) / 2^n`.
pub fn monomial_coefficient(u: &Operator, mask: u64) -> Result<Complex64> {
    let n = u.n_qubits();
    check_mask(n, mask)?;
    Ok(PauliWord::monomial(n, mask).overlap(u) / u.dim() as f64)
}

pub fn poly_to_operator(p: &MajoranaPoly) -> Operator {
    let n = p.n_modes;
    let mut op = Operator::zeros(n);
    for (&mask, &coeff) in &p.terms {
        let w = PauliWord::monomial(n, mask);
        for r in 0..op.dim() {
            let row = r ^ w.x as usize;
            let v = op.get(row, r) + coeff * w.column_entry(r);
            op.set(row, r, v);
        }
    }
    op
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    #[serde(rename = "none")]
    Mixed,
}

impl Parity {
    pub fn is_fermionic(self) -> bool {
        self != Parity::Mixed
    }

    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> Option<f64> {
        match self {
            Parity::Even => Some(1.0),
            Parity::Odd => Some(-1.0),
            Parity::Mixed => None,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "none",
        })
    }
}

/// `M = M_E + M_O` with `M_E = (M + P M P) / 2`, `M_O = (M - P M P) / 2`
/// for the parity operator `P`.
pub fn parity_decompose(m: &Operator) -> (Operator, Operator) {
    let mut even = Operator::zeros(m.n_qubits());
    let mut odd = Operator::zeros(m.n_qubits());
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let v = m.get(r, c);
            if (r.count_ones() + c.count_ones()) % 2 == 0 {
                even.set(r, c, v);
            } else {
                odd.set(r, c, v);
            }
        }
    }
    (even, odd)
}

pub fn parity_of(m: &Operator, tol: &Tolerances) -> Parity {
    let (even, odd) = parity_decompose(m);
    if odd.max_abs() < tol.residual {
        Parity::Even
    } else if even.max_abs() < tol.residual {
        Parity::Odd
    } else {
        Parity::Mixed
    }
}

pub fn state_parity(psi: &StateVector, tol: &Tolerances) -> Parity {
    let (mut even, mut odd) = (0.0, 0.0);
    for (i, a) in psi.amplitudes().iter().enumerate() {
        if i.count_ones() % 2 == 0 {
            even += a.norm_sqr();
        } else {
            odd += a.norm_sqr();
        }
    }
    if odd.sqrt() < tol.residual {
        Parity::Even
    } else if even.sqrt() < tol.residual {
        Parity::Odd
    } else {
        Parity::Mixed
    }
}

/// `2n` operators claimed to satisfy the canonical anticommutation relations.
#[derive(Debug, Clone, PartialEq)]
pub struct CarSet {
    n_modes: usize,
    ops: Vec<Operator>,
}

impl CarSet {
    pub fn new(n_modes: usize, ops: Vec<Operator>) -> Result<Self> {
        if ops.len() != 2 * n_modes {
            return Err(Error::WrongCount {
                expected: 2 * n_modes,
                found: ops.len(),
            });
        }
        if let Some(bad) = ops.iter().find(|o| o.n_qubits() != n_modes) {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_modes,
                found: bad.dim(),
            });
        }
        Ok(Self { n_modes, ops })
    }

    pub fn jordan_wigner(n_modes: usize) -> Self {
        Self {
            n_modes,
            ops: jw_majoranas(n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    /// `c_mu`, 1-based.
    pub fn get(&self, mu: usize) -> &Operator {
        &self.ops[mu - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarReport {
    /// Largest `||{c_mu, c_nu} - 2 delta 1||_max`.
    pub max_residual: f64,
    /// 1-based pair attaining `max_residual`.
    pub worst_pair: (usize, usize),
    pub hermitian_residual: f64,
    pub passed: bool,
}

pub fn check_car(set: &CarSet, tol: &Tolerances) -> CarReport {
    let n = set.n_modes;
    let identity2 = Operator::scalar(n, Complex64::new(2.0, 0.0));
    let zero = Operator::zeros(n);
    let mut worst = (0.0, (1, 1));
    for mu in 0..set.ops.len() {
        for nu in mu..set.ops.len() {
            let (a, b) = (&set.ops[mu], &set.ops[nu]);
            let anti = &a.matmul(b) + &b.matmul(a);
            let target = if mu == nu { &identity2 } else { &zero };
            let r = anti.max_diff(target);
            if r > worst.0 {
                worst = (r, (mu + 1, nu + 1));
            }
        }
    }
    let hermitian_residual = set
        .ops
        .iter()
        .map(Operator::hermiticity_residual)
        .fold(0.0, f64::max);
    CarReport {
        max_residual: worst.0,
        worst_pair: worst.1,
        hermitian_residual,
        passed: worst.0 < tol.residual && hermitian_residual < tol.residual,
    }
}

/// `c_lambda m c_lambda = (-1)^(|m| - [lambda in m]) m`.
pub fn majorana_conjugation_sign(lambda: usize, mask: u64) -> f64 {
    let inside = (mask >> (lambda - 1) & 1) as u32;
    if (mask.count_ones() - inside) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The parity operator written as a Majorana monomial: `Z^(x)n = (-i)^n c_1 ... c_2n`.
pub fn parity_operator(n: usize) -> Operator {
    paulis::parity(n)
}

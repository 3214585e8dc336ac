//! Dense complex operators and state vectors sized for desk-scale qubit counts.
//!
//! Storage is row-major and qubit 1 is the most significant bit of a basis
//! index, so `|z_1, ..., z_n>` has index `z_1 * 2^(n-1) + ... + z_n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<Operator> for MatrixJson {
    fn from(op: Operator) -> Self {
        let rows = op.rows();
        MatrixJson {
            n: op.n_qubits,
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Operator {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        let dim = 1usize.checked_shl(m.n as u32).unwrap_or(0);
        if m.re.len() != m.im.len() || m.re.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.re.len(),
            });
        }
        let rows = m
            .re
            .iter()
            .zip(&m.im)
            .map(|(re, im)| {
                if re.len() != dim || im.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: re.len().min(im.len()),
                    });
                }
                Ok(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        Operator::from_rows(&rows)
    }
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<StateVector> for VectorJson {
    fn from(v: StateVector) -> Self {
        VectorJson {
            n: v.n_qubits,
            re: v.amps.iter().map(|z| z.re).collect(),
            im: v.amps.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<VectorJson> for StateVector {
    type Error = Error;

    fn try_from(v: VectorJson) -> Result<Self> {
        if v.re.len() != v.im.len() || Some(v.re.len()) != 1usize.checked_shl(v.n as u32) {
            return Err(Error::DimensionMismatch {
                expected: 1usize.checked_shl(v.n as u32).unwrap_or(0),
                found: v.re.len(),
            });
        }
        StateVector::from_amplitudes(v.re.iter().zip(&v.im).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }
}

/// Largest register the dense kernel will build.
pub const MAX_QUBITS: usize = 15;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Numerical thresholds shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub unitary: f64,
    pub residual: f64,
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitary: 1e-9,
            residual: 1e-9,
            norm: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new(unitary: f64, residual: f64, norm: f64) -> Result<Self> {
        for (name, v) in [("unitary", unitary), ("residual", residual), ("norm", norm)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance `{name}` must be strictly positive, got {v}"
                )));
            }
        }
        Ok(Self {
            unitary,
            residual,
            norm,
        })
    }

    pub fn with_residual(self, residual: f64) -> Result<Self> {
        Self::new(self.unitary, residual, self.norm)
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        Err(Error::TooManyQubits {
            requested: n_qubits,
            max: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// A `2^n x 2^n` complex matrix.
///
/// Serializes as `{"n": n, "re": [[..]..], "im": [[..]..]}`, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct Operator {
    n_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let mut op = Self::zeros(n_qubits);
        for i in 0..op.dim {
            op.data[i * op.dim + i] = ONE;
        }
        op
    }

    pub fn scalar(n_qubits: usize, value: Complex64) -> Self {
        Self::identity(n_qubits).scale(value)
    }

    pub fn diagonal(n_qubits: usize, entries: &[Complex64]) -> Result<Self> {
        let mut op = Self::zeros(n_qubits);
        if entries.len() != op.dim {
            return Err(Error::DimensionMismatch {
                expected: op.dim,
                found: entries.len(),
            });
        }
        for (i, &e) in entries.iter().enumerate() {
            op.data[i * op.dim + i] = e;
        }
        Ok(op)
    }

    /// Builds an operator from row-major entries; the length must be a power of four.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let len = data.len();
        let dim = (len as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != len || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{len} entries do not form a 2^n x 2^n matrix"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        Ok(Self {
            n_qubits,
            dim,
            data,
        })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_row_major(rows.iter().flatten().copied().collect())
    }

    /// Convenience for literal real matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn set_column(&mut self, col: usize, values: &[Complex64]) {
        for (r, &v) in values.iter().enumerate() {
            self.set(r, col, v);
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n_qubits);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.data[r * self.dim + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(self^dagger other)`, the Hilbert-Schmidt inner product.
    pub fn inner(&self, other: &Operator) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise max distance to `other`.
    pub fn max_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            let out_row = &mut out[r * d..(r + 1) * d];
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * d..(k + 1) * d];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Operator {
            n_qubits: self.n_qubits,
            dim: d,
            data: out,
        }
    }

    /// `self * inner * self^dagger`.
    pub fn conjugate(&self, inner: &Operator) -> Operator {
        self.matmul(inner).matmul(&self.adjoint())
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(self.dim, state.dim(), "state dimension mismatch");
        let amps = self
            .data
            .chunks(self.dim)
            .map(|row| row.iter().zip(&state.amps).map(|(a, b)| a * b).sum())
            .collect();
        StateVector {
            n_qubits: self.n_qubits,
            amps,
        }
    }

    /// Max entry of `U^dagger U - 1`.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_diff(&Operator::identity(self.n_qubits))
    }

    pub fn is_unitary(&self, tol: &Tolerances) -> bool {
        self.unitarity_residual() < tol.unitary
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    /// Determinant of a single-qubit operator.
    pub fn det2(&self) -> Complex64 {
        assert_eq!(self.dim, 2, "det2 needs a 2x2 matrix");
        self.data[0] * self.data[3] - self.data[1] * self.data[2]
    }

    /// Left-multiplies by `g` acting on the contiguous wires starting at
    /// `first_wire` (1-based), in place.
    pub fn left_apply_local(&mut self, g: &Operator, first_wire: usize) -> Result<()> {
        check_block(g.n_qubits, first_wire, self.n_qubits)?;
        let d = self.dim;
        let mut col = vec![ZERO; d];
        for c in 0..d {
            for r in 0..d {
                col[r] = self.data[r * d + c];
            }
            apply_block_in_place(&mut col, self.n_qubits, g, first_wire);
            for r in 0..d {
                self.data[r * d + c] = col[r];
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({} qubits) [", self.n_qubits)?;
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

impl Mul<Complex64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: Complex64) -> Operator {
        self.scale(rhs)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator {
            n_qubits: self.n_qubits,
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator {
            n_qubits: self.n_qubits,
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.map(|z| -z)
    }
}

/// A length-`2^n` complex vector; serializes as `{"n": n, "re": [..], "im": [..]}`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "VectorJson", try_from = "VectorJson")]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Basis state from bits, qubit 1 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::basis(bits.len(), index)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{len} amplitudes do not form a qubit register"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        Ok(Self { n_qubits, amps })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm < f64::EPSILON {
            return Err(Error::ZeroInput);
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|&z| z * factor).collect(),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "state dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_qubits(self.n_qubits + other.n_qubits)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        })
    }

    /// Applies `g` to the contiguous wires starting at `first_wire` (1-based).
    pub fn apply_local(&mut self, g: &Operator, first_wire: usize) -> Result<()> {
        check_block(g.n_qubits, first_wire, self.n_qubits)?;
        apply_block_in_place(&mut self.amps, self.n_qubits, g, first_wire);
        Ok(())
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .amps
            .iter()
            .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
            .collect();
        write!(f, "StateVector({} qubits) [{}]", self.n_qubits, cells.join(", "))
    }
}

fn check_block(block_qubits: usize, first_wire: usize, n_qubits: usize) -> Result<()> {
    if first_wire == 0 || first_wire + block_qubits - 1 > n_qubits {
        return Err(Error::WireOutOfRange {
            wire: first_wire,
            n_qubits,
        });
    }
    Ok(())
}

fn apply_block_in_place(amps: &mut [Complex64], n_qubits: usize, g: &Operator, first_wire: usize) {
    let m = g.n_qubits;
    let gd = g.dim;
    // wires first_wire..first_wire+m-1 occupy bits [shift, shift+m)
    let shift = n_qubits - (first_wire + m - 1);
    let low = 1usize << shift;
    let high = 1usize << (n_qubits - first_wire + 1);
    let mut buf = vec![ZERO; gd];
    let mut out = vec![ZERO; gd];
    for outer in (0..amps.len()).step_by(high) {
        for inner in 0..low {
            let base = outer + inner;
            for (j, b) in buf.iter_mut().enumerate() {
                *b = amps[base + (j << shift)];
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o = (0..gd).map(|c| g.data[r * gd + c] * buf[c]).sum();
            }
            for (j, &o) in out.iter().enumerate() {
                amps[base + (j << shift)] = o;
            }
        }
    }
}

/// Kronecker product; the qubit counts add.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    let n = a.n_qubits + b.n_qubits;
    check_qubits(n)?;
    let mut out = Operator::zeros(n);
    let (da, db) = (a.dim, b.dim);
    for i1 in 0..da {
        for j1 in 0..da {
            let x = a.get(i1, j1);
            if x == ZERO {
                continue;
            }
            for i2 in 0..db {
                for j2 in 0..db {
                    out.set(i1 * db + i2, j1 * db + j2, x * b.get(i2, j2));
                }
            }
        }
    }
    Ok(out)
}

pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> Result<Operator> {
    ops.into_iter()
        .try_fold(Operator::identity(0), |acc, op| kron(&acc, op))
}

/// `1^(k-1) (x) g (x) 1^(n-k-1)` for a two-qubit `g` on wires `[k, k+1]`.
pub fn embed_two_qubit(g: &Operator, k: usize, n: usize) -> Result<Operator> {
    if g.n_qubits != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: g.dim,
        });
    }
    embed(g, k, n)
}

/// Places `g` on the contiguous wires starting at `first_wire` of an `n`-qubit register.
pub fn embed(g: &Operator, first_wire: usize, n: usize) -> Result<Operator> {
    check_qubits(n)?;
    if first_wire == 0 || first_wire + g.n_qubits - 1 > n {
        return Err(Error::WireOutOfRange {
            wire: first_wire,
            n_qubits: n,
        });
    }
    let left = Operator::identity(first_wire - 1);
    let right = Operator::identity(n - first_wire + 1 - g.n_qubits);
    kron(&kron(&left, g)?, &right)
}

/// Common view over operators and states for phase-insensitive comparison.
pub trait Amplitudes: Sized {
    fn amplitudes(&self) -> &[Complex64];
    fn shape(&self) -> (usize, usize);
    fn with_amplitudes(&self, amps: Vec<Complex64>) -> Self;
}

impl Amplitudes for Operator {
    fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }
    fn shape(&self) -> (usize, usize) {
        (self.dim, self.dim)
    }
    fn with_amplitudes(&self, amps: Vec<Complex64>) -> Self {
        Operator {
            n_qubits: self.n_qubits,
            dim: self.dim,
            data: amps,
        }
    }
}

impl Amplitudes for StateVector {
    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
    fn shape(&self) -> (usize, usize) {
        (self.amps.len(), 1)
    }
    fn with_amplitudes(&self, amps: Vec<Complex64>) -> Self {
        StateVector {
            n_qubits: self.n_qubits,
            amps,
        }
    }
}

/// Outcome of a phase-insensitive comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseMatch {
    pub equal: bool,
    /// `e^{i theta}` with `a ~ e^{i theta} b`; absent when `a` and `b` are orthogonal.
    pub phase: Option<Complex64>,
    /// `min_theta ||a - e^{i theta} b||` in the Frobenius norm.
    pub residual: f64,
}

pub fn equal_up_to_phase<T: Amplitudes>(a: &T, b: &T, tol: &Tolerances) -> Result<PhaseMatch> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.amplitudes().len(),
            found: b.amplitudes().len(),
        });
    }
    let (xs, ys) = (a.amplitudes(), b.amplitudes());
    let norm_b2: f64 = ys.iter().map(|z| z.norm_sqr()).sum();
    if norm_b2.sqrt() < tol.norm {
        return Err(Error::ZeroInput);
    }
    let norm_a2: f64 = xs.iter().map(|z| z.norm_sqr()).sum();
    let overlap: Complex64 = ys.iter().zip(xs).map(|(y, x)| y.conj() * x).sum();
    let mag = overlap.norm();
    let phase = (mag > tol.norm).then(|| overlap / mag);
    let residual = match phase {
        Some(p) => xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (x - p * y).norm_sqr())
            .sum::<f64>()
            .sqrt(),
        None => (norm_a2 + norm_b2).sqrt(),
    };
    Ok(PhaseMatch {
        equal: residual < tol.residual,
        phase,
        residual,
    })
}

/// Removes the global phase: the largest-magnitude entry (lowest index on
/// near-ties) is made real and positive.
pub fn canonical_phase<T: Amplitudes>(a: &T, tol: &Tolerances) -> Result<T> {
    let amps = a.amplitudes();
    let max = amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max < tol.norm {
        return Err(Error::ZeroInput);
    }
    let pivot = amps
        .iter()
        .find(|z| z.norm() >= max - tol.norm)
        .copied()
        .unwrap_or(ONE);
    let unphase = pivot.conj() / pivot.norm();
    Ok(a.with_amplitudes(amps.iter().map(|&z| z * unphase).collect()))
}

pub mod paulis {
    //! Single-qubit constants.
    use super::*;

    pub fn identity() -> Operator {
        Operator::identity(1)
    }

    pub fn x() -> Operator {
        Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn y() -> Operator {
        Operator::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).unwrap()
    }

    pub fn z() -> Operator {
        Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn h() -> Operator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Operator::from_real_rows(&[&[s, s], &[s, -s]]).unwrap()
    }

    /// `Z^(x)n`, the parity operator.
    pub fn parity(n: usize) -> Operator {
        let d = 1usize << n;
        let entries: Vec<Complex64> = (0..d)
            .map(|i| if i.count_ones() % 2 == 0 { ONE } else { -ONE })
            .collect();
        Operator::diagonal(n, &entries).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::paulis::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let tol = Tolerances::default();
        assert!(kron(&identity(), &identity()).unwrap().max_diff(&Operator::identity(2)) < tol.residual);
        let zz = kron(&z(), &z()).unwrap();
        let expected = Operator::diagonal(2, &[ONE, -ONE, -ONE, ONE]).unwrap();
        assert_eq!(zz, expected);
    }

    #[test]
    fn kron_matches_index_formula() {
        let (a, b) = (x(), y());
        let k = kron(&a, &b).unwrap();
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        assert_eq!(k.get(2 * i1 + i2, 2 * j1 + j2), a.get(i1, j1) * b.get(i2, j2));
                    }
                }
            }
        }
    }

    #[test]
    fn kron_refuses_oversized_registers() {
        let big = Operator::identity(8);
        assert!(matches!(kron(&big, &big), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn embed_out_of_range() {
        let g = Operator::identity(2);
        assert!(embed_two_qubit(&g, 0, 3).is_err());
        assert!(embed_two_qubit(&g, 3, 3).is_err());
        assert!(embed_two_qubit(&g, 2, 3).is_ok());
    }

    #[test]
    fn local_application_agrees_with_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = crate::random::haar_unitary(2, &mut rng);
        for k in 1..=3 {
            let full = embed_two_qubit(&g, k, 4).unwrap();
            let mut m = Operator::identity(4);
            m.left_apply_local(&g, k).unwrap();
            assert!(m.max_diff(&full) < 1e-14);
            let psi = crate::random::random_state(4, &mut rng);
            let mut phi = psi.clone();
            phi.apply_local(&g, k).unwrap();
            assert!(phi.distance(&full.apply(&psi)) < 1e-14);
        }
    }

    #[test]
    fn phase_comparison() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = crate::random::haar_unitary(2, &mut rng);
        let p = Complex64::from_polar(1.0, std::f64::consts::PI / 7.0);
        let m = equal_up_to_phase(&u.scale(p), &u, &tol).unwrap();
        assert!(m.equal);
        assert!((m.phase.unwrap() - p).norm() < 1e-12);
        assert!(!equal_up_to_phase(&x(), &z(), &tol).unwrap().equal);
        assert!(matches!(
            equal_up_to_phase(&x(), &Operator::zeros(1), &tol),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn canonical_phase_examples() {
        let tol = Tolerances::default();
        let ii = Operator::scalar(2, I);
        assert!(canonical_phase(&ii, &tol).unwrap().max_diff(&Operator::identity(2)) < 1e-15);
        let ket01 = StateVector::basis(2, 1).unwrap();
        let flipped = ket01.scale(-ONE);
        assert!(canonical_phase(&flipped, &tol).unwrap().distance(&ket01) < 1e-15);
        assert!(canonical_phase(&StateVector::from_amplitudes(vec![ZERO; 4]).unwrap(), &tol).is_err());
    }

    #[test]
    fn canonical_phase_is_idempotent() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(1..=3);
            let u = crate::random::haar_unitary(n, &mut rng);
            let once = canonical_phase(&u, &tol).unwrap();
            let twice = canonical_phase(&once, &tol).unwrap();
            assert!(once.max_diff(&twice) < 1e-14);
        }
    }

    #[test]
    fn canonical_phase_tie_break_takes_lowest_index() {
        let tol = Tolerances::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_amplitudes(vec![c(0.0, s), c(-s, 0.0)]).unwrap();
        let canon = canonical_phase(&psi, &tol).unwrap();
        assert!((canon.amplitudes()[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((canon.amplitudes()[1] - c(0.0, s)).norm() < 1e-15);
    }
}

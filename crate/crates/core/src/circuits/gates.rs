//! Named gates and the two-qubit block layouts.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{paulis, Operator, Tolerances, I, MAX_QUBITS, ONE};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_block(block: &Operator) -> Result<()> {
    if block.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: block.dim(),
        });
    }
    let residual = block.unitarity_residual();
    if residual >= Tolerances::default().unitary {
        return Err(Error::NonUnitary { residual });
    }
    Ok(())
}

/// Even two-qubit gate: `A` on span{|00>, |11>}, `B` on span{|01>, |10>}.
pub fn build_g(a: &Operator, b: &Operator) -> Result<Operator> {
    check_block(a)?;
    check_block(b)?;
    let mut g = Operator::zeros(2);
    for (i, &r) in [0, 3].iter().enumerate() {
        for (j, &col) in [0, 3].iter().enumerate() {
            g.set(r, col, a.get(i, j));
        }
    }
    for (i, &r) in [1, 2].iter().enumerate() {
        for (j, &col) in [1, 2].iter().enumerate() {
            g.set(r, col, b.get(i, j));
        }
    }
    Ok(g)
}

/// Odd two-qubit gate: `A` maps span{|01>, |10>} into span{|00>, |11>}
/// and `B` maps span{|00>, |11>} into span{|01>, |10>}.
pub fn build_j(a: &Operator, b: &Operator) -> Result<Operator> {
    check_block(a)?;
    check_block(b)?;
    let mut j = Operator::zeros(2);
    for (i, &r) in [0, 3].iter().enumerate() {
        for (k, &col) in [1, 2].iter().enumerate() {
            j.set(r, col, a.get(i, k));
        }
    }
    for (i, &r) in [1, 2].iter().enumerate() {
        for (k, &col) in [0, 3].iter().enumerate() {
            j.set(r, col, b.get(i, k));
        }
    }
    Ok(j)
}

pub fn phase_gate(phi: f64) -> Operator {
    Operator::diagonal(1, &[ONE, Complex64::from_polar(1.0, phi)]).expect("two entries")
}

pub fn rx(theta: f64) -> Operator {
    let (s, co) = (theta / 2.0).sin_cos();
    Operator::from_rows(&[vec![c(co, 0.0), c(0.0, -s)], vec![c(0.0, -s), c(co, 0.0)]])
        .expect("2x2")
}

pub fn ry(theta: f64) -> Operator {
    let (s, co) = (theta / 2.0).sin_cos();
    Operator::from_real_rows(&[&[co, -s], &[s, co]]).expect("2x2")
}

pub fn rz(theta: f64) -> Operator {
    Operator::diagonal(
        1,
        &[Complex64::from_polar(1.0, -theta / 2.0), Complex64::from_polar(1.0, theta / 2.0)],
    )
    .expect("two entries")
}

/// Fermionic swap `G(Z, X)`.
pub fn fswap() -> Operator {
    build_g(&paulis::z(), &paulis::x()).expect("unitary blocks")
}

pub fn ghh() -> Operator {
    build_g(&paulis::h(), &paulis::h()).expect("unitary blocks")
}

/// `G(1, X)`; even but not a matchgate.
pub fn swap() -> Operator {
    build_g(&paulis::identity(), &paulis::x()).expect("unitary blocks")
}

pub fn cz() -> Operator {
    build_g(&paulis::z(), &paulis::identity()).expect("unitary blocks")
}

/// `G(P(phi), 1) = diag(1, 1, 1, e^{i phi})`.
pub fn cphase(phi: f64) -> Operator {
    build_g(&phase_gate(phi), &paulis::identity()).expect("unitary blocks")
}

/// Fermionic swap of two arbitrary wires: `|..x..y..> -> (-1)^{xy} |..y..x..>`.
pub fn fswap_between(i: usize, j: usize, n: usize) -> Result<Operator> {
    for w in [i, j] {
        if w == 0 || w > n {
            return Err(Error::WireOutOfRange { wire: w, n_qubits: n });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument("fswap needs two distinct wires".into()));
    }
    let (bi, bj) = (n - i, n - j);
    let mut op = Operator::zeros(n);
    for z in 0..op.dim() {
        let (x, y) = (z >> bi & 1, z >> bj & 1);
        let target = z & !(1 << bi) & !(1 << bj) | y << bi | x << bj;
        op.set(target, z, if x & y == 1 { -ONE } else { ONE });
    }
    Ok(op)
}

/// Partial bit string over `{0, 1, *}`; `None` is the wildcard.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern(Vec<Option<bool>>);

impl Pattern {
    pub fn new(entries: Vec<Option<bool>>) -> Self {
        Pattern(entries)
    }

    pub fn entries(&self) -> &[Option<bool>] {
        &self.0
    }

    /// Number of qubits the pattern is defined over.
    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Number of non-wildcard entries.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|e| e.is_some()).count()
    }

    /// Whether basis index `z` (qubit 1 most significant) matches.
    pub fn matches(&self, z: usize) -> bool {
        let n = self.n();
        self.0
            .iter()
            .enumerate()
            .all(|(k, e)| e.is_none_or(|bit| (z >> (n - 1 - k) & 1 == 1) == bit))
    }

    /// `y + e_k`: flips the defined bit at 1-based position `k`.
    pub fn flip(&self, k: usize) -> Self {
        let mut p = self.clone();
        p.0[k - 1] = p.0[k - 1].map(|b| !b);
        p
    }

    /// `y \ k`: wildcard at position `k`.
    pub fn without(&self, k: usize) -> Self {
        let mut p = self.clone();
        p.0[k - 1] = None;
        p
    }

    /// All `3^n` patterns, in lexicographic order over `0 < 1 < *`.
    pub fn all(n: usize) -> Vec<Pattern> {
        (0..3usize.pow(n as u32))
            .map(|mut t| {
                let mut v = vec![None; n];
                for k in (0..n).rev() {
                    v[k] = [Some(false), Some(true), None][t % 3];
                    t /= 3;
                }
                Pattern(v)
            })
            .collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|e| match e {
                Some(false) => "0",
                Some(true) => "1",
                None => "*",
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Accepts `1,*,1` or `1*1`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .filter(|ch| !ch.is_whitespace() && *ch != ',')
            .map(|ch| match ch {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                other => Err(Error::InvalidArgument(format!(
                    "pattern entries are 0, 1 or *, found `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        Ok(Pattern(entries))
    }
}

/// Diagonal gate with `-1` on every basis state matching the pattern.
pub fn build_f(pattern: &Pattern) -> Result<Operator> {
    let n = pattern.n();
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    let diag: Vec<Complex64> = (0..1usize << n)
        .map(|z| if pattern.matches(z) { -ONE } else { ONE })
        .collect();
    Operator::diagonal(n, &diag)
}

/// `C^{n-1} Z`: `-1` on `|1...1>` only.
pub fn build_cnz(n: usize) -> Result<Operator> {
    build_f(&Pattern(vec![Some(true); n]))
}

fn expect_params(name: &str, params: &[f64], count: usize) -> Result<()> {
    if params.len() != count {
        return Err(Error::InvalidArgument(format!(
            "{name} takes {count} parameter(s), {} given",
            params.len()
        )));
    }
    Ok(())
}

/// One-qubit block by name (`I X Y Z H P RX RY RZ`), case-insensitive.
pub fn one_qubit_gate(name: &str, params: &[f64]) -> Result<Operator> {
    let upper = name.to_ascii_uppercase();
    let fixed = |op: Operator| expect_params(&upper, params, 0).map(|_| op);
    match upper.as_str() {
        "I" => fixed(paulis::identity()),
        "X" => fixed(paulis::x()),
        "Y" => fixed(paulis::y()),
        "Z" => fixed(paulis::z()),
        "H" => fixed(paulis::h()),
        "P" => expect_params(&upper, params, 1).map(|_| phase_gate(params[0])),
        "RX" => expect_params(&upper, params, 1).map(|_| rx(params[0])),
        "RY" => expect_params(&upper, params, 1).map(|_| ry(params[0])),
        "RZ" => expect_params(&upper, params, 1).map(|_| rz(params[0])),
        _ => Err(Error::UnknownGate(name.to_string())),
    }
}

/// Standard gate by name: any one-qubit block, or `FSWAP GHH SWAP CZ CPHASE`.
pub fn named_gate(name: &str, params: &[f64]) -> Result<Operator> {
    let upper = name.to_ascii_uppercase();
    let fixed = |op: Operator| expect_params(&upper, params, 0).map(|_| op);
    match upper.as_str() {
        "FSWAP" => fixed(fswap()),
        "GHH" => fixed(ghh()),
        "SWAP" => fixed(swap()),
        "CZ" => fixed(cz()),
        "CPHASE" => expect_params(&upper, params, 1).map(|_| cphase(params[0])),
        _ => one_qubit_gate(name, params),
    }
}

/// `-i 1` and `i 1`, the blocks of `c_{2n}` on two qubits.
pub fn c4_blocks() -> (Operator, Operator) {
    (
        Operator::scalar(1, -I),
        Operator::scalar(1, I),
    )
}

/// Blocks of a two-qubit gate read from the even (`G`) or odd (`J`) layout,
/// ignoring every other entry.
pub(crate) fn layout_blocks(g: &Operator, odd: bool) -> (Operator, Operator) {
    let (a_cols, b_cols) = if odd { ([1, 2], [0, 3]) } else { ([0, 3], [1, 2]) };
    let mut a = Operator::zeros(1);
    let mut b = Operator::zeros(1);
    for i in 0..2 {
        for j in 0..2 {
            a.set(i, j, g.get([0, 3][i], a_cols[j]));
            b.set(i, j, g.get([1, 2][i], b_cols[j]));
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, StateVector, ZERO};
    use crate::majorana::jw_majorana;
    use std::f64::consts::PI;

    #[test]
    fn g_identity_and_layout() {
        let id = paulis::identity();
        assert_eq!(build_g(&id, &id).unwrap(), Operator::identity(2));
        assert_eq!(
            cz(),
            Operator::diagonal(2, &[ONE, ONE, ONE, -ONE]).unwrap()
        );
        assert!(build_g(&Operator::scalar(1, c(2.0, 0.0)), &id).is_err());
    }

    #[test]
    fn majoranas_as_j_gates() {
        assert_eq!(build_j(&paulis::x(), &paulis::x()).unwrap(), jw_majorana(2, 1).unwrap());
        assert_eq!(build_j(&paulis::y(), &paulis::y()).unwrap(), jw_majorana(2, 2).unwrap());
        assert_eq!(build_j(&paulis::z(), &paulis::z()).unwrap(), jw_majorana(2, 3).unwrap());
        let (a, b) = c4_blocks();
        assert_eq!(build_j(&a, &b).unwrap(), jw_majorana(2, 4).unwrap());
    }

    #[test]
    fn j_identity_blocks() {
        // J(1, 1) exchanges |00> <-> |01| and |11> <-> |10>: X on the second qubit
        let id = paulis::identity();
        let j = build_j(&id, &id).unwrap();
        let x2 = kron(&paulis::identity(), &paulis::x()).unwrap();
        assert_eq!(j, x2);
        // and differs from SWAP by the even gate SWAP * X_2
        assert_eq!(swap().matmul(&j), swap().matmul(&x2));
    }

    #[test]
    fn fswap_phase_on_11() {
        let out = fswap().apply(&StateVector::basis(2, 3).unwrap());
        assert_eq!(out, StateVector::basis(2, 3).unwrap().scale(-ONE));
        let out = fswap().apply(&StateVector::basis(2, 1).unwrap());
        assert_eq!(out, StateVector::basis(2, 2).unwrap());
    }

    #[test]
    fn cphase_pi_is_cz() {
        assert!(cphase(PI).max_diff(&cz()) < 1e-15);
        assert!(named_gate("cphase", &[PI]).unwrap().max_diff(&cz()) < 1e-15);
        assert!(matches!(named_gate("toffoli", &[]), Err(Error::UnknownGate(_))));
        assert!(named_gate("CPHASE", &[]).is_err());
    }

    #[test]
    fn ghh_on_basis_states() {
        // G(H,H)|x,y> = (|0, x+y> + (-1)^x |1, x+y+1>) / sqrt 2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for x in 0..2usize {
            for y in 0..2usize {
                let input = StateVector::basis(2, 2 * x + y).unwrap();
                let parity = (x + y) % 2;
                let mut expected = vec![ZERO; 4];
                expected[parity] += c(s, 0.0);
                expected[2 + (1 - parity)] += c(if x == 1 { -s } else { s }, 0.0);
                let out = ghh().apply(&input);
                assert!(out.distance(&StateVector::from_amplitudes(expected).unwrap()) < 1e-15);
            }
        }
    }

    #[test]
    fn fswap_between_first_and_third() {
        let f = fswap_between(1, 3, 3).unwrap();
        let rows: [[f64; 8]; 8] = [
            [1., 0., 0., 0., 0., 0., 0., 0.],
            [0., 0., 0., 0., 1., 0., 0., 0.],
            [0., 0., 1., 0., 0., 0., 0., 0.],
            [0., 0., 0., 0., 0., 0., 1., 0.],
            [0., 1., 0., 0., 0., 0., 0., 0.],
            [0., 0., 0., 0., 0., -1., 0., 0.],
            [0., 0., 0., 1., 0., 0., 0., 0.],
            [0., 0., 0., 0., 0., 0., 0., -1.],
        ];
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        assert_eq!(f, Operator::from_real_rows(&refs).unwrap());
        let adjacent = fswap_between(2, 3, 3).unwrap();
        assert_eq!(adjacent, crate::linalg::embed(&fswap(), 2, 3).unwrap());
    }

    #[test]
    fn pattern_gates() {
        let p: Pattern = "1,1".parse().unwrap();
        assert_eq!(build_f(&p).unwrap(), cz());
        let p: Pattern = "1*1".parse().unwrap();
        let diag: Vec<Complex64> = [1., 1., 1., 1., 1., -1., 1., -1.].iter().map(|&x| c(x, 0.0)).collect();
        assert_eq!(build_f(&p).unwrap(), Operator::diagonal(3, &diag).unwrap());
        let empty: Pattern = "*,*".parse().unwrap();
        assert_eq!(build_f(&empty).unwrap(), Operator::scalar(2, -ONE));
        assert_eq!(build_cnz(2).unwrap(), cz());
        assert_eq!(Pattern::all(3).len(), 27);
        assert_eq!(p.to_string(), "1,*,1");
        assert!("1,2".parse::<Pattern>().is_err());
    }

    #[test]
    fn pattern_commutation_laws() {
        let n = 3;
        for y in Pattern::all(n) {
            let fy = build_f(&y).unwrap();
            for k in 1..=n {
                let fyk = build_f(&y.flip(k)).unwrap();
                let odd = jw_majorana(n, 2 * k - 1).unwrap();
                let even = jw_majorana(n, 2 * k).unwrap();
                assert_eq!(fy.matmul(&odd), odd.matmul(&fyk));
                // c_2k = i c_{2k-1} Z_k and Z_k commutes with F, so no sign here
                assert_eq!(fy.matmul(&even), even.matmul(&fyk));
                assert_ne!(fy.matmul(&even), -&even.matmul(&fyk));
                let prod = fy.matmul(&fyk);
                if y.entries()[k - 1].is_none() {
                    assert_eq!(prod, Operator::identity(n));
                } else {
                    assert_eq!(prod, build_f(&y.without(k)).unwrap());
                }
            }
        }
    }

    #[test]
    fn rotations_are_unitary_with_unit_determinant() {
        for t in [0.0, 0.3, -1.7, PI] {
            for g in [rx(t), ry(t), rz(t)] {
                assert!(g.unitarity_residual() < 1e-15);
                assert!((g.det2() - ONE).norm() < 1e-15);
            }
        }
    }
}

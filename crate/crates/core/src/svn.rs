//! Reconstruction of the unitary behind a CAR tuple.
//!
//! Given odd operators `d_mu` obeying the anticommutation relations, finds
//! `U` with `U^dagger c_mu U = d_mu`. The vacuum of the tuple is the joint
//! `+1` eigenvector of `-i d_{2k-1} d_{2k}`, and the other columns come from
//! applying `d_1^{z_1} d_3^{z_2} ... d_{2n-1}^{z_n}` to it. Those columns
//! form `U^dagger`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{canonical_phase, equal_up_to_phase, Operator, StateVector, Tolerances};
use crate::majorana::{check_car, jw_majorana, parity_of, CarSet, Parity};

/// Smallest projected norm accepted for a probe vector.
pub const PROBE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct SvnResult {
    /// `U` with `U^dagger c_mu U = d_mu`, global phase fixed by `canonical_phase`.
    pub u: Operator,
    /// `|| U^dagger c_mu U - d_mu ||_max` for each `mu`.
    pub residuals: Vec<f64>,
    pub phase_fixed: bool,
    /// Basis index of the probe that produced the vacuum.
    pub probe: usize,
}

impl SvnResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// `U^dagger`, the operator whose columns the construction fills in.
    /// It conjugates `c_mu` onto `d_mu` in the other direction: `W c_mu W^dagger = d_mu`.
    pub fn column_unitary(&self) -> Operator {
        self.u.adjoint()
    }
}

fn check_tuple(d: &CarSet, tol: &Tolerances) -> Result<()> {
    let report = check_car(d, tol);
    if !report.passed {
        let (mu, nu) = report.worst_pair;
        return Err(Error::CarViolation {
            mu,
            nu,
            residual: report.max_residual.max(report.hermitian_residual),
        });
    }
    for (i, op) in d.ops().iter().enumerate() {
        if parity_of(op, tol) != Parity::Odd {
            return Err(Error::NotOdd { mu: i + 1 });
        }
    }
    Ok(())
}

/// `prod_k (1 - i d_{2k-1} d_{2k}) / 2`.
fn vacuum_projector(d: &CarSet) -> Operator {
    let n = d.n_modes();
    let half = Complex64::new(0.5, 0.0);
    let mut p = Operator::identity(n);
    for k in 1..=n {
        let pair = d.get(2 * k - 1).matmul(d.get(2 * k));
        let factor = (&Operator::identity(n) + &pair.scale(-Complex64::i())).scale(half);
        p = p.matmul(&factor);
    }
    p
}

/// Reconstruction with probe vectors taken in index order.
pub fn svn_reconstruct(d: &CarSet, tol: &Tolerances) -> Result<SvnResult> {
    svn_reconstruct_with_probes(d, 0..1usize << d.n_modes(), tol)
}

/// Reconstruction trying the given basis probes in order.
pub fn svn_reconstruct_with_probes(
    d: &CarSet,
    probes: impl IntoIterator<Item = usize>,
    tol: &Tolerances,
) -> Result<SvnResult> {
    check_tuple(d, tol)?;
    let n = d.n_modes();
    let dim = 1usize << n;
    let p = vacuum_projector(d);
    let mut found = None;
    for probe in probes {
        if probe >= dim {
            return Err(Error::InvalidArgument(format!(
                "probe {probe} out of range for {n} qubits"
            )));
        }
        let v = StateVector::from_amplitudes(p.column(probe))?;
        if v.norm() > PROBE_THRESHOLD {
            found = Some((probe, v.normalized()?));
            break;
        }
    }
    let Some((probe, vacuum)) = found else {
        let rank = p.trace().re.round().max(0.0) as usize;
        return Err(Error::DegenerateProjector { rank });
    };

    let mut w = Operator::zeros(n);
    for z in 0..dim {
        let mut col = vacuum.clone();
        // d_1^{z_1} is leftmost, so the highest mode acts first
        for k in (1..=n).rev() {
            if z >> (n - k) & 1 == 1 {
                col = d.get(2 * k - 1).apply(&col);
            }
        }
        w.set_column(z, col.amplitudes());
    }
    let u = canonical_phase(&w.adjoint(), tol)?;
    let residuals = contract_residuals(d, &u)?;
    Ok(SvnResult {
        u,
        residuals,
        phase_fixed: true,
        probe,
    })
}

/// `|| U^dagger c_mu U - d_mu ||_max` for each `mu`.
pub fn contract_residuals(d: &CarSet, u: &Operator) -> Result<Vec<f64>> {
    let n = d.n_modes();
    if u.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: u.dim(),
        });
    }
    let ud = u.adjoint();
    (1..=2 * n)
        .map(|mu| Ok(ud.conjugate(&jw_majorana(n, mu)?).max_diff(d.get(mu))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractViolation {
    /// 1 or 2: which candidate broke the contract.
    pub candidate: usize,
    pub mu: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    /// The two candidates agree up to a global phase.
    pub unique: bool,
    pub phase_residual: f64,
    pub violations: Vec<ContractViolation>,
}

/// Compares two candidate unitaries for the same tuple.
pub fn verify_uniqueness(
    d: &CarSet,
    u1: &Operator,
    u2: &Operator,
    tol: &Tolerances,
) -> Result<UniquenessReport> {
    let mut violations = Vec::new();
    for (candidate, u) in [(1, u1), (2, u2)] {
        for (i, r) in contract_residuals(d, u)?.into_iter().enumerate() {
            if r >= tol.residual {
                violations.push(ContractViolation {
                    candidate,
                    mu: i + 1,
                    residual: r,
                });
            }
        }
    }
    let m = equal_up_to_phase(u1, u2, tol)?;
    Ok(UniquenessReport {
        unique: m.equal,
        phase_residual: m.residual,
        violations,
    })
}

/// `d_mu = V^dagger c_mu V`, the tuple whose reconstruction is `V`.
pub fn conjugated_tuple(v: &Operator) -> Result<CarSet> {
    let n = v.n_qubits();
    let vd = v.adjoint();
    let ops = (1..=2 * n)
        .map(|mu| Ok(vd.conjugate(&jw_majorana(n, mu)?)))
        .collect::<Result<Vec<_>>>()?;
    CarSet::new(n, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::gates::swap;
    use crate::linalg::paulis;
    use crate::linalg::ONE;
    use crate::random::random_fermionic_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn jordan_wigner_gives_identity() {
        for n in 1..=3 {
            let r = svn_reconstruct(&CarSet::jordan_wigner(n), &tol()).unwrap();
            assert!(r.u.max_diff(&Operator::identity(n)) < 1e-12);
            assert!(r.max_residual() < 1e-12);
            assert_eq!(r.probe, 0);
        }
    }

    #[test]
    fn swap_tuple_gives_swap() {
        let d = conjugated_tuple(&swap()).unwrap();
        let r = svn_reconstruct(&d, &tol()).unwrap();
        assert!(equal_up_to_phase(&r.u, &swap(), &tol()).unwrap().equal);
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for i in 0..12 {
            let n = 2 + i % 2;
            let v = random_fermionic_unitary(n, i % 3 == 0, &mut rng);
            let r = svn_reconstruct(&conjugated_tuple(&v).unwrap(), &tol()).unwrap();
            let m = equal_up_to_phase(&r.u, &v, &tol()).unwrap();
            assert!(m.residual < 1e-8, "residual {}", m.residual);
            assert!(r.max_residual() < 1e-9);
            assert!(r.u.unitarity_residual() < 1e-9);
            assert!(parity_of(&r.u, &tol()).is_fermionic());
        }
    }

    #[test]
    fn column_unitary_conjugates_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_fermionic_unitary(2, false, &mut rng);
        let d = conjugated_tuple(&v).unwrap();
        let w = svn_reconstruct(&d, &tol()).unwrap().column_unitary();
        for mu in 1..=4 {
            let c = jw_majorana(2, mu).unwrap();
            assert!(w.conjugate(&c).max_diff(d.get(mu)) < 1e-10);
        }
    }

    #[test]
    fn permuted_probes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_fermionic_unitary(3, false, &mut rng);
        let d = conjugated_tuple(&v).unwrap();
        let a = svn_reconstruct(&d, &tol()).unwrap();
        let b = svn_reconstruct_with_probes(&d, (0..8).rev(), &tol()).unwrap();
        let rep = verify_uniqueness(&d, &a.u, &b.u, &tol()).unwrap();
        assert!(rep.unique && rep.violations.is_empty());
    }

    #[test]
    fn uniqueness_examples() {
        let jw = CarSet::jordan_wigner(2);
        let id = Operator::identity(2);
        let phased = Operator::scalar(2, Complex64::from_polar(1.0, 0.4));
        assert!(verify_uniqueness(&jw, &id, &phased, &tol()).unwrap().unique);
        let z1 = crate::linalg::embed(&paulis::z(), 1, 2).unwrap();
        let rep = verify_uniqueness(&jw, &id, &z1, &tol()).unwrap();
        assert!(!rep.unique);
        assert!(rep.violations.iter().any(|v| v.candidate == 2 && v.mu == 1));
    }

    #[test]
    fn flipped_sign_still_reconstructs() {
        let mut ops = jw_majoranas_vec(2);
        ops[2] = ops[2].scale(-ONE);
        let d = CarSet::new(2, ops).unwrap();
        let r = svn_reconstruct(&d, &tol()).unwrap();
        assert!(r.max_residual() < 1e-12);
        assert!(!equal_up_to_phase(&r.u, &Operator::identity(2), &tol()).unwrap().equal);
    }

    fn jw_majoranas_vec(n: usize) -> Vec<Operator> {
        crate::majorana::jw_majoranas(n)
    }

    #[test]
    fn bad_tuples_are_rejected() {
        let mut ops = jw_majoranas_vec(2);
        ops[1] = ops[0].clone();
        let err = svn_reconstruct(&CarSet::new(2, ops).unwrap(), &tol()).unwrap_err();
        assert!(matches!(err, Error::CarViolation { mu: 1, nu: 2, .. }), "{err:?}");

        // (Z, X) obeys the CAR on one qubit but Z is even
        let d = CarSet::new(1, vec![paulis::z(), paulis::x()]).unwrap();
        assert_eq!(svn_reconstruct(&d, &tol()).unwrap_err(), Error::NotOdd { mu: 1 });
    }
}

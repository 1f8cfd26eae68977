//! Numerical versions of the no-go arguments: factorizing processes,
//! controlled operations, cloning and disentangling.

use crate::entropy::{chi, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::matrix::{inner, kron_vec, Complex64, ComplexMatrix, ZERO};
use crate::states::{DensityMatrix, Ensemble, PureState, VALIDATION_TOL};

/// A process factorizes on an input when `1 − fidelity` is at most this.
pub const FACTORIZATION_TOL: f64 = 1e-9;

/// Whether `U|φ⟩|s⟩ = |φ⟩|f(φ, s)⟩` holds, and the pointer state when it does.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub factorizes: bool,
    /// `⟨φ| tr_B(|out⟩⟨out|) |φ⟩`.
    pub fidelity: f64,
    pub pointer_state: Option<PureState>,
}

fn check_unitary(u: &ComplexMatrix, n: usize) -> Result<()> {
    if (u.rows(), u.cols()) != (n, n) {
        return Err(Error::DimensionMismatch(format!("expected a {n}x{n} unitary, got {}x{}", u.rows(), u.cols())));
    }
    let deviation = u.unitarity_deviation();
    if deviation > VALIDATION_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

pub fn extract_pointer_state(
    u: &ComplexMatrix,
    phi: &PureState,
    s: &PureState,
    dims: (usize, usize),
) -> Result<FactorizationResult> {
    let (da, db) = dims;
    check_unitary(u, da * db)?;
    if phi.dim() != da || s.dim() != db {
        return Err(Error::DimensionMismatch(format!(
            "inputs of dimension {} and {} for subsystems {da}x{db}",
            phi.dim(),
            s.dim()
        )));
    }
    let out = u.matvec(&kron_vec(phi.amplitudes(), s.amplitudes()))?;
    let reduced = ComplexMatrix::outer(&out, &out).partial_trace(&[da, db], &[0])?;
    let p = phi.amplitudes();
    let projected = reduced.matvec(p)?;
    let fidelity = inner(p, &projected).re.clamp(0.0, 1.0);
    let factorizes = 1.0 - fidelity <= FACTORIZATION_TOL;
    let pointer_state = if factorizes {
        let f: Vec<Complex64> = (0..db).map(|b| (0..da).map(|a| p[a].conj() * out[a * db + b]).sum()).collect();
        Some(PureState::normalized(f)?)
    } else {
        None
    };
    Ok(FactorizationResult { factorizes, fidelity, pointer_state })
}

/// `|⟨φ|ψ⟩| · |1 − ⟨f(φ,s)|f(ψ,s)⟩|`, which vanishes whenever both inputs factorize.
pub fn no_cloning_residual(
    u: &ComplexMatrix,
    phi: &PureState,
    psi: &PureState,
    s: &PureState,
    dims: (usize, usize),
) -> Result<f64> {
    let a = extract_pointer_state(u, phi, s, dims)?;
    let b = extract_pointer_state(u, psi, s, dims)?;
    match (&a.pointer_state, &b.pointer_state) {
        (Some(fa), Some(fb)) => {
            let overlap = inner(phi.amplitudes(), psi.amplitudes()).norm();
            let pointer_overlap = inner(fa.amplitudes(), fb.amplitudes());
            Ok(overlap * (Complex64::new(1.0, 0.0) - pointer_overlap).norm())
        }
        _ => Err(Error::PremiseNotSatisfied { fidelity_phi: a.fidelity, fidelity_psi: b.fidelity }),
    }
}

/// Block-diagonal `Σ_i |i⟩⟨i| ⊗ V_i`.
pub fn controlled_unitary(control_dim: usize, targets: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if targets.len() != control_dim || control_dim == 0 {
        return Err(Error::DimensionMismatch(format!("{} targets for a {control_dim}-level control", targets.len())));
    }
    let t = targets[0].rows();
    for v in targets {
        check_unitary(v, t)?;
    }
    let n = control_dim * t;
    let mut u = ComplexMatrix::zeros(n, n);
    for (i, v) in targets.iter().enumerate() {
        for a in 0..t {
            for b in 0..t {
                u[(i * t + a, i * t + b)] = v[(a, b)];
            }
        }
    }
    Ok(u)
}

/// `χ({p_x, ρ_x ⊗ ρ_x}) − χ({p_x, ρ_x})` for an ensemble of pure states.
///
/// A positive value means a universal copier would raise χ, which no
/// quantum operation can do.
pub fn cloning_chi_gain(e: &Ensemble) -> Result<f64> {
    for s in e.states() {
        let deviation = (s.purity() - 1.0).abs();
        if deviation > VALIDATION_TOL {
            return Err(Error::NotPure { deviation });
        }
    }
    let cloned = e.map_states(|s| Ok(s.kron(s)))?;
    Ok(chi(&cloned)? - chi(e)?)
}

/// `tr₂(ρ₁₂) ⊗ tr₁(ρ₁₂)`.
pub fn disentangle(rho12: &DensityMatrix, dims: (usize, usize)) -> Result<DensityMatrix> {
    let (d1, d2) = dims;
    if rho12.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!("{}-dimensional state for subsystems {d1}x{d2}", rho12.dim())));
    }
    let r1 = rho12.partial_trace(&[d1, d2], &[0])?;
    let r2 = rho12.partial_trace(&[d1, d2], &[1])?;
    DensityMatrix::new(r1.kron(&r2).into_matrix())
}

/// χ gained by disentangling a pure bipartite state.
///
/// The input is the singleton ensemble `{ψ}` with χ = 0; the output χ is
/// taken over the eigen-ensemble of `tr₂ψ ⊗ tr₁ψ`, whose members are pure,
/// so it equals `S(tr₂ψ) + S(tr₁ψ)`.
pub fn disentangle_chi_gain(psi12: &PureState, dims: (usize, usize)) -> Result<f64> {
    let rho = psi12.density();
    let product = disentangle(&rho, dims)?;
    let eig = product.matrix().hermitian_eig()?;
    let n = product.dim();
    let (probs, members): (Vec<f64>, Vec<DensityMatrix>) = (0..n)
        .filter(|&k| eig.eigenvalues[k] > 0.0)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            (eig.eigenvalues[k], DensityMatrix::from_trusted(ComplexMatrix::outer(&v, &v)))
        })
        .unzip();
    let total: f64 = probs.iter().sum();
    let eigen = Ensemble::new(probs.into_iter().map(|p| p / total).collect(), members)?;
    let chi_out = von_neumann_entropy(&eigen.mix())?;
    let chi_in = chi(&Ensemble::new(vec![1.0], vec![rho])?)?;
    Ok(chi_out - chi_in)
}

/// `Σ_i λ_i |i⟩|i⟩` from a Schmidt spectrum (amplitudes `√λ_i`).
pub fn schmidt_state(d: usize, weights: &[f64]) -> Result<PureState> {
    if weights.len() > d {
        return Err(Error::DimensionMismatch(format!("{} Schmidt weights in dimension {d}", weights.len())));
    }
    let mut amps = vec![ZERO; d * d];
    for (i, &w) in weights.iter().enumerate() {
        amps[i * d + i] = Complex64::new(w.max(0.0).sqrt(), 0.0);
    }
    PureState::new(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{channel_from_dilation, chi_monotonicity_slack, StinespringDilation};
    use crate::random::{haar_unitary, Rng};

    // Oracle (30-digit arithmetic): 2·H(0.9) from the Schmidt spectrum.
    const DISENTANGLE_GAIN: f64 = 0.937_991_187_178_562;
    // Oracle: χ of the cloned pair is H(3/4) since |⟨0 0|+ +⟩| = 1/2.
    const CLONE_GAIN: f64 = 0.210_402_087_766_277;

    fn cnot() -> ComplexMatrix {
        controlled_unitary(2, &[ComplexMatrix::identity(2), ComplexMatrix::pauli_x()]).unwrap()
    }

    fn swap() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                m[(b * 2 + a, a * 2 + b)] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }

    /// Entanglement entropy from singular values of the amplitude matrix.
    fn schmidt_entropy(psi: &PureState, d1: usize, d2: usize) -> f64 {
        let m = nalgebra::DMatrix::from_row_slice(d1, d2, psi.amplitudes());
        m.svd(false, false).singular_values.iter().map(|s| s * s).filter(|&p| p > 1e-300).map(|p| -p * p.log2()).sum()
    }

    #[test]
    fn identity_factorizes() {
        let mut rng = Rng::new(1, 0);
        let phi = PureState::new(rng.unit_vector(2)).unwrap();
        let s = PureState::new(rng.unit_vector(3)).unwrap();
        let r = extract_pointer_state(&ComplexMatrix::identity(6), &phi, &s, (2, 3)).unwrap();
        assert!(r.factorizes);
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        let f = r.pointer_state.unwrap();
        assert!(f.amplitudes().iter().zip(s.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn swap_factorizes_only_on_equal_inputs() {
        let mut rng = Rng::new(2, 0);
        let phi = PureState::new(rng.unit_vector(2)).unwrap();
        let s = PureState::new(rng.unit_vector(2)).unwrap();
        let r = extract_pointer_state(&swap(), &phi, &s, (2, 2)).unwrap();
        assert!(!r.factorizes);
        assert!(r.pointer_state.is_none());
        let r = extract_pointer_state(&swap(), &phi, &phi, (2, 2)).unwrap();
        assert!(r.factorizes);
    }

    #[test]
    fn cnot_cases() {
        let zero = PureState::basis(2, 0);
        let r = extract_pointer_state(&cnot(), &zero, &zero, (2, 2)).unwrap();
        assert!(r.factorizes);
        assert_eq!(r.pointer_state.unwrap(), zero);

        let r = extract_pointer_state(&cnot(), &PureState::plus(), &zero, (2, 2)).unwrap();
        assert!(!r.factorizes);
        assert!((r.fidelity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pointer_rejects_non_unitary() {
        let zero = PureState::basis(2, 0);
        let bad = ComplexMatrix::identity(4).scale_real(2.0);
        assert!(matches!(extract_pointer_state(&bad, &zero, &zero, (2, 2)), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn residual_branches() {
        // orthogonal inputs
        let (z0, z1) = (PureState::basis(2, 0), PureState::basis(2, 1));
        assert!(no_cloning_residual(&cnot(), &z0, &z1, &z0, (2, 2)).unwrap() < 1e-10);
        // equal pointers
        let mut rng = Rng::new(3, 0);
        let phi = PureState::new(rng.unit_vector(2)).unwrap();
        let psi = PureState::new(rng.unit_vector(2)).unwrap();
        let s = PureState::new(rng.unit_vector(2)).unwrap();
        assert!(no_cloning_residual(&ComplexMatrix::identity(4), &phi, &psi, &s, (2, 2)).unwrap() < 1e-10);
    }

    #[test]
    fn residual_on_controlled_unitaries() {
        let mut rng = Rng::new(4, 0);
        for _ in 0..20 {
            let targets: Vec<_> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
            let u = controlled_unitary(3, &targets).unwrap();
            let s = PureState::new(rng.unit_vector(2)).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let r =
                        no_cloning_residual(&u, &PureState::basis(3, i), &PureState::basis(3, j), &s, (3, 2)).unwrap();
                    assert!(r < 1e-10);
                }
            }
        }
    }

    #[test]
    fn residual_requires_premise() {
        let zero = PureState::basis(2, 0);
        assert!(matches!(
            no_cloning_residual(&cnot(), &PureState::plus(), &zero, &zero, (2, 2)),
            Err(Error::PremiseNotSatisfied { .. })
        ));
    }

    #[test]
    fn controlled_unitary_examples() {
        let eye = ComplexMatrix::identity(2);
        assert_eq!(controlled_unitary(2, &[eye.clone(), eye.clone()]).unwrap(), ComplexMatrix::identity(4));
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(cnot(), expected);
        assert!(controlled_unitary(2, std::slice::from_ref(&eye)).is_err());
        assert!(controlled_unitary(2, &[eye, ComplexMatrix::diag_real(&[1.0, 0.5])]).is_err());
    }

    #[test]
    fn controlled_unitary_structure() {
        let mut rng = Rng::new(5, 0);
        let targets: Vec<_> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let u = controlled_unitary(3, &targets).unwrap();
        assert!(u.unitarity_deviation() < 1e-10);
        for r in 0..6 {
            for c in 0..6 {
                if r / 2 != c / 2 {
                    assert_eq!(u[(r, c)], ZERO);
                }
            }
        }
        let psi = PureState::new(rng.unit_vector(2)).unwrap();
        for (i, v) in targets.iter().enumerate() {
            let res = extract_pointer_state(&u, &PureState::basis(3, i), &psi, (3, 2)).unwrap();
            let want = v.matvec(psi.amplitudes()).unwrap();
            let got = res.pointer_state.unwrap();
            assert!(got.amplitudes().iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }

    #[test]
    fn controlled_unitary_induced_channel_is_monotone() {
        let mut rng = Rng::new(6, 0);
        for _ in 0..20 {
            let targets: Vec<_> = (0..2).map(|_| haar_unitary(2, &mut rng)).collect();
            let u = controlled_unitary(2, &targets).unwrap();
            let env = PureState::new(rng.unit_vector(2)).unwrap().density();
            let ch = channel_from_dilation(&StinespringDilation::new(2, 2, u, env).unwrap()).unwrap();
            let e =
                Ensemble::new(rng.simplex(2), vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)]).unwrap();
            assert!(chi_monotonicity_slack(&ch, &e).unwrap() >= -1e-8);
            let mixed = Ensemble::uniform(vec![PureState::plus().density(), DensityMatrix::basis(2, 0)]).unwrap();
            assert!(chi_monotonicity_slack(&ch, &mixed).unwrap() >= -1e-8);
        }
    }

    #[test]
    fn cloning_gain_examples() {
        let orth = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)]).unwrap();
        assert!(cloning_chi_gain(&orth).unwrap().abs() < 1e-9);
        let same = Ensemble::uniform(vec![PureState::plus().density(), PureState::plus().density()]).unwrap();
        assert_eq!(cloning_chi_gain(&same).unwrap(), 0.0);
        let bb84 = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), PureState::plus().density()]).unwrap();
        assert!((cloning_chi_gain(&bb84).unwrap() - CLONE_GAIN).abs() < 1e-12);
        let mixed = Ensemble::uniform(vec![DensityMatrix::maximally_mixed(2), DensityMatrix::basis(2, 0)]).unwrap();
        assert!(matches!(cloning_chi_gain(&mixed), Err(Error::NotPure { .. })));
    }

    #[test]
    fn cloning_gain_is_strict_for_intermediate_overlaps() {
        let mut rng = Rng::new(7, 0);
        let mut sampled = 0;
        while sampled < 500 {
            let a = PureState::new(rng.unit_vector(2)).unwrap();
            let b = PureState::new(rng.unit_vector(2)).unwrap();
            let ov = inner(a.amplitudes(), b.amplitudes()).norm();
            if !(0.1..=0.9).contains(&ov) {
                continue;
            }
            sampled += 1;
            let e = Ensemble::uniform(vec![a.density(), b.density()]).unwrap();
            assert!(cloning_chi_gain(&e).unwrap() > 1e-3, "overlap {ov}");
        }
    }

    #[test]
    fn disentangle_examples() {
        let mut rng = Rng::new(8, 0);
        let r1 = crate::states::DensityMatrix::new(crate::random::ginibre_density(2, 2, &mut rng).unwrap()).unwrap();
        let r2 = crate::states::DensityMatrix::new(crate::random::ginibre_density(3, 2, &mut rng).unwrap()).unwrap();
        let prod = r1.kron(&r2);
        assert!(disentangle(&prod, (2, 3)).unwrap().matrix().max_abs_diff(prod.matrix()) < 1e-10);

        let bell = schmidt_state(2, &[0.5, 0.5]).unwrap().density();
        let quarter = DensityMatrix::maximally_mixed(4);
        assert!(disentangle(&bell, (2, 2)).unwrap().matrix().max_abs_diff(quarter.matrix()) < 1e-15);

        let partial = schmidt_state(2, &[0.9, 0.1]).unwrap().density();
        let d = ComplexMatrix::diag_real(&[0.9, 0.1]);
        assert!(disentangle(&partial, (2, 2)).unwrap().matrix().max_abs_diff(&d.kron(&d)) < 1e-15);

        assert!(disentangle(&bell, (2, 3)).is_err());
    }

    #[test]
    fn disentangle_is_idempotent() {
        let mut rng = Rng::new(9, 0);
        for _ in 0..20 {
            let psi = PureState::new(rng.unit_vector(6)).unwrap().density();
            let once = disentangle(&psi, (2, 3)).unwrap();
            let twice = disentangle(&once, (2, 3)).unwrap();
            assert!(once.matrix().max_abs_diff(twice.matrix()) < 1e-10);
        }
    }

    #[test]
    fn disentangle_gain_examples() {
        let prod = PureState::plus().kron(&PureState::basis(2, 1));
        assert!(disentangle_chi_gain(&prod, (2, 2)).unwrap().abs() < 1e-10);
        let bell = schmidt_state(2, &[0.5, 0.5]).unwrap();
        assert!((disentangle_chi_gain(&bell, (2, 2)).unwrap() - 2.0).abs() < 1e-12);
        let partial = schmidt_state(2, &[0.9, 0.1]).unwrap();
        assert!((disentangle_chi_gain(&partial, (2, 2)).unwrap() - DISENTANGLE_GAIN).abs() < 1e-12);
    }

    #[test]
    fn disentangle_gain_is_twice_entanglement_entropy() {
        let mut rng = Rng::new(10, 0);
        for (d1, d2) in [(2, 2), (2, 3), (3, 3)] {
            for _ in 0..20 {
                let psi = PureState::new(rng.unit_vector(d1 * d2)).unwrap();
                let gain = disentangle_chi_gain(&psi, (d1, d2)).unwrap();
                assert!((gain - 2.0 * schmidt_entropy(&psi, d1, d2)).abs() < 1e-9);
            }
        }
    }
}

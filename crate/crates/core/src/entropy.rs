//! Entropies and the Holevo χ quantity, all in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{sorted_sum, ComplexMatrix};
use crate::states::{check_probabilities, DensityMatrix, Ensemble, VALIDATION_TOL};

/// Eigenvalues with modulus below this are treated as zero before `λ log λ`.
pub const EIGEN_CLIP: f64 = 1e-12;

/// `−p log₂ p` with the `0 log 0 = 0` convention.
fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

pub(crate) fn shannon_unchecked(p: impl IntoIterator<Item = f64>) -> f64 {
    sorted_sum(p.into_iter().map(entropy_term).collect())
}

pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_probabilities(p)?;
    Ok(shannon_unchecked(p.iter().copied()))
}

/// Entropy of a spectrum, clipping `[−1e-12, 1e-12]` to zero.
fn spectral_entropy(eigenvalues: &[f64]) -> Result<f64> {
    if let Some(&l) = eigenvalues.iter().find(|&&l| l < -VALIDATION_TOL) {
        return Err(Error::NegativeEigenvalue(l));
    }
    let h = shannon_unchecked(eigenvalues.iter().map(|&l| if l.abs() <= EIGEN_CLIP { 0.0 } else { l.max(0.0) }));
    // an eigenvalue a hair above 1 would otherwise give a tiny negative entropy
    Ok(h.max(0.0))
}

/// `S(ρ) = −Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(&rho.eigenvalues())
}

/// Entropy of a square matrix that is a state up to round-off.
pub(crate) fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    spectral_entropy(&m.hermitian_eig()?.eigenvalues)
}

/// Holevo χ of an ensemble, with the entropies that make it up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiReport {
    pub chi: f64,
    pub mixture_entropy: f64,
    pub member_entropies: Vec<f64>,
}

/// `χ = S(Σ p_x ρ_x) − Σ p_x S(ρ_x)`.
///
/// Members with zero probability still get an entry in `member_entropies`
/// but do not contribute to the sum. When every member is the same matrix,
/// χ is reported as exactly zero.
pub fn holevo_chi(e: &Ensemble) -> Result<ChiReport> {
    let member_entropies = e.states().iter().map(von_neumann_entropy).collect::<Result<Vec<_>>>()?;
    let weighted =
        sorted_sum(e.probs().iter().zip(&member_entropies).filter(|(p, _)| **p > 0.0).map(|(p, s)| p * s).collect());
    let first = &e.states()[0];
    if e.states().iter().all(|s| s == first) {
        return Ok(ChiReport { chi: 0.0, mixture_entropy: weighted, member_entropies });
    }
    let mixture_entropy = von_neumann_entropy(&e.mix())?;
    Ok(ChiReport { chi: mixture_entropy - weighted, mixture_entropy, member_entropies })
}

pub(crate) fn chi(e: &Ensemble) -> Result<f64> {
    Ok(holevo_chi(e)?.chi)
}

/// Classical-quantum state `Σ_i p_i |i⟩⟨i| ⊗ ρ_i` with the flag register first.
pub fn cq_state(p: &[f64], flag_dim: usize, states: &[DensityMatrix]) -> Result<DensityMatrix> {
    check_probabilities(p)?;
    if p.len() != states.len() {
        return Err(Error::DimensionMismatch(format!("{} probabilities for {} states", p.len(), states.len())));
    }
    if flag_dim < p.len() {
        return Err(Error::DimensionMismatch(format!("flag dimension {flag_dim} cannot label {} members", p.len())));
    }
    let d = states[0].dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch("members differ in dimension".into()));
    }
    let mut out = ComplexMatrix::zeros(flag_dim * d, flag_dim * d);
    for (i, (pi, rho)) in p.iter().zip(states).enumerate() {
        for a in 0..d {
            for b in 0..d {
                out[(i * d + a, i * d + b)] = rho.matrix()[(a, b)] * *pi;
            }
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// `S(XY) + S(YZ) − S(XYZ) − S(Y)`, nonnegative by strong subadditivity.
pub fn ssa_slack(rho_xyz: &DensityMatrix, dims: (usize, usize, usize)) -> Result<f64> {
    let (dx, dy, dz) = dims;
    if rho_xyz.dim() != dx * dy * dz {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional state for subsystems {dx}x{dy}x{dz}",
            rho_xyz.dim()
        )));
    }
    let d = [dx, dy, dz];
    let m = rho_xyz.matrix();
    let s_xy = matrix_entropy(&m.partial_trace(&d, &[0, 1])?)?;
    let s_yz = matrix_entropy(&m.partial_trace(&d, &[1, 2])?)?;
    let s_y = matrix_entropy(&m.partial_trace(&d, &[1])?)?;
    let s_xyz = von_neumann_entropy(rho_xyz)?;
    Ok(s_xy + s_yz - s_xyz - s_y)
}

/// `χ^{XY} − χ^{X}` where the X ensemble traces Y out of every member.
pub fn chi_partial_trace_slack(e_joint: &Ensemble, dims: (usize, usize)) -> Result<f64> {
    let (dx, dy) = dims;
    if e_joint.dim() != dx * dy {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional members for subsystems {dx}x{dy}",
            e_joint.dim()
        )));
    }
    let reduced = e_joint.map_states(|s| s.partial_trace(&[dx, dy], &[0]))?;
    Ok(chi(e_joint)? - chi(&reduced)?)
}

/// `S(Σ p_i ρ_i) − Σ p_i S(ρ_i)`; this is χ, nonnegative by concavity of `S`.
pub fn concavity_slack(e: &Ensemble) -> Result<f64> {
    chi(e)
}

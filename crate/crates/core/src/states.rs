//! Density matrices, pure states and ensembles.

use serde::{Deserialize, Serialize};

use crate::error::{DensityViolation, Error, Result};
use crate::matrix::{kron_vec, norm_sqr, sorted_sum, Complex64, ComplexMatrix, ONE, ZERO};

/// Tolerance used when validating density matrices and ensembles.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance on the squared norm of a pure state.
pub const NORM_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        validate_density(m, VALIDATION_TOL)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.mat
    }
}

/// Checks all three density-matrix invariants at tolerance `tol`.
///
/// Every failed invariant is reported, each with its measured deviation.
pub fn validate_density(m: ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let mut violations = Vec::new();
    let herm = m.hermiticity_deviation();
    if herm > tol {
        violations.push(DensityViolation::NotHermitian { deviation: herm });
    }
    let trace_dev = (m.trace() - ONE).norm();
    if trace_dev > tol {
        violations.push(DensityViolation::NotUnitTrace { deviation: trace_dev });
    }
    let min_eig = m.hermitian_part().hermitian_eig()?.eigenvalues[0];
    if min_eig < -tol {
        violations.push(DensityViolation::NotPositive { deviation: -min_eig });
    }
    if violations.is_empty() {
        Ok(DensityMatrix { mat: m })
    } else {
        Err(Error::InvalidDensity(violations))
    }
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_density(m, VALIDATION_TOL)
    }

    /// Wraps a matrix known to be a state by construction.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    /// `|i⟩⟨i|` in dimension `d`.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d, "basis index out of range");
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, i)] = ONE;
        Self { mat: m }
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat.hermitian_eig().expect("density matrices are Hermitian").eigenvalues
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { mat: self.mat.kron(&other.mat) }
    }

    /// Reduced state on the subsystems in `keep`; see [`ComplexMatrix::partial_trace`].
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        Ok(Self { mat: self.mat.partial_trace(dims, keep)? })
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureRepr", into = "PureRepr")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

/// Wire form: `{"re": [...], "im": [...]}`.
#[derive(Serialize, Deserialize)]
struct PureRepr {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<PureRepr> for PureState {
    type Error = Error;

    fn try_from(r: PureRepr) -> Result<Self> {
        if r.re.len() != r.im.len() {
            return Err(Error::DimensionMismatch("re and im differ in length".into()));
        }
        PureState::new(r.re.into_iter().zip(r.im).map(|(a, b)| Complex64::new(a, b)).collect())
    }
}

impl From<PureState> for PureRepr {
    fn from(p: PureState) -> Self {
        PureRepr { re: p.amplitudes.iter().map(|z| z.re).collect(), im: p.amplitudes.iter().map(|z| z.im).collect() }
    }
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        let deviation = (norm_sqr(&amplitudes) - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&amplitudes).sqrt();
        if amplitudes.is_empty() || n < 1e-14 {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / n).collect() })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d, "basis index out of range");
        let mut v = vec![ZERO; d];
        v[i] = ONE;
        Self { amplitudes: v }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: vec![Complex64::new(s, 0.0); 2] }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { amplitudes: kron_vec(&self.amplitudes, &other.amplitudes) }
    }

    pub fn density(&self) -> DensityMatrix {
        density_from_pure(self)
    }
}

/// Rank-one projector `|v⟩⟨v|`.
pub fn density_from_pure(v: &PureState) -> DensityMatrix {
    let mat = ComplexMatrix::outer(&v.amplitudes, &v.amplitudes);
    DensityMatrix { mat }
}

/// Probability-weighted family of states sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr", into = "EnsembleRepr")]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

/// Wire form: `{"probs": [...], "states": [matrix, ...]}`.
#[derive(Serialize, Deserialize)]
struct EnsembleRepr {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl TryFrom<EnsembleRepr> for Ensemble {
    type Error = Error;

    fn try_from(r: EnsembleRepr) -> Result<Self> {
        Ensemble::new(r.probs, r.states)
    }
}

impl From<Ensemble> for EnsembleRepr {
    fn from(e: Ensemble) -> Self {
        EnsembleRepr { probs: e.probs, states: e.states }
    }
}

/// Checks that `p` is a probability vector within [`VALIDATION_TOL`].
pub(crate) fn check_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities("empty distribution".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {x} is negative or non-finite")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > VALIDATION_TOL {
        return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
    }
    Ok(())
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimensionMismatch(format!("{} probabilities for {} states", probs.len(), states.len())));
        }
        check_probabilities(&probs)?;
        let d = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "member of dimension {} in a {d}-dimensional ensemble",
                s.dim()
            )));
        }
        Ok(Self { probs, states })
    }

    /// Equiprobable ensemble over the given states.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let k = states.len().max(1);
        Self::new(vec![1.0 / k as f64; states.len()], states)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.probs.iter().copied().zip(&self.states)
    }

    /// Same probabilities with every member replaced by `f(member)`.
    pub fn map_states(&self, f: impl FnMut(&DensityMatrix) -> Result<DensityMatrix>) -> Result<Self> {
        let states = self.states.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(self.probs.clone(), states)
    }

    /// `Σ_x p_x ρ_x`.
    pub fn mix(&self) -> DensityMatrix {
        mix(self)
    }
}

/// Convex combination `Σ_x p_x ρ_x`.
///
/// Each entry is summed in sorted order, so reordering the members gives a
/// bit-identical result.
pub fn mix(e: &Ensemble) -> DensityMatrix {
    let d = e.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let re = sorted_sum(e.iter().map(|(p, s)| p * s.matrix()[(i, j)].re).collect());
            let im = sorted_sum(e.iter().map(|(p, s)| p * s.matrix()[(i, j)].im).collect());
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    DensityMatrix::from_trusted(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre_density, Rng};

    #[test]
    fn pure_projectors() {
        let r0 = density_from_pure(&PureState::basis(2, 0));
        assert_eq!(r0.matrix(), &ComplexMatrix::diag_real(&[1.0, 0.0]));
        let rp = density_from_pure(&PureState::plus());
        assert!(rp.matrix().max_abs_diff(&ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])) < 1e-15);
    }

    #[test]
    fn random_pure_projectors_are_idempotent() {
        let mut rng = Rng::new(77, 0);
        for d in 2..6 {
            let v = PureState::new(rng.unit_vector(d)).unwrap();
            let rho = density_from_pure(&v);
            let sq = rho.matrix() * rho.matrix();
            assert!(sq.max_abs_diff(rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        assert!(matches!(PureState::from_real(&[1.0, 1.0]), Err(Error::NotNormalized { .. })));
        assert!(PureState::normalized(vec![ZERO, ZERO]).is_err());
    }

    #[test]
    fn mix_examples() {
        let mut rng = Rng::new(1, 0);
        let rho = DensityMatrix::new(ginibre_density(3, 2, &mut rng).unwrap()).unwrap();
        let single = Ensemble::new(vec![1.0], vec![rho.clone()]).unwrap();
        assert!(single.mix().matrix().max_abs_diff(rho.matrix()) == 0.0);

        let bal = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)]).unwrap();
        assert!(bal.mix().matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let bb84 = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), PureState::plus().density()]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]);
        assert!(bb84.mix().matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn validate_examples() {
        assert!(validate_density(ComplexMatrix::identity(2).scale_real(0.5), 1e-9).is_ok());

        // diag(2, -1) has unit trace, so only positivity fails
        match validate_density(ComplexMatrix::diag_real(&[2.0, -1.0]), 1e-9) {
            Err(Error::InvalidDensity(v)) => {
                assert_eq!(v, vec![DensityViolation::NotPositive { deviation: 1.0 }]);
            }
            other => panic!("expected violations, got {other:?}"),
        }
        match validate_density(ComplexMatrix::diag_real(&[2.0, -0.5]), 1e-9) {
            Err(Error::InvalidDensity(v)) => {
                assert!(v.contains(&DensityViolation::NotUnitTrace { deviation: 0.5 }));
                assert!(v.contains(&DensityViolation::NotPositive { deviation: 0.5 }));
            }
            other => panic!("expected violations, got {other:?}"),
        }

        let mut m = ComplexMatrix::diag_real(&[0.5, 0.5]);
        m[(0, 1)] = Complex64::new(0.0, 1e-12);
        m[(1, 0)] = Complex64::new(0.0, 1e-12);
        assert!(validate_density(m, 1e-9).is_ok());
    }

    #[test]
    fn validate_reports_hermiticity() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        match validate_density(m, 1e-9) {
            Err(Error::InvalidDensity(v)) => {
                assert!(matches!(v[0], DensityViolation::NotHermitian { deviation } if (deviation - 0.1).abs() < 1e-12))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ensemble_validation() {
        let r = DensityMatrix::basis(2, 0);
        assert!(Ensemble::new(vec![0.5, 0.4], vec![r.clone(), r.clone()]).is_err());
        assert!(Ensemble::new(vec![1.5, -0.5], vec![r.clone(), r.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0], vec![]).is_err());
        assert!(Ensemble::new(vec![0.5, 0.5], vec![r.clone(), DensityMatrix::basis(3, 0)]).is_err());
        assert!(Ensemble::new(vec![1.0, 0.0], vec![r.clone(), r]).is_ok());
    }

    #[test]
    fn ensemble_json_wire_format() {
        let e = Ensemble::uniform(vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert_eq!(v["probs"], serde_json::json!([0.5, 0.5]));
        assert_eq!(v["states"][1]["re"], serde_json::json!([0.0, 0.0, 0.0, 1.0]));
        let back: Ensemble = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}

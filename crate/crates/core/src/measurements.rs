//! POVMs, measured mutual information and a search for accessible information.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{chi, shannon_unchecked};
use crate::error::{Error, Result};
use crate::matrix::{sorted_sum, Complex64, ComplexMatrix};
use crate::random::{haar_unitary, Rng};
use crate::states::{Ensemble, VALIDATION_TOL};

/// Joint probabilities with modulus below this are treated as zero.
pub const PROB_CLIP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmRepr", into = "PovmRepr")]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

/// Wire form: `{"dim": n, "elements": [matrix, ...]}`.
#[derive(Serialize, Deserialize)]
struct PovmRepr {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl TryFrom<PovmRepr> for Povm {
    type Error = Error;

    fn try_from(r: PovmRepr) -> Result<Self> {
        Povm::new(r.dim, r.elements)
    }
}

impl From<Povm> for PovmRepr {
    fn from(p: Povm) -> Self {
        PovmRepr { dim: p.dim, elements: p.elements }
    }
}

impl Povm {
    pub fn new(dim: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPovm("no elements".into()));
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (y, el) in elements.iter().enumerate() {
            if (el.rows(), el.cols()) != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "element {y} is {}x{}, expected {dim}x{dim}",
                    el.rows(),
                    el.cols()
                )));
            }
            let herm = el.hermiticity_deviation();
            if herm > VALIDATION_TOL {
                return Err(Error::InvalidPovm(format!("element {y} not Hermitian (deviation {herm:e})")));
            }
            let min = el.hermitian_part().hermitian_eig()?.eigenvalues[0];
            if min < -VALIDATION_TOL {
                return Err(Error::InvalidPovm(format!("element {y} has eigenvalue {min:e}")));
            }
            sum = &sum + el;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > VALIDATION_TOL {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {dev:e}")));
        }
        Ok(Self { dim, elements })
    }

    /// The trivial measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, elements: vec![ComplexMatrix::identity(dim)] }
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let elements = (0..basis.cols())
            .map(|j| {
                let v = basis.column(j);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::new(basis.rows(), elements)
    }

    /// Rank-one POVM `{S^{-1/2}|a_y⟩⟨a_y|S^{-1/2}}` with `S = Σ_y |a_y⟩⟨a_y|`.
    pub fn from_vectors(vectors: &[Vec<Complex64>]) -> Result<Self> {
        let (elements, _) = rank_one_elements(vectors)?;
        let dim = vectors[0].len();
        Self::new(dim, elements)
    }

    /// Random full-rank-mixture POVM: Ginibre positives normalized by `S^{-1/2}`.
    pub fn random(dim: usize, outcomes: usize, rng: &mut Rng) -> Result<Self> {
        if outcomes == 0 {
            return Err(Error::InvalidArgument("POVM needs at least one outcome".into()));
        }
        let mut ranks: Vec<usize> = (0..outcomes).map(|_| rng.range_inclusive(1, dim)).collect();
        // the ranks must add up to at least `dim` for the sum to be invertible
        let mut deficit = dim.saturating_sub(ranks.iter().sum());
        for r in ranks.iter_mut() {
            let bump = deficit.min(dim - *r);
            *r += bump;
            deficit -= bump;
        }
        let positives: Vec<ComplexMatrix> = ranks
            .iter()
            .map(|&rank| {
                let g = rng.ginibre(dim, rank);
                &g * &g.dagger()
            })
            .collect();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for p in &positives {
            sum = &sum + p;
        }
        let root = inverse_sqrt(&sum)?;
        let elements = positives.iter().map(|p| (&(&root * p) * &root).hermitian_part()).collect();
        Self::new(dim, elements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }
}

/// `S^{-1/2}` for positive definite `S`.
fn inverse_sqrt(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = s.hermitian_part().hermitian_eig()?;
    if eig.eigenvalues[0] <= 1e-12 * eig.eigenvalues.last().copied().unwrap_or(1.0).max(1.0) {
        return Err(Error::InvalidArgument("frame operator is singular".into()));
    }
    Ok(eig.map(|l| 1.0 / l.sqrt()))
}

/// Completeness-restored elements and the rescaled vectors `S^{-1/2}|a_y⟩`.
fn rank_one_elements(vectors: &[Vec<Complex64>]) -> Result<(Vec<ComplexMatrix>, Vec<Vec<Complex64>>)> {
    let d = vectors.first().map(Vec::len).ok_or_else(|| Error::InvalidPovm("no vectors".into()))?;
    let mut frame = ComplexMatrix::zeros(d, d);
    for v in vectors {
        frame = &frame + &ComplexMatrix::outer(v, v);
    }
    let root = inverse_sqrt(&frame)?;
    let rescaled: Vec<Vec<Complex64>> = vectors.iter().map(|v| root.matvec(v)).collect::<Result<_>>()?;
    let elements = rescaled.iter().map(|w| ComplexMatrix::outer(w, w)).collect();
    Ok((elements, rescaled))
}

/// `Re Tr(E ρ)`.
fn expectation(el: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    let d = el.rows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (el[(i, j)] * rho[(j, i)]).re;
        }
    }
    acc
}

fn mutual_information_of(e: &Ensemble, elements: &[ComplexMatrix]) -> Result<f64> {
    let nx = e.len();
    let ny = elements.len();
    let mut joint = vec![0.0; nx * ny];
    for (x, (px, rho)) in e.iter().enumerate() {
        for (y, el) in elements.iter().enumerate() {
            let q = px * expectation(el, rho.matrix());
            if q < -VALIDATION_TOL {
                return Err(Error::InvalidProbabilities(format!("joint probability {q:e} for outcome {y}")));
            }
            joint[x * ny + y] = if q.abs() <= PROB_CLIP { 0.0 } else { q.max(0.0) };
        }
    }
    let total = sorted_sum(joint.clone());
    if total <= 0.0 {
        return Err(Error::InvalidProbabilities("joint distribution vanishes".into()));
    }
    for q in &mut joint {
        *q /= total;
    }
    let px: Vec<f64> = (0..nx).map(|x| sorted_sum(joint[x * ny..(x + 1) * ny].to_vec())).collect();
    let py: Vec<f64> = (0..ny).map(|y| sorted_sum((0..nx).map(|x| joint[x * ny + y]).collect())).collect();
    Ok(shannon_unchecked(px) + shannon_unchecked(py) - shannon_unchecked(joint))
}

/// `H(X:Y)` for outcome distribution `p(x, y) = p_x Tr(E_y ρ_x)`.
pub fn mutual_information(e: &Ensemble, m: &Povm) -> Result<f64> {
    if e.dim() != m.dim {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional ensemble measured by a {}-dimensional POVM",
            e.dim(),
            m.dim
        )));
    }
    mutual_information_of(e, &m.elements)
}

/// `χ − H(X:Y)`, nonnegative by the Holevo bound.
pub fn holevo_gap(e: &Ensemble, m: &Povm) -> Result<f64> {
    let mi = mutual_information(e, m)?;
    Ok(chi(e)? - mi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessibleInfoResult {
    pub best_mutual_info: f64,
    pub chi_upper_bound: f64,
    #[serde(rename = "povm")]
    pub best_povm: Povm,
    pub restarts_used: usize,
    pub converged: bool,
}

/// `min(d², 2·|ensemble|)`, raised to `d` so rank-one elements can be complete.
pub fn default_outcomes(e: &Ensemble) -> usize {
    let d = e.dim();
    (d * d).min(2 * e.len()).max(d)
}

const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-6;
const MIN_GAIN: f64 = 1e-12;

struct RestartOutcome {
    mutual_info: f64,
    vectors: Vec<Vec<Complex64>>,
    last_improvement: usize,
}

fn ascend(e: &Ensemble, outcomes: usize, iters: usize, mut rng: Rng) -> Result<RestartOutcome> {
    let d = e.dim();
    let w = haar_unitary(outcomes, &mut rng);
    let start: Vec<Vec<Complex64>> = (0..outcomes).map(|y| (0..d).map(|i| w[(y, i)].conj()).collect()).collect();
    let (elements, mut vectors) = rank_one_elements(&start)?;
    let mut best = mutual_information_of(e, &elements)?;
    let mut step = INITIAL_STEP;
    let mut last_improvement = 0;

    for it in 1..=iters {
        let proposal: Vec<Vec<Complex64>> =
            vectors.iter().map(|v| v.iter().map(|z| z * (rng.complex_normal() * step).exp()).collect()).collect();
        let accepted = match rank_one_elements(&proposal) {
            Ok((elements, rescaled)) => {
                let mi = mutual_information_of(e, &elements)?;
                if mi > best + MIN_GAIN {
                    best = mi;
                    vectors = rescaled;
                    true
                } else {
                    false
                }
            }
            Err(Error::InvalidArgument(_)) => false,
            Err(err) => return Err(err),
        };
        if accepted {
            last_improvement = it;
            step = (step * 2.0).min(INITIAL_STEP);
        } else {
            step = (step * 0.5).max(MIN_STEP);
        }
    }
    Ok(RestartOutcome { mutual_info: best, vectors, last_improvement })
}

/// Random-restart local ascent over rank-one POVMs.
///
/// Each restart starts from the rows of a random isometry drawn from
/// `rng.fork(restart)`, perturbs the amplitude vectors multiplicatively and
/// restores completeness with `S^{-1/2}`. Restarts run in parallel; the best
/// result (lowest restart index on ties) is returned, so the output does not
/// depend on scheduling. The returned value is a lower bound on the
/// accessible information.
pub fn optimize_accessible_info(
    e: &Ensemble,
    outcomes: usize,
    restarts: usize,
    iters: usize,
    rng: &Rng,
) -> Result<AccessibleInfoResult> {
    let d = e.dim();
    if outcomes < 2 || outcomes < d {
        return Err(Error::InvalidArgument(format!(
            "need at least max(2, d) = {} outcomes for rank-one elements, got {outcomes}",
            d.max(2)
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let runs = (0..restarts)
        .into_par_iter()
        .map(|r| ascend(e, outcomes, iters, rng.fork(r as u64)))
        .collect::<Result<Vec<_>>>()?;
    let best =
        runs.into_iter().reduce(|a, b| if b.mutual_info > a.mutual_info { b } else { a }).expect("restarts >= 1");
    let best_povm = Povm::from_vectors(&best.vectors)?;
    let converged = best.last_improvement + 10 <= iters;
    Ok(AccessibleInfoResult {
        best_mutual_info: best.mutual_info,
        chi_upper_bound: chi(e)?,
        best_povm,
        restarts_used: restarts,
        converged,
    })
}

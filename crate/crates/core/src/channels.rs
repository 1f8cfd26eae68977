//! Quantum operations in Kraus form and their Stinespring dilations.
//!
//! A [`StinespringDilation`] realizes `ε(ρ) = tr_E[U(ρ ⊗ ρ^E)U†]` with the
//! system as subsystem 0 and the environment as subsystem 1 of `U`.

use serde::{Deserialize, Serialize};

use crate::entropy::chi;
use crate::error::{Error, Result};
use crate::matrix::{inner, norm_sqr, Complex64, ComplexMatrix, ZERO};
use crate::random::{haar_unitary, Rng};
use crate::states::{validate_density, DensityMatrix, Ensemble, VALIDATION_TOL};

/// Completeness and unitarity tolerance.
pub const CHANNEL_TOL: f64 = 1e-9;
/// Kraus operators whose largest entry is below this are dropped before dilating.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

/// Wire form: `{"dim_in": n, "dim_out": n, "kraus": [matrix, ...]}`.
#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl TryFrom<ChannelRepr> for QuantumChannel {
    type Error = Error;

    fn try_from(r: ChannelRepr) -> Result<Self> {
        let ch = channel_from_kraus(r.kraus)?;
        if (ch.dim_in, ch.dim_out) != (r.dim_in, r.dim_out) {
            return Err(Error::DimensionMismatch(format!(
                "declared {}->{} but Kraus operators are {}->{}",
                r.dim_in, r.dim_out, ch.dim_in, ch.dim_out
            )));
        }
        Ok(ch)
    }
}

impl From<QuantumChannel> for ChannelRepr {
    fn from(c: QuantumChannel) -> Self {
        ChannelRepr { dim_in: c.dim_in, dim_out: c.dim_out, kraus: c.kraus }
    }
}

/// Builds a channel from operator-sum form, checking `Σ K†K = I`.
pub fn channel_from_kraus(ops: Vec<ComplexMatrix>) -> Result<QuantumChannel> {
    let first = ops.first().ok_or_else(|| Error::InvalidArgument("no Kraus operators".into()))?;
    let (dim_out, dim_in) = (first.rows(), first.cols());
    if let Some(k) = ops.iter().find(|k| (k.rows(), k.cols()) != (dim_out, dim_in)) {
        return Err(Error::DimensionMismatch(format!(
            "Kraus operator of shape {}x{} among {dim_out}x{dim_in}",
            k.rows(),
            k.cols()
        )));
    }
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for k in &ops {
        sum = &sum + &(&k.dagger() * k);
    }
    let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim_in));
    if deviation > CHANNEL_TOL {
        return Err(Error::IncompleteKraus { deviation });
    }
    Ok(QuantumChannel { dim_in, dim_out, kraus: ops })
}

impl QuantumChannel {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn identity(d: usize) -> Self {
        Self { dim_in: d, dim_out: d, kraus: vec![ComplexMatrix::identity(d)] }
    }

    /// `ρ ↦ UρU†`.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let deviation = u.unitarity_deviation();
        if deviation > CHANNEL_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        channel_from_kraus(vec![u])
    }

    /// `ρ ↦ (1 − p)ρ + p·I/d`, realized with the `d²` Weyl operators.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("depolarizing parameter {p} outside [0, 1]")));
        }
        let n = (d * d) as f64;
        let mut kraus = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let w = if a == 0 && b == 0 { 1.0 - p + p / n } else { p / n };
                kraus.push(weyl(d, a, b).scale_real(w.sqrt()));
            }
        }
        channel_from_kraus(kraus)
    }

    /// Complete dephasing in the computational basis, `{|k⟩⟨k|}`.
    pub fn dephasing(d: usize) -> Self {
        Self { dim_in: d, dim_out: d, kraus: (0..d).map(|k| projector(d, k)).collect() }
    }

    /// Decay of every excited level to `|0⟩` with probability `γ`.
    pub fn amplitude_damping(d: usize, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) || d < 2 {
            return Err(Error::InvalidArgument(format!(
                "amplitude damping needs d >= 2 and gamma in [0, 1], got d={d}, gamma={gamma}"
            )));
        }
        let mut k0 = ComplexMatrix::zeros(d, d);
        k0[(0, 0)] = Complex64::new(1.0, 0.0);
        for k in 1..d {
            k0[(k, k)] = Complex64::new((1.0 - gamma).sqrt(), 0.0);
        }
        let mut kraus = vec![k0];
        for k in 1..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(0, k)] = Complex64::new(gamma.sqrt(), 0.0);
            kraus.push(m);
        }
        channel_from_kraus(kraus)
    }

    /// Non-selective projective measurement in the basis given by the columns of `basis`.
    pub fn projective_measurement(basis: &ComplexMatrix) -> Result<Self> {
        let deviation = basis.unitarity_deviation();
        if deviation > CHANNEL_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let kraus = (0..basis.cols())
            .map(|j| {
                let v = basis.column(j);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        channel_from_kraus(kraus)
    }

    /// `Σ_i K_i ρ K_i†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply(self, rho)
    }

    /// The same channel with the fewest Kraus operators, at most `dim_in·dim_out`.
    ///
    /// Diagonalizes the Gram matrix `G_ij = Tr(K_i† K_j)` and mixes the
    /// operators with its eigenvectors; combinations with vanishing norm are
    /// dropped.
    pub fn minimal_kraus(&self) -> Result<Self> {
        let n = self.kraus.len();
        let gram = ComplexMatrix::from_fn(n, n, |i, j| {
            let (a, b) = (self.kraus[i].as_slice(), self.kraus[j].as_slice());
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        });
        let eig = gram.hermitian_eig()?;
        let cutoff = 1e-14 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
        let mut kraus = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate().rev() {
            if lambda <= cutoff {
                continue;
            }
            let mut op = ComplexMatrix::zeros(self.dim_out, self.dim_in);
            for (j, kj) in self.kraus.iter().enumerate() {
                op = &op + &kj.scale(eig.eigenvectors[(j, k)]);
            }
            kraus.push(op);
        }
        channel_from_kraus(kraus)
    }
}

fn projector(d: usize, k: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(k, k)] = Complex64::new(1.0, 0.0);
    m
}

/// `X^a Z^b` with `X|j⟩ = |j+1⟩` and `Z|j⟩ = ω^j|j⟩`.
fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let phase = 2.0 * std::f64::consts::PI * ((b * j) % d) as f64 / d as f64;
        m[((j + a) % d, j)] = Complex64::from_polar(1.0, phase);
    }
    m
}

pub fn apply(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimensionMismatch(format!(
            "channel expects dimension {}, state has {}",
            ch.dim_in,
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(ch.dim_out, ch.dim_out);
    for k in &ch.kraus {
        out = &out + &k.conjugate(rho.matrix())?;
    }
    validate_density(out, VALIDATION_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DilationRepr", into = "DilationRepr")]
pub struct StinespringDilation {
    dim_sys: usize,
    dim_env: usize,
    env_state: DensityMatrix,
    unitary: ComplexMatrix,
}

/// Wire form: `{"dim_sys": n, "dim_env": m, "unitary": matrix, "env_state": matrix}`.
#[derive(Serialize, Deserialize)]
struct DilationRepr {
    dim_sys: usize,
    dim_env: usize,
    unitary: ComplexMatrix,
    env_state: DensityMatrix,
}

impl TryFrom<DilationRepr> for StinespringDilation {
    type Error = Error;

    fn try_from(r: DilationRepr) -> Result<Self> {
        StinespringDilation::new(r.dim_sys, r.dim_env, r.unitary, r.env_state)
    }
}

impl From<StinespringDilation> for DilationRepr {
    fn from(d: StinespringDilation) -> Self {
        DilationRepr { dim_sys: d.dim_sys, dim_env: d.dim_env, unitary: d.unitary, env_state: d.env_state }
    }
}

impl StinespringDilation {
    pub fn new(dim_sys: usize, dim_env: usize, unitary: ComplexMatrix, env_state: DensityMatrix) -> Result<Self> {
        let n = dim_sys * dim_env;
        if (unitary.rows(), unitary.cols()) != (n, n) || env_state.dim() != dim_env {
            return Err(Error::DimensionMismatch(format!(
                "dilation {dim_sys}x{dim_env} with {}x{} unitary and {}-dimensional environment",
                unitary.rows(),
                unitary.cols(),
                env_state.dim()
            )));
        }
        let deviation = unitary.unitarity_deviation();
        if deviation > CHANNEL_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { dim_sys, dim_env, env_state, unitary })
    }

    /// Haar-random interaction with the environment prepared in `|0⟩`.
    pub fn haar(dim_sys: usize, dim_env: usize, rng: &mut Rng) -> Self {
        let unitary = haar_unitary(dim_sys * dim_env, rng);
        Self { dim_sys, dim_env, env_state: DensityMatrix::basis(dim_env, 0), unitary }
    }

    pub fn dim_sys(&self) -> usize {
        self.dim_sys
    }

    pub fn dim_env(&self) -> usize {
        self.dim_env
    }

    pub fn env_state(&self) -> &DensityMatrix {
        &self.env_state
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// Evaluates `tr_E[U(ρ ⊗ ρ^E)U†]` directly on the joint space.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_sys {
            return Err(Error::DimensionMismatch(format!(
                "dilation expects dimension {}, state has {}",
                self.dim_sys,
                rho.dim()
            )));
        }
        let joint = self.unitary.conjugate(rho.kron(&self.env_state).matrix())?;
        let reduced = joint.partial_trace(&[self.dim_sys, self.dim_env], &[0])?;
        validate_density(reduced, VALIDATION_TOL)
    }
}

/// Kraus operators `K_i = (I ⊗ ⟨i|) U (I ⊗ |e⟩)` of a dilation.
///
/// A mixed environment `Σ_k λ_k |e_k⟩⟨e_k|` contributes `√λ_k`-weighted
/// operators for each eigenvector, which is the Kraus set of its
/// purification.
pub fn channel_from_dilation(dil: &StinespringDilation) -> Result<QuantumChannel> {
    let (d, m) = (dil.dim_sys, dil.dim_env);
    let deviation = dil.unitary.unitarity_deviation();
    if deviation > CHANNEL_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let env = dil.env_state.matrix();
    let is_diagonal = (0..m).all(|i| (0..m).all(|j| i == j || env[(i, j)] == ZERO));
    let components: Vec<(f64, Vec<Complex64>)> = if is_diagonal {
        (0..m)
            .map(|k| {
                let mut e = vec![ZERO; m];
                e[k] = Complex64::new(1.0, 0.0);
                (env[(k, k)].re, e)
            })
            .filter(|(w, _)| *w > PRUNE_TOL)
            .collect()
    } else {
        let eig = env.hermitian_eig()?;
        (0..m).map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k))).filter(|(w, _)| *w > PRUNE_TOL).collect()
    };

    let u = &dil.unitary;
    let mut kraus = Vec::with_capacity(m * components.len());
    for (weight, e) in &components {
        let w = weight.sqrt();
        for i in 0..m {
            let k = ComplexMatrix::from_fn(d, d, |a, b| {
                let s: Complex64 = (0..m).map(|j| u[(a * m + i, b * m + j)] * e[j]).sum();
                s * w
            });
            kraus.push(k);
        }
    }
    channel_from_kraus(kraus)
}

/// Stinespring dilation of a square channel with the environment in `|0⟩`.
///
/// The isometry `V|ψ⟩ = Σ_i K_i|ψ⟩ ⊗ |i⟩` fills the columns of `U` that act
/// on `|ψ⟩ ⊗ |0⟩`; the rest are completed by orthonormalizing random
/// vectors drawn from `rng`.
pub fn dilation_from_kraus(ch: &QuantumChannel, rng: &mut Rng) -> Result<StinespringDilation> {
    if ch.dim_in != ch.dim_out {
        return Err(Error::DimensionMismatch(format!(
            "dilation needs a square channel, got {}->{}",
            ch.dim_in, ch.dim_out
        )));
    }
    let d = ch.dim_in;
    let kraus: Vec<&ComplexMatrix> = ch.kraus.iter().filter(|k| k.max_abs() >= PRUNE_TOL).collect();
    let m = kraus.len();
    if m > d * d {
        return Err(Error::TooManyKraus { count: m, bound: d * d });
    }
    let n = d * m;
    let mut u = ComplexMatrix::zeros(n, n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for b in 0..d {
        let col: Vec<Complex64> = (0..n).map(|r| kraus[r % m][(r / m, b)]).collect();
        basis.push(col);
    }
    let mut free_cols = Vec::new();
    for b in 0..d {
        for j in 1..m {
            free_cols.push(b * m + j);
        }
    }
    while basis.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = norm_sqr(&v).sqrt();
        if norm < 1e-6 {
            continue;
        }
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    let col_index: Vec<usize> = (0..d).map(|b| b * m).chain(free_cols).collect();
    for (col, &j) in basis.iter().zip(&col_index) {
        for (r, z) in col.iter().enumerate() {
            u[(r, j)] = *z;
        }
    }
    StinespringDilation::new(d, m, u, DensityMatrix::basis(m, 0))
}

/// Maps every member through the channel, keeping the probabilities.
pub fn apply_to_ensemble(ch: &QuantumChannel, e: &Ensemble) -> Result<Ensemble> {
    e.map_states(|s| apply(ch, s))
}

/// `χ(e) − χ(ε(e))`, nonnegative for every quantum operation.
pub fn chi_monotonicity_slack(ch: &QuantumChannel, e: &Ensemble) -> Result<f64> {
    Ok(chi(e)? - chi(&apply_to_ensemble(ch, e)?)?)
}

/// `|χ({p_x, env ⊗ ρ_x}) − χ({p_x, ρ_x})|`.
pub fn ancilla_invariance_slack(e: &Ensemble, env: &DensityMatrix) -> Result<f64> {
    let joint = e.map_states(|s| Ok(env.kron(s)))?;
    Ok((chi(&joint)? - chi(e)?).abs())
}

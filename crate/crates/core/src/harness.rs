//! Seeded randomized verification campaigns.
//!
//! Every trial draws its inputs from `Rng::new(seed, stream)` with
//! `stream = (check ordinal << 32) | trial index`, so a trial can be replayed
//! from its report entry alone and results are independent of how trials are
//! scheduled across threads.
//!
//! Each check produces a *slack*. Inequalities report the slack directly
//! (nonnegative when the inequality holds); identities report minus the
//! absolute deviation. A trial violates the check when its slack is below
//! `-tolerance`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    ancilla_invariance_slack, channel_from_dilation, chi_monotonicity_slack, QuantumChannel, StinespringDilation,
};
use crate::entropy::{
    chi_partial_trace_slack, concavity_slack, cq_state, shannon_entropy, ssa_slack, von_neumann_entropy,
};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::measurements::{holevo_gap, Povm};
use crate::no_go::{cloning_chi_gain, controlled_unitary, disentangle_chi_gain, no_cloning_residual};
use crate::random::{ginibre_density, haar_unitary, phase_diagonal, Rng};
use crate::states::{DensityMatrix, Ensemble, PureState};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 6;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    ChiMonotone,
    ChiUnitaryInvariant,
    ChiAncillaInvariant,
    ChiPartialTraceMonotone,
    Ssa,
    CqEntropyIdentity,
    HolevoBound,
    Concavity,
    NoCloningResidual,
    CloneChiGain,
    DisentangleChiGain,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::ChiMonotone,
        Check::ChiUnitaryInvariant,
        Check::ChiAncillaInvariant,
        Check::ChiPartialTraceMonotone,
        Check::Ssa,
        Check::CqEntropyIdentity,
        Check::HolevoBound,
        Check::Concavity,
        Check::NoCloningResidual,
        Check::CloneChiGain,
        Check::DisentangleChiGain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ChiMonotone => "chi_monotone",
            Check::ChiUnitaryInvariant => "chi_unitary_invariant",
            Check::ChiAncillaInvariant => "chi_ancilla_invariant",
            Check::ChiPartialTraceMonotone => "chi_partial_trace_monotone",
            Check::Ssa => "ssa",
            Check::CqEntropyIdentity => "cq_entropy_identity",
            Check::HolevoBound => "holevo_bound",
            Check::Concavity => "concavity",
            Check::NoCloningResidual => "no_cloning_residual",
            Check::CloneChiGain => "clone_chi_gain",
            Check::DisentangleChiGain => "disentangle_chi_gain",
        }
    }

    fn ordinal(self) -> u64 {
        Check::ALL.iter().position(|&c| c == self).expect("registered") as u64
    }

    /// Stream of trial `index` for this check.
    pub fn stream(self, index: u64) -> u64 {
        (self.ordinal() << 32) | index
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Campaign parameters; also the schema of the `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    /// A registered check name or `"all"`.
    pub check: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub ensemble_size: usize,
    pub tolerance: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self { check: "all".into(), dim: 2, trials: 1000, seed: 0, ensemble_size: 4, tolerance: DEFAULT_TOLERANCE }
    }
}

impl CampaignConfig {
    pub fn new(check: impl Into<String>, dim: usize, trials: usize, seed: u64) -> Self {
        Self { check: check.into(), dim, trials, seed, ..Self::default() }
    }

    /// Checks selected by this config, in registration order.
    pub fn checks(&self) -> Result<Vec<Check>> {
        if self.check == "all" {
            Ok(Check::ALL.to_vec())
        } else {
            Ok(vec![self.check.parse()?])
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.checks()?;
        if !(MIN_DIM..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("dim {} outside {MIN_DIM}..={MAX_DIM}", self.dim)));
        }
        if !(2..=6).contains(&self.ensemble_size) {
            return Err(Error::InvalidArgument(format!("ensemble_size {} outside 2..=6", self.ensemble_size)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance {} must be finite and nonnegative", self.tolerance)));
        }
        Ok(())
    }
}

/// How trials are spread over threads. Never changes results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Execution {
    pub serial: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// Complete inputs of one trial.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    EnsembleChannel { ensemble: Ensemble, dilation: StinespringDilation },
    EnsembleUnitary { ensemble: Ensemble, unitary: ComplexMatrix },
    EnsembleAncilla { ensemble: Ensemble, env: DensityMatrix },
    BipartiteEnsemble { ensemble: Ensemble, dims: (usize, usize) },
    Tripartite { state: DensityMatrix, dims: (usize, usize, usize) },
    ClassicalQuantum { probs: Vec<f64>, states: Vec<DensityMatrix> },
    EnsemblePovm { ensemble: Ensemble, povm: Povm },
    Ensemble { ensemble: Ensemble },
    Factorizing { unitary: ComplexMatrix, phi: PureState, psi: PureState, s: PureState, dims: (usize, usize) },
    PureBipartite { state: PureState, dims: (usize, usize) },
}

fn random_state(d: usize, rng: &mut Rng) -> DensityMatrix {
    let rank = rng.range_inclusive(1, d);
    DensityMatrix::from_trusted(ginibre_density(d, rank, rng).expect("rank in range"))
}

/// Ensemble with `2..=max_size` Ginibre members and simplex-uniform weights.
pub fn random_ensemble(d: usize, max_size: usize, rng: &mut Rng) -> Ensemble {
    let k = rng.range_inclusive(2, max_size.max(2));
    let probs = rng.simplex(k);
    let states = (0..k).map(|_| random_state(d, rng)).collect();
    Ensemble::new(probs, states).expect("valid by construction")
}

fn random_pure(d: usize, rng: &mut Rng) -> PureState {
    PureState::new(rng.unit_vector(d)).expect("unit vector")
}

/// `V = Q·diag(e^{iθ})·Q†` whose first two eigenphases coincide; returns `V` and `Q`.
fn degenerate_unitary(d: usize, rng: &mut Rng) -> (ComplexMatrix, ComplexMatrix) {
    let q = haar_unitary(d, rng);
    let mut phases: Vec<f64> = (0..d).map(|_| 2.0 * std::f64::consts::PI * rng.uniform()).collect();
    phases[1] = phases[0];
    let v = &(&q * &phase_diagonal(&phases)) * &q.dagger();
    (v, q)
}

/// Deterministically builds the inputs of a trial.
pub fn generate(check: Check, cfg: &CampaignConfig, rng: &mut Rng) -> Instance {
    let d = cfg.dim;
    let k = cfg.ensemble_size;
    match check {
        Check::ChiMonotone => {
            let ensemble = random_ensemble(d, k, rng);
            let dim_env = rng.range_inclusive(1, d * d);
            Instance::EnsembleChannel { ensemble, dilation: StinespringDilation::haar(d, dim_env, rng) }
        }
        Check::ChiUnitaryInvariant => {
            let ensemble = random_ensemble(d, k, rng);
            Instance::EnsembleUnitary { ensemble, unitary: haar_unitary(d, rng) }
        }
        Check::ChiAncillaInvariant => {
            let ensemble = random_ensemble(d, k, rng);
            let de = rng.range_inclusive(1, d);
            Instance::EnsembleAncilla { ensemble, env: random_state(de, rng) }
        }
        Check::ChiPartialTraceMonotone => {
            Instance::BipartiteEnsemble { ensemble: random_ensemble(2 * d, k, rng), dims: (d, 2) }
        }
        Check::Ssa => Instance::Tripartite { state: random_state(4 * d, rng), dims: (d, 2, 2) },
        Check::CqEntropyIdentity => {
            let n = rng.range_inclusive(1, k);
            let probs = rng.simplex(n);
            let states = (0..n).map(|_| random_state(d, rng)).collect();
            Instance::ClassicalQuantum { probs, states }
        }
        Check::HolevoBound => {
            let ensemble = random_ensemble(d, k, rng);
            let outcomes = rng.range_inclusive(2, d * d);
            let povm = Povm::random(d, outcomes, rng).expect("generic frame operator is invertible");
            Instance::EnsemblePovm { ensemble, povm }
        }
        Check::Concavity => Instance::Ensemble { ensemble: random_ensemble(d, k, rng) },
        Check::NoCloningResidual => {
            let s = random_pure(2, rng);
            if rng.uniform() < 0.5 {
                let targets: Vec<_> = (0..d).map(|_| haar_unitary(2, rng)).collect();
                let unitary = controlled_unitary(d, &targets).expect("Haar targets are unitary");
                let phi = PureState::basis(d, rng.range_inclusive(0, d - 1));
                let psi = PureState::basis(d, rng.range_inclusive(0, d - 1));
                Instance::Factorizing { unitary, phi, psi, s, dims: (d, 2) }
            } else {
                let (v, q) = degenerate_unitary(d, rng);
                let w = haar_unitary(2, rng);
                let unitary = v.kron(&w);
                // inputs from a shared eigenspace or from distinct eigenvectors
                let pick = |rng: &mut Rng| -> PureState {
                    if rng.uniform() < 0.5 {
                        let (a, b) = (rng.complex_normal(), rng.complex_normal());
                        let (c0, c1) = (q.column(0), q.column(1));
                        PureState::normalized(c0.iter().zip(&c1).map(|(x, y)| a * x + b * y).collect())
                            .expect("nonzero combination")
                    } else {
                        let j = rng.range_inclusive(2.min(d - 1), d - 1);
                        PureState::normalized(q.column(j)).expect("unit column")
                    }
                };
                let phi = pick(rng);
                let psi = pick(rng);
                Instance::Factorizing { unitary, phi, psi, s, dims: (d, 2) }
            }
        }
        Check::CloneChiGain => {
            let n = rng.range_inclusive(2, k);
            let probs = rng.simplex(n);
            let states = (0..n).map(|_| random_pure(d, rng).density()).collect();
            Instance::Ensemble { ensemble: Ensemble::new(probs, states).expect("valid by construction") }
        }
        Check::DisentangleChiGain => Instance::PureBipartite { state: random_pure(d * d, rng), dims: (d, d) },
    }
}

/// The check's slack on one instance.
pub fn evaluate(check: Check, instance: &Instance) -> Result<f64> {
    match (check, instance) {
        (Check::ChiMonotone, Instance::EnsembleChannel { ensemble, dilation }) => {
            chi_monotonicity_slack(&channel_from_dilation(dilation)?, ensemble)
        }
        (Check::ChiUnitaryInvariant, Instance::EnsembleUnitary { ensemble, unitary }) => {
            let ch = QuantumChannel::unitary(unitary.clone())?;
            Ok(-chi_monotonicity_slack(&ch, ensemble)?.abs())
        }
        (Check::ChiAncillaInvariant, Instance::EnsembleAncilla { ensemble, env }) => {
            Ok(-ancilla_invariance_slack(ensemble, env)?)
        }
        (Check::ChiPartialTraceMonotone, Instance::BipartiteEnsemble { ensemble, dims }) => {
            chi_partial_trace_slack(ensemble, *dims)
        }
        (Check::Ssa, Instance::Tripartite { state, dims }) => ssa_slack(state, *dims),
        (Check::CqEntropyIdentity, Instance::ClassicalQuantum { probs, states }) => {
            let joint = von_neumann_entropy(&cq_state(probs, probs.len(), states)?)?;
            let mut expected = shannon_entropy(probs)?;
            for (p, s) in probs.iter().zip(states) {
                expected += p * von_neumann_entropy(s)?;
            }
            Ok(-(joint - expected).abs())
        }
        (Check::HolevoBound, Instance::EnsemblePovm { ensemble, povm }) => holevo_gap(ensemble, povm),
        (Check::Concavity, Instance::Ensemble { ensemble }) => concavity_slack(ensemble),
        (Check::NoCloningResidual, Instance::Factorizing { unitary, phi, psi, s, dims }) => {
            Ok(-no_cloning_residual(unitary, phi, psi, s, *dims)?)
        }
        (Check::CloneChiGain, Instance::Ensemble { ensemble }) => cloning_chi_gain(ensemble),
        (Check::DisentangleChiGain, Instance::PureBipartite { state, dims }) => disentangle_chi_gain(state, *dims),
        (check, _) => Err(Error::InvalidArgument(format!("instance kind does not match check {check}"))),
    }
}

/// Regenerates and evaluates a single trial from its stream.
pub fn replay(check: Check, cfg: &CampaignConfig, stream: u64) -> (Instance, Result<f64>) {
    let mut rng = Rng::new(cfg.seed, stream);
    let instance = generate(check, cfg, &mut rng);
    let slack = evaluate(check, &instance);
    (instance, slack)
}

/// A failing trial with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    pub stream: u64,
    /// Absent when evaluation itself failed.
    pub slack: Option<f64>,
    pub error: Option<String>,
    pub inputs: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: Check,
    pub trials: usize,
    pub min_slack: f64,
    pub max_violation: f64,
    /// Trials whose slack fell below `-tolerance`, in trial order.
    pub violations: Vec<Counterexample>,
    /// Trials whose evaluation returned an error, in trial order.
    pub errors: Vec<Counterexample>,
    /// Seconds.
    pub wall_time: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub checks: Vec<CheckReport>,
    pub total_violations: usize,
    pub wall_time: f64,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn check(&self, check: Check) -> Option<&CheckReport> {
        self.checks.iter().find(|r| r.check == check)
    }
}

struct TrialOutcome {
    trial: usize,
    stream: u64,
    slack: Result<f64>,
    instance: Instance,
}

fn run_check(check: Check, cfg: &CampaignConfig, exec: Execution) -> CheckReport {
    let started = Instant::now();
    let one = |trial: usize| {
        let stream = check.stream(trial as u64);
        let (instance, slack) = replay(check, cfg, stream);
        TrialOutcome { trial, stream, slack, instance }
    };
    let outcomes: Vec<TrialOutcome> = if exec.serial {
        (0..cfg.trials).map(one).collect()
    } else {
        (0..cfg.trials).into_par_iter().map(one).collect()
    };

    let mut min_slack = f64::INFINITY;
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        let record = |slack: Option<f64>, error: Option<String>| Counterexample {
            trial: o.trial,
            seed: cfg.seed,
            stream: o.stream,
            slack,
            error,
            inputs: serde_json::to_value(&o.instance).expect("instances serialize"),
        };
        match o.slack {
            Ok(s) => {
                min_slack = min_slack.min(s);
                if s < -cfg.tolerance {
                    violations.push(record(Some(s), None));
                }
            }
            Err(e) => errors.push(record(None, Some(e.to_string()))),
        }
    }
    let max_violation = if min_slack.is_finite() { (-min_slack).max(0.0) } else { 0.0 };
    CheckReport {
        check,
        trials: cfg.trials,
        min_slack: if min_slack.is_finite() { min_slack } else { 0.0 },
        max_violation,
        violations,
        errors,
        wall_time: started.elapsed().as_secs_f64(),
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with(cfg, Execution::default())
}

pub fn run_campaign_with(cfg: &CampaignConfig, exec: Execution) -> Result<CampaignReport> {
    cfg.validate()?;
    let checks = cfg.checks()?;
    let started = Instant::now();
    let body = || checks.iter().map(|&c| run_check(c, cfg, exec)).collect::<Vec<_>>();
    let reports = match exec.jobs {
        Some(n) if !exec.serial => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?
            .install(body),
        _ => body(),
    };
    let total_violations = reports.iter().map(|r| r.violations.len()).sum();
    Ok(CampaignReport {
        config: cfg.clone(),
        checks: reports,
        total_violations,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

/// Removes every `wall_time` field, for comparing reports across runs.
pub fn strip_wall_time(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.remove("wall_time");
            map.values_mut().for_each(strip_wall_time);
        }
        serde_json::Value::Array(xs) => xs.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}
